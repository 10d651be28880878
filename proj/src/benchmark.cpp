#include "patchlab/benchmark.hpp"

#include <chrono>
#include <ostream>

#include "patchlab/noise.hpp"
#include "patchlab/quality.hpp"

namespace patchlab {

namespace {

struct Variant {
  const char* name;
  Method method;
  void (*adjust)(DenoiseConfig&);
};

const Variant kVariants[] = {
    {"identity", Method::identity, nullptr},
    {"nlm", Method::nlm, nullptr},
    {"lra_svd", Method::lra_svd, nullptr},
    {"lpg_pca", Method::lpg_pca, nullptr},
    {"bm3d_lite", Method::bm3d_lite, nullptr},
    {"lra_svd_noboost", Method::lra_svd, [](DenoiseConfig& c) { c.boost.kind = Boost::Kind::none; }},
    {"lpg_pca_stage1", Method::lpg_pca, [](DenoiseConfig& c) { c.stages = 1; }},
    {"bm3d_lite_stage1", Method::bm3d_lite, [](DenoiseConfig& c) { c.stages = 1; }},
};

}  // namespace

std::optional<MethodSpec> find_method(const std::string& name) {
  for (const Variant& v : kVariants)
    if (name == v.name)
      return MethodSpec{v.name, [v](double sigma) {
                          DenoiseConfig cfg = default_config(v.method, sigma);
                          if (v.adjust) v.adjust(cfg);
                          return cfg;
                        }};
  return std::nullopt;
}

std::vector<std::string> registered_method_names() {
  std::vector<std::string> out;
  for (const Variant& v : kVariants) out.emplace_back(v.name);
  return out;
}

std::vector<std::string> default_benchmark_methods() {
  return {"nlm",           "lra_svd",        "lpg_pca",         "bm3d_lite",
          "lra_svd_noboost", "lpg_pca_stage1", "bm3d_lite_stage1"};
}

BenchmarkResult run_benchmark(const BenchmarkPlan& plan) {
  require(!plan.images.empty(), "benchmark plan has no images");
  require(!plan.sigmas.empty(), "benchmark plan has no noise levels");
  require(!plan.methods.empty(), "benchmark plan has no methods");
  for (double s : plan.sigmas) require(s >= 0.0, "benchmark sigma must be >= 0");

  BenchmarkResult result;
  result.seed = plan.seed;
  result.sigmas = plan.sigmas;
  for (const auto& im : plan.images) result.images.push_back(im.label);
  for (const auto& m : plan.methods) result.methods.push_back(m.name);
  result.records.reserve(plan.images.size() * plan.sigmas.size() * plan.methods.size());

  for (std::size_t i = 0; i < plan.images.size(); ++i) {
    const GrayImage& clean = plan.images[i].image;
    for (double sigma : plan.sigmas) {
      const std::uint64_t seed = noise_seed(plan.seed, i, sigma);
      const GrayImage noisy = add_awgn(clean, {sigma, seed});
      const double noisy_psnr = psnr(clean, noisy);
      for (std::size_t m = 0; m < plan.methods.size(); ++m) {
        BenchmarkRecord rec{i, sigma, m, seed, noisy_psnr};
        try {
          const auto t0 = std::chrono::steady_clock::now();
          const GrayImage out = denoise(noisy, plan.methods[m].make(sigma));
          rec.seconds =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          rec.psnr_db = psnr(clean, out);
          rec.ssim = ssim(clean, out);
        } catch (const std::exception& e) {
          throw BenchmarkError("benchmark failed on image " + plan.images[i].label + ", sigma " +
                               format_number(sigma) + ", method " + plan.methods[m].name + ": " +
                               e.what());
        }
        result.records.push_back(rec);
      }
    }
  }
  return result;
}

double BenchmarkResult::average_psnr(double sigma, std::size_t method) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records)
    if (r.sigma == sigma && r.method == method) {
      sum += r.psnr_db;
      ++n;
    }
  require(n > 0, "average_psnr: no matching records");
  return sum / static_cast<double>(n);
}

double BenchmarkResult::average_ssim(double sigma, std::size_t method) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records)
    if (r.sigma == sigma && r.method == method) {
      sum += r.ssim;
      ++n;
    }
  require(n > 0, "average_ssim: no matching records");
  return sum / static_cast<double>(n);
}

void write_benchmark_csv(std::ostream& out, const BenchmarkResult& result) {
  const char* header = "image_id,sigma,method,seed,noisy_psnr_db,psnr_db,ssim";
  out << "# bench schema: " << header << "; methods: ";
  for (std::size_t m = 0; m < result.methods.size(); ++m)
    out << (m ? "," : "") << result.methods[m];
  out << "; run seed " << result.seed << '\n' << header << '\n';
  for (const auto& r : result.records)
    out << result.images[r.image] << ',' << format_number(r.sigma) << ','
        << result.methods[r.method] << ',' << r.noise_seed << ',' << format_number(r.noisy_psnr)
        << ',' << format_number(r.psnr_db) << ',' << format_number(r.ssim) << '\n';
  for (double sigma : result.sigmas)
    for (std::size_t m = 0; m < result.methods.size(); ++m) {
      double noisy = 0.0;
      std::size_t n = 0;
      for (const auto& r : result.records)
        if (r.sigma == sigma && r.method == m) {
          noisy += r.noisy_psnr;
          ++n;
        }
      out << "Average," << format_number(sigma) << ',' << result.methods[m] << ','
          << result.seed << ',' << format_number(noisy / static_cast<double>(n)) << ','
          << format_number(result.average_psnr(sigma, m)) << ','
          << format_number(result.average_ssim(sigma, m)) << '\n';
    }
}

void write_table2_csv(std::ostream& out, const BenchmarkResult& result) {
  std::string header = "image_id,sigma";
  for (const auto& m : result.methods) header += "," + m + "_psnr," + m + "_ssim";
  out << "# table2 schema: " << header << "; run seed " << result.seed << '\n' << header << '\n';
  const std::size_t nm = result.methods.size();
  for (double sigma : result.sigmas) {
    for (std::size_t i = 0; i < result.images.size(); ++i) {
      out << result.images[i] << ',' << format_number(sigma);
      for (std::size_t m = 0; m < nm; ++m)
        for (const auto& r : result.records)
          if (r.image == i && r.sigma == sigma && r.method == m)
            out << ',' << format_number(r.psnr_db) << ',' << format_number(r.ssim);
      out << '\n';
    }
    out << "Average," << format_number(sigma);
    for (std::size_t m = 0; m < nm; ++m)
      out << ',' << format_number(result.average_psnr(sigma, m)) << ','
          << format_number(result.average_ssim(sigma, m));
    out << '\n';
  }
}

void write_sigma_averages_csv(std::ostream& out, const BenchmarkResult& result) {
  std::string header = "sigma";
  for (const auto& m : result.methods) header += "," + m + "_psnr," + m + "_ssim";
  out << "# sigma averages schema: " << header << "; run seed " << result.seed << '\n'
      << header << '\n';
  for (double sigma : result.sigmas) {
    out << format_number(sigma);
    for (std::size_t m = 0; m < result.methods.size(); ++m)
      out << ',' << format_number(result.average_psnr(sigma, m)) << ','
          << format_number(result.average_ssim(sigma, m));
    out << '\n';
  }
}

}  // namespace patchlab
