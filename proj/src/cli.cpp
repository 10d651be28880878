#include "patchlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "patchlab/benchmark.hpp"
#include "patchlab/isp.hpp"
#include "patchlab/noise.hpp"
#include "patchlab/parallel.hpp"
#include "patchlab/pgm.hpp"
#include "patchlab/quality.hpp"

namespace patchlab {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& values) {
  std::vector<std::string> parts;
  for (double v : values) parts.push_back(exact(v));
  return join(parts);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
    throw UsageError("invalid number for " + key + ": '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw UsageError("invalid integer for " + key + ": '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw UsageError("invalid boolean for " + key + ": '" + text + "'");
}

int positive(const std::string& key, int v) {
  if (v < 1) throw UsageError(key + " must be >= 1");
  return v;
}

double nonnegative(const std::string& key, double v) {
  if (v < 0.0) throw UsageError(key + " must be >= 0");
  return v;
}

int odd_side(const std::string& key, int v) {
  if (v < 1 || v % 2 == 0) throw UsageError(key + " must be odd and >= 1");
  return v;
}

const char* shrink_name(ShrinkSpec::Kind k) {
  switch (k) {
    case ShrinkSpec::Kind::hard: return "hard";
    case ShrinkSpec::Kind::soft_sv: return "soft_sv";
    case ShrinkSpec::Kind::wiener: return "wiener";
    case ShrinkSpec::Kind::tikhonov: return "tikhonov";
    case ShrinkSpec::Kind::rank_select: return "rank_select";
  }
  return "?";
}

// Files are produced in memory and written only once the command succeeded.
class Outputs {
 public:
  void add(fs::path path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }

  void commit() const {
    std::vector<fs::path> temps;
    try {
      for (const auto& [path, content] : files_) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        fs::path tmp = path;
        tmp += ".partial";
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("cannot write " + path.string());
      }
      for (std::size_t i = 0; i < files_.size(); ++i) fs::rename(temps[i], files_[i].first);
    } catch (...) {
      std::error_code ec;
      for (const auto& t : temps) fs::remove(t, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

template <typename Config>
void apply_file(Config& config, const std::map<std::string, std::string>& settings,
                const std::vector<std::string>& reserved,
                bool (*apply)(Config&, const std::string&, const std::string&)) {
  for (const auto& [key, value] : settings) {
    if (std::find(reserved.begin(), reserved.end(), key) != reserved.end()) continue;
    if (!apply(config, key, value)) throw UsageError("unknown configuration key: " + key);
  }
}

std::optional<std::string> setting(const std::map<std::string, std::string>& settings,
                                   const std::string& key) {
  const auto it = settings.find(key);
  if (it == settings.end()) return std::nullopt;
  return it->second;
}

MethodSpec require_method(const std::string& name) {
  auto spec = find_method(name);
  if (!spec)
    throw UsageError("unknown method '" + name + "'; valid methods: " +
                     join(registered_method_names(), ", "));
  return *spec;
}

// Method spec with config-file overrides applied after the defaults.
MethodSpec with_overrides(MethodSpec base, const std::map<std::string, std::string>& settings,
                          const std::vector<std::string>& reserved) {
  DenoiseConfig probe = base.make(1.0);
  apply_file(probe, settings, reserved, apply_denoise_setting);
  auto make = base.make;
  base.make = [make, settings, reserved](double sigma) {
    DenoiseConfig cfg = make(sigma);
    apply_file(cfg, settings, reserved, apply_denoise_setting);
    return cfg;
  };
  return base;
}

std::string manifest_header(const std::string& command, std::uint64_t seed) {
  return "# patchlab manifest\ncommand=" + command + "\nseed=" + std::to_string(seed) + "\n";
}

GrayImage read_input(const std::string& path) {
  if (!fs::exists(path)) throw IoError("input not found: " + path);
  return load_pgm(path);
}

// ---- commands ----------------------------------------------------------

struct DenoiseArgs {
  std::string input, output, method = "nlm", config, reference;
  double sigma = -1.0;
  std::uint64_t seed = 0;
  CLI::Option* method_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

int cmd_denoise(const DenoiseArgs& a, std::ostream& out) {
  const auto settings = a.config.empty() ? std::map<std::string, std::string>{} : read_config_file(a.config);
  std::string method = a.method;
  if (!a.method_opt->count())
    if (auto m = setting(settings, "method")) method = trim(*m);
  double sigma = -1.0;
  if (a.sigma_opt->count())
    sigma = a.sigma;
  else if (auto s = setting(settings, "sigma"))
    sigma = parse_double("sigma", *s);
  if ((a.sigma_opt->count() || setting(settings, "sigma")) && sigma < 0.0)
    throw UsageError("--sigma must be >= 0");
  const MethodSpec spec = with_overrides(require_method(method), settings, {"method", "sigma", "seed"});

  const GrayImage input = read_input(a.input);
  std::optional<GrayImage> reference;
  if (!a.reference.empty()) {
    reference = read_input(a.reference);
    if (!reference->same_shape(input)) throw UsageError("--reference has a different size than the input");
  }
  const GrayImage result = denoise(input, spec.make(sigma));

  Outputs files;
  files.add(a.output, encode_pgm(result));
  files.commit();
  if (reference) {
    const auto q = measure_quality(*reference, result);
    out << "psnr_db " << format_number(q.psnr_db) << "\nssim " << format_number(q.ssim) << '\n';
  }
  return 0;
}

struct NoiseArgs {
  std::string input, output;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

int cmd_noise(const NoiseArgs& a) {
  if (a.sigma < 0.0) throw UsageError("--sigma must be >= 0");
  const GrayImage input = read_input(a.input);
  Outputs files;
  files.add(a.output, encode_pgm(add_awgn(input, {a.sigma, a.seed})));
  files.commit();
  return 0;
}

const std::vector<std::string> kExperiments = {"fig2", "fig3", "fig4", "fig5",
                                               "fig6", "fig7", "fig8", "fig9"};

struct StatsPlan {
  StatsConfig config;
  int n_patches = 0;
  std::vector<double> sigmas;
  std::vector<double> thetas;
};

StatsPlan default_stats_plan(const std::string& id) {
  StatsPlan p;
  if (id == "fig2") p.thetas = {25, 100, 400};
  if (id == "fig3") p.sigmas = {0, 5, 15, 25};
  if (id == "fig4") p = {{}, 500, {0, 15, 40}, {}};
  if (id == "fig5") p = {{}, 500, {15}, {}};
  if (id == "fig6" || id == "fig7") p = {{}, 100, {0, 5, 10, 15, 25, 40}, {}};
  if (id == "fig8") p = {{}, 500, {15}, {}};
  if (id == "fig9") p = {{}, 500, {15, 30, 40}, {}};
  return p;
}

struct StatsArgs {
  std::string experiment, images, out, config;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

int cmd_stats(const StatsArgs& a) {
  if (std::find(kExperiments.begin(), kExperiments.end(), a.experiment) == kExperiments.end())
    throw UsageError("unknown experiment '" + a.experiment + "'; valid: " + join(kExperiments, ", "));
  const auto settings = a.config.empty() ? std::map<std::string, std::string>{} : read_config_file(a.config);
  StatsPlan plan = default_stats_plan(a.experiment);
  const std::vector<std::string> reserved = {"n_patches", "sigmas", "sigma", "thetas", "seed"};
  apply_file(plan.config, settings, reserved, apply_stats_setting);
  if (auto v = setting(settings, "n_patches")) plan.n_patches = positive("n_patches", parse_int("n_patches", *v));
  if (auto v = setting(settings, "sigmas")) plan.sigmas = parse_number_list(*v);
  if (auto v = setting(settings, "sigma")) plan.sigmas = {parse_double("sigma", *v)};
  if (auto v = setting(settings, "thetas")) plan.thetas = parse_number_list(*v);
  plan.config.seed = 0;
  if (auto v = setting(settings, "seed")) plan.config.seed = static_cast<std::uint64_t>(parse_int("seed", *v));
  if (a.seed_opt->count()) plan.config.seed = a.seed;
  for (double s : plan.sigmas) nonnegative("sigma", s);
  if ((a.experiment == "fig5" || a.experiment == "fig8") && plan.sigmas.size() != 1)
    throw UsageError(a.experiment + " takes a single sigma");

  const auto images = load_image_dir(a.images);
  const std::string& id = a.experiment;
  const StatsConfig& c = plan.config;
  ExperimentTable table;
  if (id == "fig2") table = exp_similar_patch_histogram(images, plan.thetas, c);
  if (id == "fig3") table = exp_similarity_threshold_distribution(images, plan.sigmas, c);
  if (id == "fig4") table = exp_complexity_vs_threshold(images, plan.n_patches, plan.sigmas, c);
  if (id == "fig5") table = exp_psnr_vs_threshold(images, plan.n_patches, plan.sigmas[0], c);
  if (id == "fig6") table = exp_jitter_retention(images, plan.n_patches, plan.sigmas, c);
  if (id == "fig7") table = exp_jitter_psnr_drop(images, plan.n_patches, plan.sigmas, c);
  if (id == "fig8") table = exp_sparsity_rank_curves(images, plan.n_patches, plan.sigmas[0], c);
  if (id == "fig9") table = exp_sparsity_vs_threshold(images, plan.n_patches, plan.sigmas, c);

  std::ostringstream csv;
  write_csv(csv, table);
  std::string manifest = manifest_header("stats", c.seed) + "experiment=" + id +
                         "\nimages=" + join(table.images) + "\nrecords=" +
                         std::to_string(table.records.size()) + "\n";
  if (plan.n_patches > 0) manifest += "n_patches=" + std::to_string(plan.n_patches) + "\n";
  if (!plan.sigmas.empty()) manifest += "sigmas=" + join(plan.sigmas) + "\n";
  if (!plan.thetas.empty()) manifest += "thetas=" + join(plan.thetas) + "\n";
  manifest += describe(c);
  Outputs files;
  files.add(fs::path(a.out) / (id + ".csv"), csv.str());
  files.add(fs::path(a.out) / (id + "_manifest.txt"), manifest);
  files.commit();
  return 0;
}

struct BenchArgs {
  std::string images, sigmas, methods, out, config;
  std::uint64_t seed = 0;
  CLI::Option* sigmas_opt = nullptr;
  CLI::Option* methods_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

int cmd_bench(const BenchArgs& a) {
  const auto settings = a.config.empty() ? std::map<std::string, std::string>{} : read_config_file(a.config);
  BenchmarkPlan plan;
  std::vector<std::string> method_names = default_benchmark_methods();
  if (auto v = setting(settings, "sigmas")) plan.sigmas = parse_number_list(*v);
  if (auto v = setting(settings, "methods")) method_names = parse_name_list(*v);
  if (auto v = setting(settings, "seed")) plan.seed = static_cast<std::uint64_t>(parse_int("seed", *v));
  if (a.sigmas_opt->count()) plan.sigmas = parse_number_list(a.sigmas);
  if (a.methods_opt->count()) method_names = parse_name_list(a.methods);
  if (a.seed_opt->count()) plan.seed = a.seed;
  if (plan.sigmas.empty()) throw UsageError("empty sigma list");
  if (method_names.empty()) throw UsageError("empty method list");
  for (double s : plan.sigmas) nonnegative("sigma", s);
  const std::vector<std::string> reserved = {"sigmas", "methods", "seed"};
  for (const auto& name : method_names)
    plan.methods.push_back(with_overrides(require_method(name), settings, reserved));
  if (!fs::is_directory(a.images)) throw UsageError("image directory not found: " + a.images);
  plan.images = load_image_dir(a.images);

  const BenchmarkResult result = run_benchmark(plan);

  const fs::path out(a.out);
  const fs::path stem = out.parent_path() / out.stem();
  std::ostringstream runs, table2, by_sigma;
  write_benchmark_csv(runs, result);
  write_table2_csv(table2, result);
  write_sigma_averages_csv(by_sigma, result);
  std::string manifest = manifest_header("bench", plan.seed) + "images=" + join(result.images) +
                         "\nsigmas=" + join(plan.sigmas) + "\nmethods=" + join(result.methods) + "\n";
  for (const auto& m : plan.methods)
    for (double s : plan.sigmas)
      manifest += "\n[" + m.name + " sigma=" + exact(s) + "]\n" + describe(m.make(s));
  Outputs files;
  files.add(out, runs.str());
  files.add(fs::path(stem.string() + "_table2.csv"), table2.str());
  files.add(fs::path(stem.string() + "_sigma.csv"), by_sigma.str());
  files.add(fs::path(stem.string() + "_manifest.txt"), manifest);
  files.commit();
  return 0;
}

struct IspArgs {
  std::string raw, pattern, method = "nlm", metric = "sharpness_proxy", out, config;
  double sigma = -1.0;
  CLI::Option* pattern_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
};

int cmd_isp(const IspArgs& a, std::ostream& out) {
  const auto settings = a.config.empty() ? std::map<std::string, std::string>{} : read_config_file(a.config);
  const NrMetricRegistry registry = NrMetricRegistry::builtin();
  const NrMetricPlugin* metric = registry.find(a.metric);
  if (!metric)
    throw UsageError("unknown metric '" + a.metric + "'; registered metrics: " + join(registry.names(), ", "));
  std::optional<std::string> pattern;
  if (a.pattern_opt->count()) {
    pattern = a.pattern;
    if (a.pattern != "grgb") throw UsageError("unsupported Bayer pattern '" + a.pattern + "' (supported: grgb)");
  }
  if (a.sigma_opt->count() && a.sigma < 0.0) throw UsageError("--sigma must be >= 0");
  const MethodSpec spec = with_overrides(require_method(a.method), settings, {});
  if (!fs::exists(a.raw)) throw IoError("raw file not found: " + a.raw);
  std::optional<BayerImage> raw;
  try {
    raw = load_bayer(a.raw, pattern);
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }

  const DenoiseConfig cfg = spec.make(a.sigma_opt->count() ? a.sigma : -1.0);
  const RgbImage rgb = process_raw(*raw, cfg);
  const double score = metric->evaluate(luminance(rgb));

  std::string manifest = manifest_header("isp", 0) + "raw=" + a.raw + "\npattern=grgb\nmetric=" +
                         metric->name + "\nscore=" + exact(score) + "\n" + describe(cfg);
  Outputs files;
  files.add(fs::path(a.out + ".ppm"), encode_ppm(rgb));
  files.add(fs::path(a.out + "_manifest.txt"), manifest);
  files.commit();
  out << metric->name << ' ' << format_number(score) << '\n';
  return 0;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      throw UsageError("config line " + std::to_string(number) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

bool apply_denoise_setting(DenoiseConfig& c, const std::string& key, const std::string& value) {
  if (key == "patch_side") c.grouping.patch_side = odd_side(key, parse_int(key, value));
  else if (key == "search_radius") c.grouping.search_radius = static_cast<int>(nonnegative(key, parse_int(key, value)));
  else if (key == "top_m") c.grouping.selection = Selection::nearest(positive(key, parse_int(key, value)));
  else if (key == "normalize_distance") c.grouping.normalize_distance = parse_bool(key, value);
  else if (key == "step") c.step = positive(key, parse_int(key, value));
  else if (key == "nlm_h") c.nlm_h = nonnegative(key, parse_double(key, value));
  else if (key == "nlm_h_coeff") c.nlm_h_coeff = nonnegative(key, parse_double(key, value));
  else if (key == "nlm_kernel_sigma") c.nlm_kernel_sigma = nonnegative(key, parse_double(key, value));
  else if (key == "shrink") {
    const std::string v = trim(value);
    const ShrinkSpec::Kind kinds[] = {ShrinkSpec::Kind::hard, ShrinkSpec::Kind::soft_sv, ShrinkSpec::Kind::wiener,
                                      ShrinkSpec::Kind::tikhonov, ShrinkSpec::Kind::rank_select};
    const auto it = std::find_if(std::begin(kinds), std::end(kinds), [&](auto k) { return v == shrink_name(k); });
    if (it == std::end(kinds)) throw UsageError("unknown shrink kind '" + v + "'");
    c.shrink.kind = *it;
  } else if (key == "lambda") c.shrink.lambda = nonnegative(key, parse_double(key, value));
  else if (key == "mu") c.shrink.mu = nonnegative(key, parse_double(key, value));
  else if (key == "tau_sq_coeff") c.shrink.tau_sq_coeff = nonnegative(key, parse_double(key, value));
  else if (key == "soft_coeff") c.shrink.soft_coeff = nonnegative(key, parse_double(key, value));
  else if (key == "boost") {
    const auto kind = parse_boost(trim(value));
    if (!kind) throw UsageError("unknown boost kind '" + value + "'");
    c.boost.kind = *kind;
  } else if (key == "boost_iterations") c.boost.iterations = static_cast<int>(nonnegative(key, parse_int(key, value)));
  else if (key == "boost_delta") {
    c.boost.delta = parse_double(key, value);
    if (!(c.boost.delta > 0.0 && c.boost.delta < 1.0)) throw UsageError("boost_delta must be in (0,1)");
  } else if (key == "stages") {
    c.stages = parse_int(key, value);
    if (c.stages != 1 && c.stages != 2) throw UsageError("stages must be 1 or 2");
  } else if (key == "stage2_noise_coeff") c.stage2_noise_coeff = nonnegative(key, parse_double(key, value));
  else if (key == "lpg_offset") c.lpg_offset = nonnegative(key, parse_double(key, value));
  else if (key == "stage2_top_m") c.stage2_top_m = positive(key, parse_int(key, value));
  else return false;
  return true;
}

std::string describe(const DenoiseConfig& c) {
  std::ostringstream s;
  s << "method=" << to_string(c.method) << "\npatch_side=" << c.grouping.patch_side
    << "\nsearch_radius=" << c.grouping.search_radius << "\nselection="
    << (c.grouping.selection.kind == Selection::Kind::top_m
            ? "top_m:" + std::to_string(c.grouping.selection.top_m)
            : "threshold:" + exact(c.grouping.selection.theta))
    << "\nnormalize_distance=" << (c.grouping.normalize_distance ? "true" : "false")
    << "\nstep=" << c.step << "\nnoise_sigma=" << exact(c.noise_sigma)
    << "\nnlm_h=" << exact(c.nlm_h) << "\nnlm_h_coeff=" << exact(c.nlm_h_coeff)
    << "\nnlm_kernel_sigma=" << exact(c.nlm_kernel_sigma) << "\nshrink=" << shrink_name(c.shrink.kind)
    << "\nlambda=" << exact(c.shrink.lambda) << "\nmu=" << exact(c.shrink.mu)
    << "\ntau_sq_coeff=" << exact(c.shrink.tau_sq_coeff) << "\nsoft_coeff=" << exact(c.shrink.soft_coeff)
    << "\nboost=" << to_string(c.boost.kind) << "\nboost_iterations=" << c.boost.iterations
    << "\nboost_delta=" << exact(c.boost.delta) << "\nstages=" << c.stages
    << "\nstage2_noise_coeff=" << exact(c.stage2_noise_coeff) << "\nlpg_offset=" << exact(c.lpg_offset)
    << "\nstage2_top_m=" << c.stage2_top_m << '\n';
  return s.str();
}

bool apply_stats_setting(StatsConfig& c, const std::string& key, const std::string& value) {
  if (key == "patch_side") c.patch_side = odd_side(key, parse_int(key, value));
  else if (key == "search_radius") c.search_radius = positive(key, parse_int(key, value));
  else if (key == "group_size") c.group_size = positive(key, parse_int(key, value));
  else if (key == "normalize_distance") c.normalize_distance = parse_bool(key, value);
  else if (key == "tau_sq_coeff") c.tau_sq_coeff = nonnegative(key, parse_double(key, value));
  else if (key == "sparsity_patch_side") c.sparsity_patch_side = odd_side(key, parse_int(key, value));
  else if (key == "sparsity_search_radius") c.sparsity_search_radius = positive(key, parse_int(key, value));
  else return false;
  return true;
}

std::string describe(const StatsConfig& c) {
  std::ostringstream s;
  s << "patch_side=" << c.patch_side << "\nsearch_radius=" << c.search_radius
    << "\ngroup_size=" << c.group_size
    << "\nnormalize_distance=" << (c.normalize_distance ? "true" : "false")
    << "\ntau_sq_coeff=" << exact(c.tau_sq_coeff) << "\nsparsity_patch_side=" << c.sparsity_patch_side
    << "\nsparsity_search_radius=" << c.sparsity_search_radius << '\n';
  return s.str();
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : parse_name_list(text)) out.push_back(parse_double("list item", item));
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw UsageError("empty item in list '" + text + "'");
    out.push_back(item);
  }
  return out;
}

std::vector<LabeledImage> load_image_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw UsageError("image directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
  if (files.empty()) throw UsageError("no .pgm images in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<LabeledImage> out;
  for (const auto& f : files) out.push_back({f.stem().string(), load_pgm(f)});
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Patch-based image denoising lab", "patchlab"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: PATCHLAB_THREADS, then all cores)")
      ->check(CLI::PositiveNumber);

  DenoiseArgs d;
  auto* den = app.add_subcommand("denoise", "Denoise a PGM image");
  den->add_option("input", d.input, "Noisy PGM")->required();
  den->add_option("output", d.output, "Denoised PGM")->required();
  d.method_opt = den->add_option("--method", d.method, "Method (" + join(registered_method_names(), ", ") + ")");
  d.sigma_opt = den->add_option("--sigma", d.sigma, "Noise std; estimated when omitted");
  d.seed_opt = den->add_option("--seed", d.seed, "Seed (recorded; pipelines are deterministic)");
  den->add_option("--config", d.config, "key=value settings file");
  den->add_option("--reference", d.reference, "Clean PGM for PSNR/SSIM");

  NoiseArgs n;
  auto* noi = app.add_subcommand("noise", "Add white Gaussian noise");
  noi->add_option("input", n.input, "Clean PGM")->required();
  noi->add_option("output", n.output, "Noisy PGM")->required();
  noi->add_option("--sigma", n.sigma, "Noise std")->required();
  noi->add_option("--seed", n.seed, "Noise seed");

  StatsArgs s;
  auto* st = app.add_subcommand("stats", "Patch statistics experiments");
  st->add_option("--experiment", s.experiment, join(kExperiments, "|"))->required();
  st->add_option("--images", s.images, "Directory of PGM images")->required();
  s.seed_opt = st->add_option("--seed", s.seed, "Site and noise seed");
  st->add_option("--out", s.out, "Output directory")->required();
  st->add_option("--config", s.config, "key=value settings file");

  BenchArgs b;
  auto* be = app.add_subcommand("bench", "Full-reference benchmark");
  be->add_option("--images", b.images, "Directory of clean PGM images")->required();
  b.sigmas_opt = be->add_option("--sigmas", b.sigmas, "Comma-separated noise levels");
  b.methods_opt = be->add_option("--methods", b.methods, "Comma-separated method names");
  be->add_option("--out", b.out, "Output CSV")->required();
  b.seed_opt = be->add_option("--seed", b.seed, "Noise seed");
  be->add_option("--config", b.config, "key=value settings file");

  IspArgs i;
  auto* isp = app.add_subcommand("isp", "Raw Bayer processing and NR scoring");
  isp->add_option("--raw", i.raw, "16-bit PGM mosaic")->required();
  i.pattern_opt = isp->add_option("--pattern", i.pattern, "Bayer pattern (grgb)");
  isp->add_option("--method", i.method, "Denoiser applied to each Bayer plane (default nlm)");
  isp->add_option("--metric", i.metric, "No-reference metric (default sharpness_proxy)");
  i.sigma_opt = isp->add_option("--sigma", i.sigma, "Noise std of the mosaic; estimated when omitted");
  isp->add_option("--out", i.out, "Output prefix")->required();
  isp->add_option("--config", i.config, "key=value settings file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  set_thread_count(threads);
  try {
    if (*den) return cmd_denoise(d, out);
    if (*noi) return cmd_noise(n);
    if (*st) return cmd_stats(s);
    if (*be) return cmd_bench(b);
    if (*isp) return cmd_isp(i, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace patchlab
