#include <doctest.h>

#include <cmath>
#include <sstream>

#include "patchlab/benchmark.hpp"
#include "patchlab/errors.hpp"
#include "patchlab/iqa.hpp"
#include "patchlab/isp.hpp"
#include "patchlab/statistics.hpp"
#include "support.hpp"

using namespace patchlab;
using testsupport::TempDir;

namespace {

double logistic(double s, const std::array<double, 4>& b) {
  return b[0] + (b[1] - b[0]) / (1.0 + std::exp(-(s - b[2]) / b[3]));
}

GrayImage box_blur(const GrayImage& img) {
  GrayImage out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c) {
      double s = 0.0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          s += img.at(mirror_index(r + dr, img.height()), mirror_index(c + dc, img.width()));
      out.at(r, c) = s / 9.0;
    }
  return out;
}

RgbImage scene(int w, int h, double (*f)(int, int, int)) {
  RgbImage rgb{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      rgb.red.at(r, c) = f(0, r, c);
      rgb.green.at(r, c) = f(1, r, c);
      rgb.blue.at(r, c) = f(2, r, c);
    }
  return rgb;
}

MethodSpec method(const std::string& name) {
  auto m = find_method(name);
  REQUIRE(m.has_value());
  return *m;
}

}  // namespace

TEST_SUITE("evalharness") {
  TEST_CASE("identity benchmark reproduces the noisy baseline") {
    BenchmarkPlan plan;
    plan.images = testsupport::cropped_set(256, 3);
    plan.sigmas = {5};
    plan.methods = {method("identity")};
    const BenchmarkResult res = run_benchmark(plan);
    REQUIRE(res.records.size() == 3);
    for (const auto& r : res.records) {
      CHECK(r.psnr_db == doctest::Approx(20.0 * std::log10(255.0 / 5.0)).epsilon(0.3 / 34.15));
      CHECK(r.psnr_db == r.noisy_psnr);
    }
  }

  TEST_CASE("benchmark layout, sharing of noise and CSV writers") {
    BenchmarkPlan plan;
    plan.images = testsupport::cropped_set(48, 2);
    plan.sigmas = {10, 20};
    plan.methods = {method("bm3d_lite"), method("nlm"), method("identity")};
    plan.seed = 9;
    const BenchmarkResult res = run_benchmark(plan);
    CHECK(res.records.size() == 2 * 2 * 3);
    for (std::size_t k = 0; k < res.records.size(); k += 3) {
      CHECK(res.records[k].noise_seed == res.records[k + 1].noise_seed);
      CHECK(res.records[k].noisy_psnr == res.records[k + 2].noisy_psnr);
      CHECK(res.records[k].psnr_db > res.records[k].noisy_psnr);
    }
    std::ostringstream long_csv, table2, sigma_csv;
    write_benchmark_csv(long_csv, res);
    write_table2_csv(table2, res);
    write_sigma_averages_csv(sigma_csv, res);
    std::istringstream t2(table2.str());
    std::string line;
    std::getline(t2, line);
    CHECK(line[0] == '#');
    std::getline(t2, line);
    CHECK(line == "image_id,sigma,bm3d_lite_psnr,bm3d_lite_ssim,nlm_psnr,nlm_ssim,identity_psnr,identity_ssim");
    int rows = 0, averages = 0;
    while (std::getline(t2, line)) {
      ++rows;
      averages += line.rfind("Average,", 0) == 0;
    }
    CHECK(rows == 2 * 2 + 2);
    CHECK(averages == 2);
    CHECK(res.average_psnr(10, 0) ==
          doctest::Approx((res.records[0].psnr_db + res.records[6].psnr_db) / 2.0));

    std::ostringstream again;
    write_benchmark_csv(again, run_benchmark(plan));
    CHECK(again.str() == long_csv.str());
  }

  TEST_CASE("benchmark failures name the run") {
    BenchmarkPlan plan;
    plan.images = testsupport::cropped_set(32, 1);
    plan.sigmas = {10};
    plan.methods = {{"broken", [](double s) {
                       DenoiseConfig c = default_config(Method::nlm, s);
                       c.step = 0;
                       return c;
                     }}};
    try {
      run_benchmark(plan);
      FAIL("expected a benchmark error");
    } catch (const BenchmarkError& e) {
      const std::string msg = e.what();
      CHECK(msg.find(plan.images[0].label) != std::string::npos);
      CHECK(msg.find("sigma 10") != std::string::npos);
      CHECK(msg.find("broken") != std::string::npos);
    }
    plan.methods.clear();
    CHECK_THROWS_AS(run_benchmark(plan), ContractError);
  }

  TEST_CASE("method registry") {
    CHECK(default_benchmark_methods().size() == 7);
    for (const auto& n : default_benchmark_methods()) CHECK(find_method(n).has_value());
    CHECK_FALSE(find_method("wnnm").has_value());
    CHECK(method("lpg_pca_stage1").make(10).stages == 1);
    CHECK(method("lra_svd_noboost").make(10).boost.kind == Boost::Kind::none);
  }

  TEST_CASE("fit_logistic exact relationships") {
    std::vector<double> q;
    for (int i = 0; i < 40; ++i) q.push_back(0.3 + 0.015 * i + 0.002 * std::sin(i));
    const LogisticFit same = fit_logistic(q, q);
    // A logistic only approaches a straight line in the limit.
    CHECK(same.residual_sse < 1e-5);
    CHECK(correlation_report(same, q, q).cc == doctest::Approx(1.0).epsilon(1e-9));

    std::vector<double> neg(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) neg[i] = -q[i];
    const LogisticFit flipped = fit_logistic(neg, q);
    CHECK(correlation_report(flipped, neg, q).cc == doctest::Approx(1.0).epsilon(1e-9));

    const std::array<double, 4> beta{0, 1, 0.5, 0.1};
    std::vector<double> s, target;
    for (int i = 0; i <= 50; ++i) {
      s.push_back(i / 50.0);
      target.push_back(logistic(i / 50.0, beta));
    }
    const LogisticFit fit = fit_logistic(s, target);
    CHECK(correlation_report(fit, s, target).rmse < 1e-6);
    for (int i = 0; i < 4; ++i) CHECK(fit.beta[i] == doctest::Approx(beta[i]).epsilon(1e-4));
  }

  TEST_CASE("fit_logistic is equivariant under affine score changes") {
    Rng rng(12);
    std::vector<double> s, q, s2;
    for (int i = 0; i < 80; ++i) {
      const double v = rng.uniform01();
      s.push_back(v);
      s2.push_back(2.0 * v + 7.0);
      q.push_back(std::tanh(3.0 * (v - 0.4)) + 0.1 * rng.normal());
    }
    const auto p1 = fit_logistic(s, q).predict(s);
    const auto p2 = fit_logistic(s2, q).predict(s2);
    double ss = 0.0;
    for (std::size_t i = 0; i < p1.size(); ++i) ss += (p1[i] - p2[i]) * (p1[i] - p2[i]);
    CHECK(std::sqrt(ss / p1.size()) < 1e-6);
  }

  TEST_CASE("fit_logistic degenerate input and report identities") {
    const std::vector<double> flat(10, 3.0), q{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const LogisticFit fit = fit_logistic(flat, q);
    CHECK(fit.degenerate);
    CHECK(fit.predict(3.0) == doctest::Approx(5.5));
    CHECK_THROWS_AS(fit_logistic(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), ContractError);

    Rng rng(2);
    std::vector<double> s(30), y(30);
    for (int i = 0; i < 30; ++i) {
      s[i] = rng.normal();
      y[i] = s[i] + rng.normal();
    }
    const LogisticFit f = fit_logistic(s, y);
    const auto rep = correlation_report(f, s, y);
    CHECK(rep.rmse == doctest::Approx(std::sqrt(rep.sse / 30.0)));
    CHECK(rep.sse == doctest::Approx(f.residual_sse));
    CHECK(rep.cc >= 0.0);
    CHECK(rep.cc <= 1.0);

    std::ostringstream out;
    write_table4_csv(out, {{"sharpness_proxy", rep}});
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line == "metric,CC,SSE,RMSE");
  }

  TEST_CASE("demosaic: constants, passthrough and ramps") {
    const RgbImage flat = scene(16, 12, [](int, int, int) { return 77.0; });
    const RgbImage out = demosaic_bicubic_grgb(BayerImage::mosaic_of(flat));
    CHECK(out == flat);

    const BayerImage raw(8, 6, [] {
      std::vector<double> v(48);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>((i * 37) % 251);
      return v;
    }());
    const RgbImage d = demosaic_bicubic_grgb(raw);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 8; ++c) {
        const auto ch = BayerImage::channel_at(r, c);
        const GrayImage& plane = ch == BayerChannel::green ? d.green : ch == BayerChannel::red ? d.red : d.blue;
        CHECK(plane.at(r, c) == raw.at(r, c));
      }

    const RgbImage ramp = scene(32, 32, [](int ch, int, int c) { return 20.0 + 5.0 * c + ch; });
    const RgbImage dr = demosaic_bicubic_grgb(BayerImage::mosaic_of(ramp));
    // The 4-tap kernel reaches two lattice samples past each side, so stay 4 pixels in.
    double worst = 0.0;
    for (int r = 4; r < 28; ++r)
      for (int c = 4; c < 28; ++c) {
        worst = std::max(worst, std::abs(dr.red.at(r, c) - ramp.red.at(r, c)));
        worst = std::max(worst, std::abs(dr.green.at(r, c) - ramp.green.at(r, c)));
        worst = std::max(worst, std::abs(dr.blue.at(r, c) - ramp.blue.at(r, c)));
      }
    CHECK(worst < 0.5);

    CHECK_THROWS_AS(BayerImage(5, 4, std::vector<double>(20)), ContractError);
    CHECK_THROWS_AS(BayerImage(4, 3, std::vector<double>(12)), ContractError);
  }

  TEST_CASE("bayer planes roundtrip") {
    const BayerImage raw(8, 4, std::vector<double>(32, 1.0));
    BayerImage var = raw;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 8; ++c) var.at(r, c) = r * 8 + c;
    const auto planes = var.planes();
    CHECK(planes[0].at(0, 1) == 2.0);
    CHECK(planes[1].at(0, 0) == 1.0);
    CHECK(planes[2].at(0, 0) == 8.0);
    CHECK(planes[3].at(1, 1) == 27.0);
    CHECK(BayerImage::from_planes(planes) == var);
  }

  TEST_CASE("gray-world white balance") {
    const RgbImage gray = scene(6, 6, [](int, int r, int c) { return 10.0 + r + c; });
    const WhiteBalance same = gray_world_white_balance(gray);
    CHECK(same.gains == std::array<double, 3>{1, 1, 1});
    CHECK(same.image == gray);

    RgbImage tinted = gray;
    for (auto& v : tinted.red.samples()) v *= 2.0;
    for (auto& v : tinted.blue.samples()) v *= 0.7;
    const WhiteBalance wb = gray_world_white_balance(tinted);
    CHECK(wb.gains[0] == doctest::Approx(0.5));
    CHECK(wb.gains[1] == 1.0);
    CHECK(mean_value(wb.image.red) == doctest::Approx(mean_value(wb.image.green)).epsilon(1e-6));
    CHECK(mean_value(wb.image.blue) == doctest::Approx(mean_value(wb.image.green)).epsilon(1e-6));
    const WhiteBalance twice = gray_world_white_balance(wb.image);
    for (std::size_t i = 0; i < twice.image.red.size(); ++i) {
      CHECK(std::abs(twice.image.red[i] - wb.image.red[i]) <= 1e-9);
      CHECK(std::abs(twice.image.blue[i] - wb.image.blue[i]) <= 1e-9);
    }

    RgbImage dark = gray;
    for (auto& v : dark.blue.samples()) v = 0.0;
    CHECK_THROWS_AS(gray_world_white_balance(dark), ContractError);
  }

  TEST_CASE("sharpness proxy") {
    CHECK(builtin_sharpness_proxy(GrayImage(10, 10, 4.0)) == 0.0);
    const GrayImage img = testsupport::natural_crop(7, 64);
    const double s = builtin_sharpness_proxy(img);
    CHECK(builtin_sharpness_proxy(box_blur(img)) < s);
    GrayImage shifted = img;
    for (auto& v : shifted.samples()) v += 30.0;
    CHECK(builtin_sharpness_proxy(shifted) == doctest::Approx(s).epsilon(1e-12));
    const auto reg = NrMetricRegistry::builtin();
    REQUIRE(reg.find("sharpness_proxy") != nullptr);
    CHECK(reg.find("biqa") == nullptr);
  }

  TEST_CASE("nr evaluation table") {
    const RgbImage rgb{testsupport::natural_crop(1, 32), testsupport::natural_crop(2, 32),
                       testsupport::natural_crop(3, 32)};
    const std::vector<LabeledBayer> raws{{"a", BayerImage::mosaic_of(rgb)},
                                         {"b", BayerImage(32, 32, std::vector<double>(1024, 60.0))}};
    const std::vector<MethodSpec> methods{method("identity"), method("nlm")};

    const NrTable constant = run_nr_evaluation(raws, methods, {"const", [](const GrayImage&) { return 4.0; }});
    REQUIRE(constant.cells.size() == 2);
    for (const auto& row : constant.cells) {
      REQUIRE(row.size() == 2);
      for (const auto& cell : row) CHECK(cell == 4.0);
    }

    const auto proxy = *NrMetricRegistry::builtin().find("sharpness_proxy");
    const NrTable a = run_nr_evaluation(raws, {method("identity")}, proxy);
    const NrTable b = run_nr_evaluation(raws, {method("identity")}, proxy);
    CHECK(a.cells == b.cells);
    CHECK(a.cells[1][0] == 0.0);

    const NrTable failing = run_nr_evaluation(raws, methods, {"picky", [](const GrayImage& g) {
                                                if (builtin_sharpness_proxy(g) == 0.0)
                                                  throw std::runtime_error("unsupported");
                                                return 1.0;
                                              }});
    std::ostringstream out;
    write_table5_csv(out, failing);
    CHECK(out.str().find("\nb,-,-\n") != std::string::npos);
    CHECK(out.str().find("\na,1,1\n") != std::string::npos);
  }

  TEST_CASE("load_bayer reads the sidecar") {
    TempDir tmp;
    save_pgm(GrayImage(4, 4, 10.0), tmp / "m.pgm");
    CHECK_THROWS_AS(load_bayer(tmp / "m.pgm"), IoError);
    CHECK(load_bayer(tmp / "m.pgm", "grgb").width() == 4);
    testsupport::write_file(tmp / "m.pgm.bayer", "# mosaic\npattern = GRGB\n");
    CHECK(load_bayer(tmp / "m.pgm").at(3, 3) == 10.0);
    CHECK_THROWS_AS(load_bayer(tmp / "m.pgm", "rggb"), ContractError);
    testsupport::write_file(tmp / "m.pgm.bayer", "pattern=bggr\n");
    CHECK_THROWS_AS(load_bayer(tmp / "m.pgm"), ContractError);

    save_pgm(GrayImage(5, 4, 10.0), tmp / "odd.pgm");
    CHECK_THROWS_AS(load_bayer(tmp / "odd.pgm", "grgb"), ContractError);

    const BayerImage shipped = load_bayer(testsupport::data_dir() / "raw" / "astronaut_grgb.pgm");
    CHECK(shipped.width() % 2 == 0);
  }
}
