#include <doctest.h>

#include <cmath>

#include "patchlab/errors.hpp"
#include "patchlab/noise.hpp"
#include "patchlab/pgm.hpp"
#include "patchlab/quality.hpp"
#include "support.hpp"

using namespace patchlab;
using testsupport::TempDir;

namespace {

double mse(const GrayImage& a, const GrayImage& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

// Straightforward SSIM: weighted moments of every valid 11x11 window.
double reference_ssim(const GrayImage& x, const GrayImage& y) {
  double w[11][11], total = 0.0;
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) {
      w[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2.0 * 1.5 * 1.5));
      total += w[i][j];
    }
  const double c1 = std::pow(0.01 * 255, 2), c2 = std::pow(0.03 * 255, 2);
  double sum = 0.0;
  int count = 0;
  for (int r = 0; r + 11 <= x.height(); ++r)
    for (int c = 0; c + 11 <= x.width(); ++c) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
          const double k = w[i][j] / total, a = x.at(r + i, c + j), b = y.at(r + i, c + j);
          mx += k * a;
          my += k * b;
          sxx += k * a * a;
          syy += k * b * b;
          sxy += k * a * b;
        }
      const double vx = sxx - mx * mx, vy = syy - my * my, cxy = sxy - mx * my;
      sum += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  return sum / count;
}

}  // namespace

TEST_SUITE("imagecore") {
  TEST_CASE("load_pgm reads a plain P2 file") {
    TempDir tmp;
    testsupport::write_file(tmp / "a.pgm", "P2 2 2 255\n0 128 255 64\n");
    const GrayImage img = load_pgm(tmp / "a.pgm");
    CHECK(img == GrayImage(2, 2, std::vector<double>{0, 128, 255, 64}));
  }

  TEST_CASE("load_pgm scales 16-bit maxval to 255") {
    TempDir tmp;
    std::string bytes = "P5\n2 1\n65535\n";
    bytes += std::string("\xff\xff\xff\xff", 4);
    testsupport::write_file(tmp / "b.pgm", bytes);
    const GrayImage img = load_pgm(tmp / "b.pgm");
    CHECK(img[0] == 255.0);
    CHECK(img[1] == 255.0);

    bytes = "P5\n1 1\n65535\n";
    bytes += std::string("\x80\x00", 2);
    testsupport::write_file(tmp / "c.pgm", bytes);
    CHECK(load_pgm(tmp / "c.pgm")[0] == doctest::Approx(32768.0 * 255.0 / 65535.0).epsilon(1e-15));
  }

  TEST_CASE("load_pgm error paths") {
    TempDir tmp;
    testsupport::write_file(tmp / "short.pgm", "P2 2 2 255\n1 2 3\n");
    CHECK_THROWS_AS(load_pgm(tmp / "short.pgm"), IoError);
    testsupport::write_file(tmp / "bad.pgm", "P2 2 x 255\n1 2 3 4\n");
    try {
      load_pgm(tmp / "bad.pgm");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
    }
    testsupport::write_file(tmp / "p5short.pgm", "P5 2 2 255\n\x01\x02");
    CHECK_THROWS_AS(load_pgm(tmp / "p5short.pgm"), IoError);
    CHECK_THROWS_AS(load_pgm(tmp / "missing.pgm"), IoError);
  }

  TEST_CASE("save_pgm clamps, rounds and roundtrips integral images") {
    TempDir tmp;
    save_pgm(GrayImage(1, 1, 255.7), tmp / "hi.pgm");
    CHECK(testsupport::read_file(tmp / "hi.pgm").back() == '\xff');
    save_pgm(GrayImage(1, 1, -3.0), tmp / "lo.pgm");
    CHECK(testsupport::read_file(tmp / "lo.pgm").back() == '\0');
    CHECK(to_byte(2.5) == 3);
    CHECK(to_byte(2.49) == 2);

    GrayImage img = testsupport::random_image(7, 5, 3);
    for (auto& v : img.samples()) v = std::floor(v);
    save_pgm(img, tmp / "rt.pgm");
    CHECK(load_pgm(tmp / "rt.pgm") == img);

    const GrayImage frac = testsupport::random_image(6, 6, 4);
    save_pgm(frac, tmp / "frac.pgm");
    const GrayImage back = load_pgm(tmp / "frac.pgm");
    for (std::size_t i = 0; i < frac.size(); ++i) CHECK(std::abs(back[i] - frac[i]) <= 0.5);

    CHECK_THROWS_AS(save_pgm(img, tmp / "no_such_dir" / "x.pgm"), IoError);
  }

  TEST_CASE("add_awgn is deterministic and calibrated") {
    const GrayImage clean = testsupport::natural_crop(0, 512);
    CHECK(add_awgn(clean, {0.0, 7}) == clean);
    const GrayImage a = add_awgn(clean, {5.0, 11});
    CHECK(a == add_awgn(clean, {5.0, 11}));
    CHECK_FALSE(a == add_awgn(clean, {5.0, 12}));
    const double m = mse(clean, a);
    CHECK(m >= 23.5);
    CHECK(m <= 26.5);
    CHECK(psnr(clean, a) == doctest::Approx(20.0 * std::log10(255.0 / 5.0)).epsilon(0.15 / 34.15));

    // Not clamped: a saturated image goes beyond 255.
    const GrayImage white = add_awgn(GrayImage(64, 64, 255.0), {20.0, 1});
    CHECK(*std::max_element(white.samples().begin(), white.samples().end()) > 255.0);
  }

  TEST_CASE("psnr values and sentinel") {
    const GrayImage zero(2, 2, 0.0);
    CHECK(psnr(zero, zero) == kPsnrInfinity);
    const GrayImage t(2, 2, std::vector<double>{16, 0, 0, 0});
    CHECK(psnr(zero, t) == doctest::Approx(30.069).epsilon(0.001 / 30.069));
    CHECK(psnr(zero, t) == doctest::Approx(10.0 * std::log10(65025.0 / 64.0)));
    const GrayImage t2(2, 2, std::vector<double>{17, 0, 0, 0});
    CHECK(psnr(zero, t2) < psnr(zero, t));
    CHECK_THROWS_AS(psnr(zero, GrayImage(3, 2)), ContractError);
  }

  TEST_CASE("ssim: identity, symmetry, range and scalar oracle") {
    const GrayImage ref = testsupport::natural_crop(1, 64);
    CHECK(ssim(ref, ref) == 1.0);
    const GrayImage noisy = add_awgn(ref, {20.0, 3});
    CHECK(std::abs(ssim(ref, noisy) - ssim(noisy, ref)) <= 1e-12);
    const double s = ssim(ref, noisy);
    CHECK(s > -1.0);
    CHECK(s < 1.0);

    GrayImage shifted = ref;
    for (auto& v : shifted.samples()) v += 10.0;
    CHECK(ssim(ref, shifted) < 1.0);
    // Full images; the astronaut's near-black background drags its luminance term below 0.9.
    const auto full = testsupport::standard_set();
    for (std::size_t i = 0; i < full.size(); ++i) {
      GrayImage up = full[i].image;
      for (auto& v : up.samples()) v += 10.0;
      const double so = ssim(full[i].image, up);
      CAPTURE(full[i].label);
      CHECK(so < 1.0);
      if (full[i].label != "01_astronaut") CHECK(so > 0.9);
    }

    const GrayImage a = crop(ref, 10, 10, 16, 16), b = crop(noisy, 10, 10, 16, 16);
    CHECK(ssim(a, b) == doctest::Approx(reference_ssim(a, b)).epsilon(1e-10));
    CHECK(ssim(a, crop(shifted, 10, 10, 16, 16)) ==
          doctest::Approx(reference_ssim(a, crop(shifted, 10, 10, 16, 16))).epsilon(1e-10));

    CHECK_THROWS_AS(ssim(GrayImage(10, 10), GrayImage(10, 10)), ContractError);
    CHECK_THROWS_AS(ssim(ref, a), ContractError);
  }

  TEST_CASE("estimate_noise_sigma") {
    CHECK(estimate_noise_sigma(GrayImage(64, 64, 100.0)) < 0.5);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const double est = estimate_noise_sigma(add_awgn(GrayImage(256, 256, 128.0), {10.0, seed}));
      CHECK(est >= 9.0);
      CHECK(est <= 11.0);
    }
    const GrayImage nat = testsupport::natural_crop(0, 256);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const double est = estimate_noise_sigma(add_awgn(nat, {25.0, seed}));
      CHECK(est >= 21.25);
      CHECK(est <= 28.75);
    }
  }

  TEST_CASE("mirror_index reflects whole samples") {
    CHECK(mirror_index(-1, 5) == 1);
    CHECK(mirror_index(-2, 5) == 2);
    CHECK(mirror_index(5, 5) == 3);
    CHECK(mirror_index(6, 5) == 2);
    CHECK(mirror_index(3, 1) == 0);
    for (int i = -20; i < 20; ++i) {
      const int m = mirror_index(i, 4);
      CHECK(m >= 0);
      CHECK(m < 4);
    }
  }
}
