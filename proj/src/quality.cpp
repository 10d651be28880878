#include "patchlab/quality.hpp"

#include <array>
#include <cmath>

namespace patchlab {

double psnr(std::span<const double> reference, std::span<const double> test) {
  require(reference.size() == test.size() && !reference.empty(),
          "psnr: dimension mismatch");
  double sse = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference[i] - test[i];
    sse += d * d;
  }
  if (sse == 0.0) return kPsnrInfinity;
  const double mse = sse / static_cast<double>(reference.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double psnr(const GrayImage& reference, const GrayImage& test) {
  require(reference.same_shape(test), "psnr: dimension mismatch");
  return psnr(reference.samples(), test.samples());
}

namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = i - kWindow / 2;
    taps[i] = std::exp(-x * x / (2.0 * kWindowSigma * kWindowSigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Separable 'valid' Gaussian filter of a per-pixel field given by f(i).
template <typename F>
std::vector<double> filter_valid(int width, int height, F f) {
  static const auto taps = gaussian_taps();
  const int ow = width - kWindow + 1;
  const int oh = height - kWindow + 1;
  std::vector<double> horiz(static_cast<std::size_t>(height) * ow);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k)
        acc += taps[k] * f(static_cast<std::size_t>(r) * width + c + k);
      horiz[static_cast<std::size_t>(r) * ow + c] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int r = 0; r < oh; ++r)
    for (int c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k)
        acc += taps[k] * horiz[static_cast<std::size_t>(r + k) * ow + c];
      out[static_cast<std::size_t>(r) * ow + c] = acc;
    }
  return out;
}

}  // namespace

double ssim(const GrayImage& reference, const GrayImage& test) {
  require(reference.same_shape(test), "ssim: dimension mismatch");
  require(reference.width() >= kWindow && reference.height() >= kWindow,
          "ssim: image smaller than the 11x11 window");
  const int w = reference.width();
  const int h = reference.height();
  const auto x = reference.samples();
  const auto y = test.samples();
  const auto mu_x = filter_valid(w, h, [&](std::size_t i) { return x[i]; });
  const auto mu_y = filter_valid(w, h, [&](std::size_t i) { return y[i]; });
  const auto xx = filter_valid(w, h, [&](std::size_t i) { return x[i] * x[i]; });
  const auto yy = filter_valid(w, h, [&](std::size_t i) { return y[i] * y[i]; });
  const auto xy = filter_valid(w, h, [&](std::size_t i) { return x[i] * y[i]; });

  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double vx = xx[i] - mx * mx;
    const double vy = yy[i] - my * my;
    const double cxy = xy[i] - mx * my;
    total += ((2.0 * mx * my + kC1) * (2.0 * cxy + kC2)) /
             ((mx * mx + my * my + kC1) * (vx + vy + kC2));
  }
  return total / static_cast<double>(mu_x.size());
}

QualityScore measure_quality(const GrayImage& reference, const GrayImage& test) {
  return {psnr(reference, test), ssim(reference, test)};
}

}  // namespace patchlab
