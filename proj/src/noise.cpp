#include "patchlab/noise.hpp"

#include <algorithm>
#include <cmath>

#include "patchlab/random.hpp"

namespace patchlab {

GrayImage add_awgn(const GrayImage& image, const NoiseSpec& spec) {
  require(spec.sigma >= 0.0, "add_awgn: sigma must be >= 0");
  GrayImage out = image;
  if (spec.sigma == 0.0) return out;
  Rng rng(spec.seed);
  for (double& s : out.samples()) s += spec.sigma * rng.normal();
  return out;
}

std::vector<double> laplacian_interior(const GrayImage& image) {
  require(image.width() >= 3 && image.height() >= 3, "laplacian: image must be >= 3x3");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(image.width() - 2) * (image.height() - 2));
  for (int r = 1; r + 1 < image.height(); ++r)
    for (int c = 1; c + 1 < image.width(); ++c) {
      // Differences first, so flat regions give exactly zero.
      const double x = image.at(r, c);
      out.push_back((image.at(r - 1, c) - x) + (image.at(r + 1, c) - x) +
                    (image.at(r, c - 1) - x) + (image.at(r, c + 1) - x));
    }
  return out;
}

namespace {

double median_in_place(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  return m;
}

}  // namespace

double estimate_noise_sigma(const GrayImage& image) {
  std::vector<double> lap = laplacian_interior(image);
  const double med = median_in_place(lap);
  for (double& x : lap) x = std::abs(x - med);
  const double mad = median_in_place(lap);
  return mad / (0.6745 * std::sqrt(20.0));
}

std::uint64_t noise_seed(std::uint64_t seed, std::size_t image_index, double sigma) {
  const auto sigma_key = static_cast<std::uint64_t>(std::llround(sigma * 1000.0));
  return mix_seed(seed, image_index, sigma_key);
}

}  // namespace patchlab
