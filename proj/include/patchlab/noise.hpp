#pragma once

#include <cstdint>

#include "patchlab/image.hpp"

namespace patchlab {

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Adds i.i.d. N(0, sigma^2) to every sample, drawn in raster order from
/// Rng(spec.seed). Output is not clamped.
GrayImage add_awgn(const GrayImage& image, const NoiseSpec& spec);

/// Seed of the noise realisation for image `image_index` at `sigma` under a
/// run seed; the same triple always yields the same noise.
std::uint64_t noise_seed(std::uint64_t seed, std::size_t image_index, double sigma);

/// Robust noise level: MAD of the 4-neighbour Laplacian response over the
/// image interior, divided by 0.6745 * sqrt(20).
double estimate_noise_sigma(const GrayImage& image);

/// Response of the 4-neighbour Laplacian [0 1 0; 1 -4 1; 0 1 0] on the
/// interior (height-2) x (width-2) region.
std::vector<double> laplacian_interior(const GrayImage& image);

}  // namespace patchlab
