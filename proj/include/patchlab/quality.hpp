#pragma once

#include <limits>

#include "patchlab/image.hpp"

namespace patchlab {

/// Stand-in for +inf PSNR (zero MSE): the largest finite double.
inline constexpr double kPsnrInfinity = std::numeric_limits<double>::max();

struct QualityScore {
  double psnr_db = 0.0;
  double ssim = 0.0;
};

/// 10 log10(255^2 / MSE); peak fixed at 255.
double psnr(const GrayImage& reference, const GrayImage& test);

/// PSNR of two equal-length sample vectors (patch-level measurements).
double psnr(std::span<const double> reference, std::span<const double> test);

/// Mean SSIM over all valid 11x11 windows (Gaussian sigma 1.5,
/// C1 = (0.01*255)^2, C2 = (0.03*255)^2).
double ssim(const GrayImage& reference, const GrayImage& test);

QualityScore measure_quality(const GrayImage& reference, const GrayImage& test);

}  // namespace patchlab
