#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "patchlab/grouping.hpp"
#include "patchlab/image.hpp"
#include "patchlab/shrinkage.hpp"

namespace patchlab {

enum class Method { identity, nlm, lra_svd, lpg_pca, bm3d_lite };

std::string to_string(Method method);
std::optional<Method> parse_method(const std::string& name);
std::vector<std::string> method_names();

struct Boost {
  enum class Kind { none, twicing, back_projection, sos };
  Kind kind = Kind::none;
  int iterations = 1;
  double delta = 0.5;  // back-projection relaxation, in (0,1)
};

std::string to_string(Boost::Kind kind);
std::optional<Boost::Kind> parse_boost(const std::string& name);

struct DenoiseConfig {
  Method method = Method::nlm;
  GroupingConfig grouping;
  ShrinkSpec shrink;
  /// Smoothing factor h of the NLM weights; 0 derives it as nlm_h_coeff * sigma.
  double nlm_h = 0.0;
  double nlm_h_coeff = 1.2;
  /// Std of the Gaussian patch kernel in the NLM distance.
  double nlm_kernel_sigma = 1.0;
  /// Stride between reference patches.
  int step = 3;
  Boost boost;
  /// Noise std in luminance units; negative means estimate from the input.
  double noise_sigma = -1.0;
  /// Number of filtering stages for lpg_pca and bm3d_lite (1 or 2).
  int stages = 2;
  /// LPG-PCA second stage noise variance factor: sigma2^2 = c * sigma^2.
  double stage2_noise_coeff = 0.35;
  /// LPG-PCA selection threshold theta = n * (2 sigma^2 + lpg_offset^2).
  double lpg_offset = 5.0;
  /// BM3D-lite stage-2 group size.
  int stage2_top_m = 32;
};

/// Reference configuration of each method at a given noise level.
DenoiseConfig default_config(Method method, double sigma);

/// Weighted per-pixel sums of overlapping patch estimates. May cover a band
/// of rows [row_offset, row_offset + rows) of a width x height image.
class Accumulator {
 public:
  Accumulator(int width, int height);
  Accumulator(int width, int height, int row_offset, int rows);

  int width() const { return width_; }
  int height() const { return height_; }
  int row_offset() const { return row_offset_; }
  int rows() const { return rows_; }

  void deposit(int row, int col, double value, double weight);
  /// Adds a row-major side x side patch estimate centred at `center`;
  /// samples falling outside the image are dropped.
  void deposit_patch(Coord center, int side, const double* values, double weight);
  /// Adds another band in place (fixed order is the caller's duty).
  void merge(const Accumulator& tile);

  double numerator(int row, int col) const;
  double denominator(int row, int col) const;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row - row_offset_) * width_ + col;
  }
  int width_, height_, row_offset_, rows_;
  std::vector<double> num_, den_;
};

/// numerator / denominator per pixel. The accumulator must span the whole
/// image; a pixel with zero weight raises a ContractError naming it.
GrayImage aggregate_finalize(const Accumulator& acc);

struct WeightedNeighbor {
  Coord center;
  double weight = 0.0;
};

/// Normalised NLM weights of every pixel in the search window of `center`.
std::vector<WeightedNeighbor> nlm_weights(const GrayImage& image, Coord center,
                                          const DenoiseConfig& config);

/// Noise sigma used by a config on a given input (estimated when negative).
double resolve_sigma(const DenoiseConfig& config, const GrayImage& image);

GrayImage nlm_denoise(const GrayImage& image, const DenoiseConfig& config);
GrayImage lra_svd_denoise(const GrayImage& image, const DenoiseConfig& config);
GrayImage lpg_pca_denoise(const GrayImage& image, const DenoiseConfig& config);
GrayImage bm3d_lite_denoise(const GrayImage& image, const DenoiseConfig& config);

using DenoiseFn = std::function<GrayImage(const GrayImage&)>;

/// estimate + f(noisy - estimate)
GrayImage boost_twicing(const GrayImage& noisy, const GrayImage& estimate, const DenoiseFn& f);
/// estimate + delta (noisy - estimate)
GrayImage boost_back_projection(const GrayImage& noisy, const GrayImage& estimate, double delta);
/// f(noisy + estimate) - estimate
GrayImage boost_sos(const GrayImage& noisy, const GrayImage& estimate, const DenoiseFn& f);

/// One pass of the configured method, no boosting.
GrayImage denoise_once(const GrayImage& image, const DenoiseConfig& config);
/// Full pipeline: one pass followed by the configured boosting iterations.
GrayImage denoise(const GrayImage& image, const DenoiseConfig& config);

/// Low-rank estimate of one group: centre rows, keep the rank chosen by the
/// residual-energy rule with tau^2 = c n m sigma^2 (or soft-threshold singular
/// values when shrink.kind == soft_sv), restore the mean.
Eigen::MatrixXd lowrank_group_estimate(const Eigen::MatrixXd& group, const ShrinkSpec& shrink,
                                       double sigma);

}  // namespace patchlab
