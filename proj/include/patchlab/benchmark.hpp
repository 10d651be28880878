#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "patchlab/labstats.hpp"
#include "patchlab/pipelines.hpp"

namespace patchlab {

/// A named denoiser whose configuration depends on the noise level.
struct MethodSpec {
  std::string name;
  std::function<DenoiseConfig(double sigma)> make;
};

/// identity, the four pipelines, and the variants lra_svd_noboost,
/// lpg_pca_stage1 and bm3d_lite_stage1.
std::optional<MethodSpec> find_method(const std::string& name);
std::vector<std::string> registered_method_names();
/// The seven-method comparison list.
std::vector<std::string> default_benchmark_methods();

struct BenchmarkPlan {
  std::vector<LabeledImage> images;
  std::vector<double> sigmas{5, 10, 15, 20, 25};
  std::vector<MethodSpec> methods;
  std::uint64_t seed = 0;
};

struct BenchmarkRecord {
  std::size_t image = 0;
  double sigma = 0.0;
  std::size_t method = 0;
  std::uint64_t noise_seed = 0;
  double noisy_psnr = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double seconds = 0.0;  // wall time, never written to CSV
};

struct BenchmarkResult {
  std::vector<std::string> images;
  std::vector<double> sigmas;
  std::vector<std::string> methods;
  std::uint64_t seed = 0;
  std::vector<BenchmarkRecord> records;  // image-major, then sigma, then method

  /// Mean over images of one (sigma, method) cell.
  double average_psnr(double sigma, std::size_t method) const;
  double average_ssim(double sigma, std::size_t method) const;
};

/// Raised when a run fails; the message names the image, sigma and method.
class BenchmarkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every (image, sigma, method): seeded AWGN (shared by all methods), denoise,
/// PSNR and SSIM against the clean image.
BenchmarkResult run_benchmark(const BenchmarkPlan& plan);

/// One row per run followed by one "Average" row per (sigma, method).
void write_benchmark_csv(std::ostream& out, const BenchmarkResult& result);
/// Image rows, method columns (PSNR and SSIM), an Average row per sigma.
void write_table2_csv(std::ostream& out, const BenchmarkResult& result);
/// Sigma rows, per-method average PSNR and SSIM columns.
void write_sigma_averages_csv(std::ostream& out, const BenchmarkResult& result);

}  // namespace patchlab
