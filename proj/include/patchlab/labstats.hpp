#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "patchlab/grouping.hpp"
#include "patchlab/image.hpp"

namespace patchlab {

struct LabeledImage {
  std::string label;
  GrayImage image;
};

/// One measurement of a patch-statistics experiment. The meaning of `index`
/// and of the value slots is given by the owning table.
struct ExperimentRecord {
  std::uint32_t image = 0;  // position in ExperimentTable::images
  double sigma = 0.0;
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::array<double, 3> values{};
};

struct ExperimentTable {
  std::string id;
  std::string index_name;
  std::vector<std::string> images;
  std::vector<std::string> fields;
  std::vector<ExperimentRecord> records;

  std::size_t field(const std::string& name) const;
  /// Values of one field, optionally restricted to a noise level.
  std::vector<double> column(const std::string& name) const;
  std::vector<double> column(const std::string& name, double sigma) const;
};

/// '#' schema line, header row, then one row per record. Numbers use six
/// significant digits; the PSNR sentinel prints as "inf".
void write_csv(std::ostream& out, const ExperimentTable& table);
std::string format_number(double value);

struct StatsConfig {
  int patch_side = 5;
  int search_radius = 4;  // 9x9 window
  int group_size = 15;    // m nearest, reference included
  /// Distances are mean squared differences per pixel when true.
  bool normalize_distance = true;
  /// tau^2 = c * n * m * sigma^2 in the group rank rule.
  double tau_sq_coeff = 1.0;
  int sparsity_patch_side = 9;
  int sparsity_search_radius = 10;
  std::uint64_t seed = 0;
};

/// Noisy copy of images[i] at sigma, seeded from (config seed, i, sigma).
GrayImage corrupt_for_experiment(const GrayImage& image, std::size_t image_index, double sigma,
                                 std::uint64_t seed);

/// Denoised-patch PSNR of the reference column for every rank r = 0..k of
/// the row-centred group, with k = min(n, m). `noisy_group` holds the noisy
/// patches; `clean_reference` is the clean version of the reference patch.
/// Errors are evaluated in the singular basis of the group, so r = k
/// reproduces the noisy reference without rounding.
struct RankCurve {
  std::vector<double> psnr_db;       // k + 1 entries
  std::vector<double> atom_energy;   // k entries, squared singular values
};
RankCurve group_rank_curve(const Eigen::MatrixXd& noisy_group, std::size_t reference,
                           std::span<const double> clean_reference);

/// First r maximising the curve.
int best_rank(const RankCurve& curve);

// fig2: per-theta histogram of count_similar over interior pixels (full
// search window inside the image). Fields: threshold, count, frequency.
ExperimentTable exp_similar_patch_histogram(const std::vector<LabeledImage>& images,
                                            const std::vector<double>& thetas,
                                            const StatsConfig& config);

// fig3: similarity threshold (m-th nearest distance) of every pixel per sigma.
ExperimentTable exp_similarity_threshold_distribution(const std::vector<LabeledImage>& images,
                                                      const std::vector<double>& sigmas,
                                                      const StatsConfig& config);

// fig4: clean-patch complexity against the noisy similarity threshold.
ExperimentTable exp_complexity_vs_threshold(const std::vector<LabeledImage>& images,
                                            int n_patches, const std::vector<double>& sigmas,
                                            const StatsConfig& config);

// fig5: n_patches per image; group denoised by rank selection, reference
// PSNR against the clean patch. Fields: threshold, psnr_db, rank.
ExperimentTable exp_psnr_vs_threshold(const std::vector<LabeledImage>& images, int n_patches,
                                      double sigma, const StatsConfig& config);

// fig6: percentage of the m nearest centres at sigma that are also among
// the m nearest at sigma 0.
ExperimentTable exp_jitter_retention(const std::vector<LabeledImage>& images, int n_patches,
                                     const std::vector<double>& sigmas,
                                     const StatsConfig& config);

// fig7: PSNR(noisy-selected group) - PSNR(clean-selected centres on the
// noisy image). Fields: psnr_drop, psnr_db, oracle_psnr_db.
ExperimentTable exp_jitter_psnr_drop(const std::vector<LabeledImage>& images, int n_patches,
                                     const std::vector<double>& sigmas,
                                     const StatsConfig& config);

// fig8: rank curve of each sampled group, one record per r = 1..k.
// Fields: rank, psnr_db, atom_energy.
ExperimentTable exp_sparsity_rank_curves(const std::vector<LabeledImage>& images, int n_patches,
                                         double sigma, const StatsConfig& config);

// fig9: similarity threshold and best rank per sampled group and sigma.
ExperimentTable exp_sparsity_vs_threshold(const std::vector<LabeledImage>& images,
                                          int n_patches, const std::vector<double>& sigmas,
                                          const StatsConfig& config);

}  // namespace patchlab
