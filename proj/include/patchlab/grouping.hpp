#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "patchlab/image.hpp"

namespace patchlab {

/// Row-major flattening of a side x side window centred on a pixel.
struct Patch {
  std::vector<double> values;
  Coord center;
  int side = 0;
};

/// Neighbour selection rule: all candidates within a distance threshold, or
/// the m nearest (reference always included).
struct Selection {
  enum class Kind { threshold, top_m };
  Kind kind = Kind::top_m;
  double theta = 0.0;
  int top_m = 15;

  static Selection threshold(double theta) { return {Kind::threshold, theta, 0}; }
  static Selection nearest(int m) { return {Kind::top_m, 0.0, m}; }
};

struct GroupingConfig {
  int patch_side = 5;
  /// Candidate centres lie in the (2r+1)^2 window around the reference,
  /// clipped to the image.
  int search_radius = 4;
  Selection selection;
  /// Divide the squared distance by n (per-sample convention).
  bool normalize_distance = false;
};

/// One candidate patch of a neighbourhood search.
struct Neighbor {
  Coord center;
  double distance = 0.0;
};

/// Similar patches stacked as columns of an n x m matrix, sorted by
/// nondecreasing distance to the reference (ties in raster order).
struct PatchGroup {
  Eigen::MatrixXd columns;
  std::vector<Coord> centers;
  std::vector<double> distances;
  std::size_t reference_index = 0;
  int side = 0;
  /// Threshold selection found nothing but the reference itself.
  bool rare = false;

  std::size_t size() const { return centers.size(); }
};

/// Mirror-padded copy of an image with fast patch access and distance
/// evaluation. All searches in the library go through this type.
class PatchSearcher {
 public:
  PatchSearcher(const GrayImage& image, int patch_side);

  int width() const { return width_; }
  int height() const { return height_; }
  int patch_side() const { return side_; }
  std::size_t patch_size() const { return static_cast<std::size_t>(side_) * side_; }

  /// Squared Euclidean distance between the patches centred at a and b.
  double distance(Coord a, Coord b) const;
  /// Distance with per-position weights (row-major, patch_size() entries).
  double weighted_distance(Coord a, Coord b, std::span<const double> weights) const;

  void copy_patch(Coord center, double* out) const;
  Patch patch(Coord center) const;

  /// Every candidate centre in the clipped window, in raster order.
  std::vector<Neighbor> candidates(Coord center, int radius, bool normalize = false) const;

  /// Applies a selection rule to a candidate list. The returned list is
  /// sorted by (distance, raster order) and always holds the reference.
  static std::vector<Neighbor> select(const std::vector<Neighbor>& candidates, Coord reference,
                                      const Selection& selection);

  /// Stack the patches at `centers` as columns.
  Eigen::MatrixXd stack(const std::vector<Coord>& centers) const;

 private:
  const double* origin(Coord c) const {
    return padded_.data() + static_cast<std::size_t>(c.row) * stride_ + c.col;
  }

  int width_;
  int height_;
  int side_;
  int stride_;
  std::vector<double> padded_;
};

Patch extract_patch(const GrayImage& image, Coord center, int side);
double patch_distance(const Patch& a, const Patch& b);

/// Centred, sum-normalised 2D Gaussian weights over a side x side grid.
std::vector<double> gaussian_patch_kernel(int side, double kernel_sigma);
double gaussian_weighted_distance(const Patch& a, const Patch& b, double kernel_sigma);

PatchGroup gather_group(const GrayImage& image, Coord center, const GroupingConfig& config);
/// Group whose membership is decided on `searcher` but whose columns are read
/// from `values` (e.g. regroup on a pilot estimate, collect noisy samples).
PatchGroup gather_group(const PatchSearcher& searcher, const PatchSearcher& values,
                        Coord center, const GroupingConfig& config);

/// Distance of the m-th most similar candidate, reference included.
double similarity_threshold(const GrayImage& image, Coord center, int m,
                            const GroupingConfig& config);
double similarity_threshold(const PatchSearcher& searcher, Coord center, int m,
                            const GroupingConfig& config);

/// Number of non-reference candidates within distance theta.
std::size_t count_similar(const GrayImage& image, Coord center, double theta,
                          const GroupingConfig& config);
std::size_t count_similar(const PatchSearcher& searcher, Coord center, double theta,
                          const GroupingConfig& config);

/// Sample standard deviation (n-1 denominator) of the patch values.
double patch_complexity(const Patch& patch);

}  // namespace patchlab
