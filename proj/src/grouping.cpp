#include "patchlab/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace patchlab {

PatchSearcher::PatchSearcher(const GrayImage& image, int patch_side)
    : width_(image.width()), height_(image.height()), side_(patch_side) {
  require(patch_side >= 1 && patch_side % 2 == 1, "patch side must be odd and positive");
  const int half = side_ / 2;
  stride_ = width_ + 2 * half;
  padded_.resize(static_cast<std::size_t>(stride_) * (height_ + 2 * half));
  for (int r = 0; r < height_ + 2 * half; ++r) {
    const int sr = mirror_index(r - half, height_);
    for (int c = 0; c < stride_; ++c)
      padded_[static_cast<std::size_t>(r) * stride_ + c] =
          image.at(sr, mirror_index(c - half, width_));
  }
}

double PatchSearcher::distance(Coord a, Coord b) const {
  const double* pa = origin(a);
  const double* pb = origin(b);
  double acc = 0.0;
  for (int k = 0; k < side_; ++k, pa += stride_, pb += stride_)
    for (int j = 0; j < side_; ++j) {
      const double d = pa[j] - pb[j];
      acc += d * d;
    }
  return acc;
}

double PatchSearcher::weighted_distance(Coord a, Coord b, std::span<const double> weights) const {
  const double* pa = origin(a);
  const double* pb = origin(b);
  const double* w = weights.data();
  double acc = 0.0;
  for (int k = 0; k < side_; ++k, pa += stride_, pb += stride_, w += side_)
    for (int j = 0; j < side_; ++j) {
      const double d = pa[j] - pb[j];
      acc += w[j] * d * d;
    }
  return acc;
}

void PatchSearcher::copy_patch(Coord center, double* out) const {
  const double* p = origin(center);
  for (int k = 0; k < side_; ++k, p += stride_, out += side_) std::copy(p, p + side_, out);
}

Patch PatchSearcher::patch(Coord center) const {
  Patch out;
  out.values.resize(patch_size());
  out.center = center;
  out.side = side_;
  copy_patch(center, out.values.data());
  return out;
}

std::vector<Neighbor> PatchSearcher::candidates(Coord center, int radius, bool normalize) const {
  require(center.row >= 0 && center.row < height_ && center.col >= 0 && center.col < width_,
          "search centre outside image");
  require(radius >= 0, "search radius must be >= 0");
  const int r0 = std::max(0, center.row - radius);
  const int r1 = std::min(height_ - 1, center.row + radius);
  const int c0 = std::max(0, center.col - radius);
  const int c1 = std::min(width_ - 1, center.col + radius);
  const double scale = normalize ? 1.0 / static_cast<double>(patch_size()) : 1.0;
  std::vector<Neighbor> out;
  out.reserve(static_cast<std::size_t>(r1 - r0 + 1) * (c1 - c0 + 1));
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) {
      const Coord q{r, c};
      out.push_back({q, q == center ? 0.0 : distance(center, q) * scale});
    }
  return out;
}

std::vector<Neighbor> PatchSearcher::select(const std::vector<Neighbor>& candidates,
                                            Coord reference, const Selection& selection) {
  // Candidates arrive in raster order, so the index is the tie-break key.
  std::vector<std::size_t> order;
  std::size_t ref_pos = candidates.size();
  order.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].center == reference)
      ref_pos = i;
    else
      order.push_back(i);
  }
  require(ref_pos < candidates.size(), "reference centre missing from candidate list");
  auto less = [&](std::size_t a, std::size_t b) {
    return candidates[a].distance < candidates[b].distance ||
           (candidates[a].distance == candidates[b].distance && a < b);
  };

  std::vector<std::size_t> chosen;
  if (selection.kind == Selection::Kind::top_m) {
    require(selection.top_m >= 1, "top_m must be >= 1");
    const std::size_t extra =
        std::min(order.size(), static_cast<std::size_t>(selection.top_m - 1));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(extra),
                      order.end(), less);
    chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(extra));
  } else {
    require(selection.theta >= 0.0, "threshold must be >= 0");
    for (std::size_t i : order)
      if (candidates[i].distance <= selection.theta) chosen.push_back(i);
  }
  chosen.push_back(ref_pos);
  std::sort(chosen.begin(), chosen.end(), less);

  std::vector<Neighbor> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(candidates[i]);
  return out;
}

Eigen::MatrixXd PatchSearcher::stack(const std::vector<Coord>& centers) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(patch_size()),
                      static_cast<Eigen::Index>(centers.size()));
  for (std::size_t j = 0; j < centers.size(); ++j)
    copy_patch(centers[j], out.col(static_cast<Eigen::Index>(j)).data());
  return out;
}

Patch extract_patch(const GrayImage& image, Coord center, int side) {
  require(image.contains(center), "extract_patch: centre outside image");
  require(side >= 1 && side % 2 == 1, "extract_patch: side must be odd");
  Patch out;
  out.center = center;
  out.side = side;
  out.values.reserve(static_cast<std::size_t>(side) * side);
  const int half = side / 2;
  for (int dr = -half; dr <= half; ++dr)
    for (int dc = -half; dc <= half; ++dc)
      out.values.push_back(image.at(mirror_index(center.row + dr, image.height()),
                                    mirror_index(center.col + dc, image.width())));
  return out;
}

double patch_distance(const Patch& a, const Patch& b) {
  require(a.values.size() == b.values.size(), "patch_distance: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    acc += d * d;
  }
  return acc;
}

std::vector<double> gaussian_patch_kernel(int side, double kernel_sigma) {
  require(kernel_sigma > 0.0, "kernel sigma must be > 0");
  std::vector<double> w(static_cast<std::size_t>(side) * side);
  const int half = side / 2;
  double sum = 0.0;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const double d2 = static_cast<double>((r - half) * (r - half) + (c - half) * (c - half));
      const double v = std::exp(-d2 / (2.0 * kernel_sigma * kernel_sigma));
      w[static_cast<std::size_t>(r) * side + c] = v;
      sum += v;
    }
  for (double& v : w) v /= sum;
  return w;
}

double gaussian_weighted_distance(const Patch& a, const Patch& b, double kernel_sigma) {
  require(a.values.size() == b.values.size(), "gaussian_weighted_distance: size mismatch");
  require(a.side * a.side == static_cast<int>(a.values.size()),
          "gaussian_weighted_distance: patch is not square");
  const auto w = gaussian_patch_kernel(a.side, kernel_sigma);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    acc += w[i] * d * d;
  }
  return acc;
}

PatchGroup gather_group(const PatchSearcher& searcher, const PatchSearcher& values,
                        Coord center, const GroupingConfig& config) {
  require(searcher.patch_side() == values.patch_side(), "gather_group: patch side mismatch");
  const auto picked = PatchSearcher::select(
      searcher.candidates(center, config.search_radius, config.normalize_distance), center,
      config.selection);
  PatchGroup group;
  group.side = searcher.patch_side();
  group.centers.reserve(picked.size());
  group.distances.reserve(picked.size());
  for (std::size_t i = 0; i < picked.size(); ++i) {
    if (picked[i].center == center) group.reference_index = i;
    group.centers.push_back(picked[i].center);
    group.distances.push_back(picked[i].distance);
  }
  group.columns = values.stack(group.centers);
  group.rare = config.selection.kind == Selection::Kind::threshold && picked.size() == 1;
  return group;
}

PatchGroup gather_group(const GrayImage& image, Coord center, const GroupingConfig& config) {
  const PatchSearcher searcher(image, config.patch_side);
  return gather_group(searcher, searcher, center, config);
}

double similarity_threshold(const PatchSearcher& searcher, Coord center, int m,
                            const GroupingConfig& config) {
  require(m >= 1, "similarity_threshold: m must be >= 1");
  auto cands = searcher.candidates(center, config.search_radius, config.normalize_distance);
  const std::size_t k = std::min(cands.size(), static_cast<std::size_t>(m)) - 1;
  std::nth_element(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(k), cands.end(),
                   [](const Neighbor& a, const Neighbor& b) { return a.distance < b.distance; });
  return cands[k].distance;
}

double similarity_threshold(const GrayImage& image, Coord center, int m,
                            const GroupingConfig& config) {
  return similarity_threshold(PatchSearcher(image, config.patch_side), center, m, config);
}

std::size_t count_similar(const PatchSearcher& searcher, Coord center, double theta,
                          const GroupingConfig& config) {
  require(theta >= 0.0, "count_similar: theta must be >= 0");
  const auto cands = searcher.candidates(center, config.search_radius, config.normalize_distance);
  return static_cast<std::size_t>(std::count_if(cands.begin(), cands.end(), [&](const Neighbor& n) {
    return !(n.center == center) && n.distance <= theta;
  }));
}

std::size_t count_similar(const GrayImage& image, Coord center, double theta,
                          const GroupingConfig& config) {
  return count_similar(PatchSearcher(image, config.patch_side), center, theta, config);
}

double patch_complexity(const Patch& patch) {
  const std::size_t n = patch.values.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(patch.values.begin(), patch.values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : patch.values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace patchlab
