#include "patchlab/labstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>

#include "patchlab/noise.hpp"
#include "patchlab/parallel.hpp"
#include "patchlab/quality.hpp"
#include "patchlab/random.hpp"
#include "patchlab/shrinkage.hpp"
#include "patchlab/transforms.hpp"

namespace patchlab {

std::size_t ExperimentTable::field(const std::string& name) const {
  const auto it = std::find(fields.begin(), fields.end(), name);
  require(it != fields.end(), "experiment table " + id + " has no field " + name);
  return static_cast<std::size_t>(it - fields.begin());
}

std::vector<double> ExperimentTable::column(const std::string& name) const {
  const std::size_t f = field(name);
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.values[f]);
  return out;
}

std::vector<double> ExperimentTable::column(const std::string& name, double sigma) const {
  const std::size_t f = field(name);
  std::vector<double> out;
  for (const auto& r : records)
    if (r.sigma == sigma) out.push_back(r.values[f]);
  return out;
}

std::string format_number(double value) {
  if (value == kPsnrInfinity || value == std::numeric_limits<double>::infinity()) return "inf";
  if (value == -std::numeric_limits<double>::infinity()) return "-inf";
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value == 0.0 ? 0.0 : value);
  return buf;
}

void write_csv(std::ostream& out, const ExperimentTable& table) {
  std::string header = "experiment_id,image_id,sigma," + table.index_name + ",seed";
  for (const auto& f : table.fields) header += "," + f;
  out << "# " << table.id << " schema: " << header << '\n' << header << '\n';
  for (const auto& r : table.records) {
    out << table.id << ',' << table.images.at(r.image) << ',' << format_number(r.sigma) << ','
        << r.index << ',' << r.seed;
    for (std::size_t f = 0; f < table.fields.size(); ++f) out << ',' << format_number(r.values[f]);
    out << '\n';
  }
}

GrayImage corrupt_for_experiment(const GrayImage& image, std::size_t image_index, double sigma,
                                 std::uint64_t seed) {
  if (sigma == 0.0) return image;
  return add_awgn(image, {sigma, noise_seed(seed, image_index, sigma)});
}

RankCurve group_rank_curve(const Eigen::MatrixXd& noisy_group, std::size_t reference,
                           std::span<const double> clean_reference) {
  const auto n = noisy_group.rows();
  require(static_cast<Eigen::Index>(clean_reference.size()) == n,
          "group_rank_curve: clean patch size mismatch");
  require(reference < static_cast<std::size_t>(noisy_group.cols()),
          "group_rank_curve: reference column out of range");
  const auto ref = static_cast<Eigen::Index>(reference);
  const Eigen::VectorXd mean = noisy_group.rowwise().mean();
  const SvdFactors f = svd_decompose(noisy_group.colwise() - mean);
  const auto k = f.sigma.size();

  // est_r - clean = e - sum_{i>r} c_i u_i with e the noise on the reference
  // and c_i its coordinates; expand e in the same basis.
  const Eigen::VectorXd e =
      noisy_group.col(ref) - Eigen::Map<const Eigen::VectorXd>(clean_reference.data(), n);
  const Eigen::VectorXd a = f.u.transpose() * e;
  const Eigen::VectorXd c = f.sigma.cwiseProduct(f.v.row(ref).transpose());
  const double e_perp = std::max(e.squaredNorm() - a.squaredNorm(), 0.0);

  RankCurve curve;
  curve.atom_energy.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i)
    curve.atom_energy[static_cast<std::size_t>(i)] = f.sigma(i) * f.sigma(i);

  // kept[r] = sum_{i<=r} a_i^2, dropped[r] = sum_{i>r} (a_i - c_i)^2.
  std::vector<double> dropped(static_cast<std::size_t>(k) + 1, 0.0);
  for (Eigen::Index i = k; i >= 1; --i) {
    const double d = a(i - 1) - c(i - 1);
    dropped[static_cast<std::size_t>(i - 1)] = dropped[static_cast<std::size_t>(i)] + d * d;
  }
  curve.psnr_db.resize(static_cast<std::size_t>(k) + 1);
  double kept = 0.0;
  for (Eigen::Index r = 0; r <= k; ++r) {
    if (r > 0) kept += a(r - 1) * a(r - 1);
    const double mse = (e_perp + kept + dropped[static_cast<std::size_t>(r)]) / static_cast<double>(n);
    curve.psnr_db[static_cast<std::size_t>(r)] =
        mse > 0.0 ? 10.0 * std::log10(255.0 * 255.0 / mse) : kPsnrInfinity;
  }
  return curve;
}

int best_rank(const RankCurve& curve) {
  require(!curve.psnr_db.empty(), "best_rank: empty curve");
  const auto it = std::max_element(curve.psnr_db.begin(), curve.psnr_db.end());
  return static_cast<int>(it - curve.psnr_db.begin());
}

namespace {

struct Site {
  std::uint32_t image = 0;
  Coord center;
};

// Uniform sites at least `margin` pixels from every border.
// A nonnegative `only` pins every site to that image.
std::vector<Site> sample_sites(const std::vector<LabeledImage>& images, int count, int margin,
                               std::uint64_t seed, std::uint64_t stream, int only = -1) {
  require(!images.empty(), "experiment needs at least one image");
  require(count >= 1, "experiment needs n_patches >= 1");
  for (const auto& im : images)
    require(im.image.width() > 2 * margin && im.image.height() > 2 * margin,
            "image " + im.label + " is too small for the sampling margin");
  Rng rng(mix_seed(seed, stream));
  std::vector<Site> sites(static_cast<std::size_t>(count));
  for (auto& s : sites) {
    s.image = only >= 0 ? static_cast<std::uint32_t>(only)
                        : static_cast<std::uint32_t>(rng.below(images.size()));
    const GrayImage& im = images[s.image].image;
    s.center.row = margin + static_cast<int>(rng.below(static_cast<std::uint64_t>(im.height() - 2 * margin)));
    s.center.col = margin + static_cast<int>(rng.below(static_cast<std::uint64_t>(im.width() - 2 * margin)));
  }
  return sites;
}

std::vector<std::string> labels_of(const std::vector<LabeledImage>& images) {
  std::vector<std::string> out;
  for (const auto& im : images) out.push_back(im.label);
  return out;
}

GroupingConfig nearest_config(int side, int radius, int m, bool normalize) {
  GroupingConfig g;
  g.patch_side = side;
  g.search_radius = radius;
  g.selection = Selection::nearest(m);
  g.normalize_distance = normalize;
  return g;
}

// Noisy images and their searchers for every (image, sigma).
struct NoisyBank {
  std::vector<std::vector<GrayImage>> noisy;
  std::vector<std::vector<PatchSearcher>> searchers;

  NoisyBank(const std::vector<LabeledImage>& images, const std::vector<double>& sigmas, int side,
            std::uint64_t seed) {
    for (std::size_t i = 0; i < images.size(); ++i) {
      noisy.emplace_back();
      searchers.emplace_back();
      for (double s : sigmas) {
        require(s >= 0.0, "experiment sigma must be >= 0");
        noisy.back().push_back(corrupt_for_experiment(images[i].image, i, s, seed));
        searchers.back().emplace_back(noisy.back().back(), side);
      }
    }
  }
};

template <typename Fn>
void collect(ExperimentTable& table, std::size_t count, Fn&& fn) {
  auto parts = parallel_map(count, std::forward<Fn>(fn));
  for (auto& p : parts) table.records.insert(table.records.end(), p.begin(), p.end());
}

double group_psnr(const PatchGroup& group, std::span<const double> clean_ref, double sigma,
                  double tau_sq_coeff, int* rank_out = nullptr) {
  const RankCurve curve = group_rank_curve(group.columns, group.reference_index, clean_ref);
  std::vector<double> sv(curve.atom_energy.size());
  for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = std::sqrt(curve.atom_energy[i]);
  const double tau_sq = noise_tau_sq(static_cast<double>(group.columns.rows()),
                                     static_cast<double>(group.columns.cols()), sigma, tau_sq_coeff);
  const int r = select_rank(sv, tau_sq);
  if (rank_out) *rank_out = r;
  return curve.psnr_db[static_cast<std::size_t>(r)];
}

std::vector<double> clean_patch(const GrayImage& image, Coord c, int side) {
  return extract_patch(image, c, side).values;
}

}  // namespace

ExperimentTable exp_similar_patch_histogram(const std::vector<LabeledImage>& images,
                                            const std::vector<double>& thetas,
                                            const StatsConfig& config) {
  require(!images.empty(), "fig2: no images");
  require(!thetas.empty(), "fig2: no thresholds");
  ExperimentTable table{"fig2", "bin", labels_of(images), {"threshold", "count", "frequency"}, {}};
  const int r = config.search_radius;
  const int max_count = (2 * r + 1) * (2 * r + 1) - 1;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const GrayImage& im = images[i].image;
    require(im.width() > 2 * r && im.height() > 2 * r, "fig2: image smaller than search window");
    const PatchSearcher searcher(im, config.patch_side);
    const int rows = im.height() - 2 * r;
    // counts[row][theta][k]
    auto per_row = parallel_map(static_cast<std::size_t>(rows), [&](std::size_t y) {
      std::vector<std::uint64_t> hist(thetas.size() * (max_count + 1), 0);
      const int row = r + static_cast<int>(y);
      for (int col = r; col < im.width() - r; ++col) {
        const Coord c{row, col};
        const auto cands = searcher.candidates(c, r, config.normalize_distance);
        for (std::size_t t = 0; t < thetas.size(); ++t) {
          int count = 0;
          for (const auto& n : cands)
            if (!(n.center == c) && n.distance <= thetas[t]) ++count;
          ++hist[t * (max_count + 1) + static_cast<std::size_t>(count)];
        }
      }
      return hist;
    });
    for (std::size_t t = 0; t < thetas.size(); ++t)
      for (int k = 0; k <= max_count; ++k) {
        std::uint64_t total = 0;
        for (const auto& h : per_row) total += h[t * (max_count + 1) + static_cast<std::size_t>(k)];
        table.records.push_back({static_cast<std::uint32_t>(i), 0.0, static_cast<std::uint64_t>(k),
                                 config.seed,
                                 {thetas[t], static_cast<double>(k), static_cast<double>(total)}});
      }
  }
  return table;
}

ExperimentTable exp_similarity_threshold_distribution(const std::vector<LabeledImage>& images,
                                                      const std::vector<double>& sigmas,
                                                      const StatsConfig& config) {
  require(!images.empty(), "fig3: no images");
  ExperimentTable table{"fig3", "pixel", labels_of(images), {"threshold"}, {}};
  const GroupingConfig g = nearest_config(config.patch_side, config.search_radius,
                                          config.group_size, config.normalize_distance);
  for (std::size_t i = 0; i < images.size(); ++i)
    for (double s : sigmas) {
      require(s >= 0.0, "fig3: sigma must be >= 0");
      const GrayImage noisy = corrupt_for_experiment(images[i].image, i, s, config.seed);
      const PatchSearcher searcher(noisy, config.patch_side);
      const int w = noisy.width();
      collect(table, static_cast<std::size_t>(noisy.height()), [&](std::size_t y) {
        std::vector<ExperimentRecord> row(static_cast<std::size_t>(w));
        for (int x = 0; x < w; ++x) {
          const Coord c{static_cast<int>(y), x};
          row[static_cast<std::size_t>(x)] = {
              static_cast<std::uint32_t>(i), s, static_cast<std::uint64_t>(y) * w + x, config.seed,
              {similarity_threshold(searcher, c, config.group_size, g), 0.0, 0.0}};
        }
        return row;
      });
    }
  return table;
}

ExperimentTable exp_complexity_vs_threshold(const std::vector<LabeledImage>& images,
                                            int n_patches, const std::vector<double>& sigmas,
                                            const StatsConfig& config) {
  ExperimentTable table{"fig4", "sample", labels_of(images), {"complexity", "threshold"}, {}};
  const auto sites = sample_sites(images, n_patches, config.patch_side, config.seed, 4);
  const NoisyBank bank(images, sigmas, config.patch_side, config.seed);
  const GroupingConfig g = nearest_config(config.patch_side, config.search_radius,
                                          config.group_size, config.normalize_distance);
  collect(table, sites.size(), [&](std::size_t k) {
    const Site& s = sites[k];
    const double complexity =
        patch_complexity(extract_patch(images[s.image].image, s.center, config.patch_side));
    std::vector<ExperimentRecord> out;
    for (std::size_t j = 0; j < sigmas.size(); ++j)
      out.push_back({s.image, sigmas[j], k, config.seed,
                     {complexity,
                      similarity_threshold(bank.searchers[s.image][j], s.center, config.group_size, g),
                      0.0}});
    return out;
  });
  return table;
}

ExperimentTable exp_psnr_vs_threshold(const std::vector<LabeledImage>& images, int n_patches,
                                      double sigma, const StatsConfig& config) {
  ExperimentTable table{"fig5", "sample", labels_of(images), {"threshold", "psnr_db", "rank"}, {}};
  const NoisyBank bank(images, {sigma}, config.patch_side, config.seed);
  const GroupingConfig g = nearest_config(config.patch_side, config.search_radius,
                                          config.group_size, config.normalize_distance);
  // n_patches from every image, in image order.
  std::vector<Site> sites;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto part = sample_sites(images, n_patches, config.patch_side, config.seed, 5 + (i << 8),
                                   static_cast<int>(i));
    sites.insert(sites.end(), part.begin(), part.end());
  }
  collect(table, sites.size(), [&](std::size_t k) {
    const Site& s = sites[k];
    const PatchSearcher& searcher = bank.searchers[s.image][0];
    const PatchGroup group = gather_group(searcher, searcher, s.center, g);
    int rank = 0;
    const double p = group_psnr(group, clean_patch(images[s.image].image, s.center, config.patch_side),
                                sigma, config.tau_sq_coeff, &rank);
    return std::vector<ExperimentRecord>{
        {s.image, sigma, k, config.seed, {group.distances.back(), p, static_cast<double>(rank)}}};
  });
  return table;
}

ExperimentTable exp_jitter_retention(const std::vector<LabeledImage>& images, int n_patches,
                                     const std::vector<double>& sigmas,
                                     const StatsConfig& config) {
  ExperimentTable table{"fig6", "sample", labels_of(images), {"retention_pct"}, {}};
  const auto sites = sample_sites(images, n_patches, config.patch_side, config.seed, 6);
  const NoisyBank bank(images, sigmas, config.patch_side, config.seed);
  std::vector<PatchSearcher> clean;
  for (const auto& im : images) clean.emplace_back(im.image, config.patch_side);
  const GroupingConfig g = nearest_config(config.patch_side, config.search_radius,
                                          config.group_size, config.normalize_distance);
  collect(table, sites.size(), [&](std::size_t k) {
    const Site& s = sites[k];
    const PatchGroup oracle = gather_group(clean[s.image], clean[s.image], s.center, g);
    const std::set<Coord> ids(oracle.centers.begin(), oracle.centers.end());
    std::vector<ExperimentRecord> out;
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
      const PatchSearcher& ns = bank.searchers[s.image][j];
      const PatchGroup group = gather_group(ns, ns, s.center, g);
      const auto kept = std::count_if(group.centers.begin(), group.centers.end(),
                                      [&](const Coord& c) { return ids.count(c) > 0; });
      out.push_back({s.image, sigmas[j], k, config.seed,
                     {100.0 * static_cast<double>(kept) / static_cast<double>(ids.size()), 0.0, 0.0}});
    }
    return out;
  });
  return table;
}

ExperimentTable exp_jitter_psnr_drop(const std::vector<LabeledImage>& images, int n_patches,
                                     const std::vector<double>& sigmas,
                                     const StatsConfig& config) {
  ExperimentTable table{"fig7", "sample", labels_of(images), {"psnr_drop", "psnr_db", "oracle_psnr_db"}, {}};
  const auto sites = sample_sites(images, n_patches, config.patch_side, config.seed, 7);
  const NoisyBank bank(images, sigmas, config.patch_side, config.seed);
  std::vector<PatchSearcher> clean;
  for (const auto& im : images) clean.emplace_back(im.image, config.patch_side);
  const GroupingConfig g = nearest_config(config.patch_side, config.search_radius,
                                          config.group_size, config.normalize_distance);
  collect(table, sites.size(), [&](std::size_t k) {
    const Site& s = sites[k];
    const auto ref = clean_patch(images[s.image].image, s.center, config.patch_side);
    std::vector<ExperimentRecord> out;
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
      const PatchSearcher& ns = bank.searchers[s.image][j];
      const PatchGroup selected = gather_group(ns, ns, s.center, g);
      const PatchGroup oracle = gather_group(clean[s.image], ns, s.center, g);
      const double p = group_psnr(selected, ref, sigmas[j], config.tau_sq_coeff);
      const double q = group_psnr(oracle, ref, sigmas[j], config.tau_sq_coeff);
      const double drop = (p == q) ? 0.0 : p - q;
      out.push_back({s.image, sigmas[j], k, config.seed, {drop, p, q}});
    }
    return out;
  });
  return table;
}

ExperimentTable exp_sparsity_rank_curves(const std::vector<LabeledImage>& images, int n_patches,
                                         double sigma, const StatsConfig& config) {
  ExperimentTable table{"fig8", "sample", labels_of(images), {"rank", "psnr_db", "atom_energy"}, {}};
  const int side = config.sparsity_patch_side;
  const auto sites = sample_sites(images, n_patches, side, config.seed, 8);
  const NoisyBank bank(images, {sigma}, side, config.seed);
  const GroupingConfig g = nearest_config(side, config.sparsity_search_radius, config.group_size,
                                          config.normalize_distance);
  collect(table, sites.size(), [&](std::size_t k) {
    const Site& s = sites[k];
    const PatchSearcher& ns = bank.searchers[s.image][0];
    const PatchGroup group = gather_group(ns, ns, s.center, g);
    const RankCurve curve = group_rank_curve(group.columns, group.reference_index,
                                             clean_patch(images[s.image].image, s.center, side));
    std::vector<ExperimentRecord> out;
    for (std::size_t r = 1; r < curve.psnr_db.size(); ++r)
      out.push_back({s.image, sigma, k, config.seed,
                     {static_cast<double>(r), curve.psnr_db[r], curve.atom_energy[r - 1]}});
    return out;
  });
  return table;
}

ExperimentTable exp_sparsity_vs_threshold(const std::vector<LabeledImage>& images,
                                          int n_patches, const std::vector<double>& sigmas,
                                          const StatsConfig& config) {
  ExperimentTable table{"fig9", "sample", labels_of(images), {"threshold", "rank"}, {}};
  const int side = config.sparsity_patch_side;
  const auto sites = sample_sites(images, n_patches, side, config.seed, 9);
  const NoisyBank bank(images, sigmas, side, config.seed);
  const GroupingConfig g = nearest_config(side, config.sparsity_search_radius, config.group_size,
                                          config.normalize_distance);
  collect(table, sites.size(), [&](std::size_t k) {
    const Site& s = sites[k];
    const auto ref = clean_patch(images[s.image].image, s.center, side);
    std::vector<ExperimentRecord> out;
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
      const PatchSearcher& ns = bank.searchers[s.image][j];
      const PatchGroup group = gather_group(ns, ns, s.center, g);
      const RankCurve curve = group_rank_curve(group.columns, group.reference_index, ref);
      out.push_back({s.image, sigmas[j], k, config.seed,
                     {group.distances.back(), static_cast<double>(best_rank(curve)), 0.0}});
    }
    return out;
  });
  return table;
}

}  // namespace patchlab
