#include "patchlab/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "patchlab/noise.hpp"
#include "patchlab/parallel.hpp"
#include "patchlab/transforms.hpp"

namespace patchlab {

// ---- names ---------------------------------------------------------------

std::string to_string(Method method) {
  switch (method) {
    case Method::identity: return "identity";
    case Method::nlm: return "nlm";
    case Method::lra_svd: return "lra_svd";
    case Method::lpg_pca: return "lpg_pca";
    case Method::bm3d_lite: return "bm3d_lite";
  }
  return "?";
}

std::vector<std::string> method_names() {
  return {"identity", "nlm", "lra_svd", "lpg_pca", "bm3d_lite"};
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : {Method::identity, Method::nlm, Method::lra_svd, Method::lpg_pca,
                   Method::bm3d_lite})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

std::string to_string(Boost::Kind kind) {
  switch (kind) {
    case Boost::Kind::none: return "none";
    case Boost::Kind::twicing: return "twicing";
    case Boost::Kind::back_projection: return "back_projection";
    case Boost::Kind::sos: return "sos";
  }
  return "?";
}

std::optional<Boost::Kind> parse_boost(const std::string& name) {
  for (Boost::Kind k : {Boost::Kind::none, Boost::Kind::twicing, Boost::Kind::back_projection,
                        Boost::Kind::sos})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

DenoiseConfig default_config(Method method, double sigma) {
  DenoiseConfig cfg;
  cfg.method = method;
  cfg.noise_sigma = sigma;
  cfg.shrink.noise_sigma = sigma;
  switch (method) {
    case Method::identity:
      break;
    case Method::nlm:
      cfg.grouping.patch_side = 5;
      cfg.grouping.search_radius = 10;
      break;
    case Method::lra_svd:
      cfg.grouping.patch_side = 5;
      cfg.grouping.search_radius = 10;
      cfg.grouping.selection = Selection::nearest(85);
      cfg.shrink.kind = ShrinkSpec::Kind::rank_select;
      cfg.boost.kind = Boost::Kind::twicing;
      break;
    case Method::lpg_pca:
      cfg.grouping.patch_side = 5;
      cfg.grouping.search_radius = 8;
      cfg.grouping.selection = Selection::threshold(0.0);  // derived from sigma per stage
      cfg.shrink.kind = ShrinkSpec::Kind::wiener;
      break;
    case Method::bm3d_lite:
      cfg.grouping.patch_side = 7;
      cfg.grouping.search_radius = 10;
      cfg.grouping.selection = Selection::nearest(16);
      cfg.shrink.kind = ShrinkSpec::Kind::hard;
      cfg.shrink.lambda = 2.7;
      break;
  }
  return cfg;
}

// ---- aggregation ---------------------------------------------------------

Accumulator::Accumulator(int width, int height) : Accumulator(width, height, 0, height) {}

Accumulator::Accumulator(int width, int height, int row_offset, int rows)
    : width_(width), height_(height), row_offset_(row_offset), rows_(rows) {
  require(width >= 1 && height >= 1 && row_offset >= 0 && rows >= 0 &&
              row_offset + rows <= height,
          "Accumulator: invalid band");
  num_.assign(static_cast<std::size_t>(rows) * width, 0.0);
  den_.assign(num_.size(), 0.0);
}

void Accumulator::deposit(int row, int col, double value, double weight) {
  require(row >= row_offset_ && row < row_offset_ + rows_ && col >= 0 && col < width_,
          "Accumulator: deposit outside band");
  num_[index(row, col)] += weight * value;
  den_[index(row, col)] += weight;
}

void Accumulator::deposit_patch(Coord center, int side, const double* values, double weight) {
  const int half = side / 2;
  for (int k = 0; k < side; ++k) {
    const int r = center.row - half + k;
    if (r < 0 || r >= height_) continue;
    require(r >= row_offset_ && r < row_offset_ + rows_, "Accumulator: patch outside band");
    double* num = &num_[index(r, 0)];
    double* den = &den_[index(r, 0)];
    const double* v = values + static_cast<std::ptrdiff_t>(k) * side;
    for (int j = 0; j < side; ++j) {
      const int c = center.col - half + j;
      if (c < 0 || c >= width_) continue;
      num[c] += weight * v[j];
      den[c] += weight;
    }
  }
}

void Accumulator::merge(const Accumulator& tile) {
  require(tile.width_ == width_ && tile.height_ == height_ && tile.row_offset_ >= row_offset_ &&
              tile.row_offset_ + tile.rows_ <= row_offset_ + rows_,
          "Accumulator::merge: tile does not fit");
  for (int r = tile.row_offset_; r < tile.row_offset_ + tile.rows_; ++r)
    for (int c = 0; c < width_; ++c) {
      num_[index(r, c)] += tile.num_[tile.index(r, c)];
      den_[index(r, c)] += tile.den_[tile.index(r, c)];
    }
}

double Accumulator::numerator(int row, int col) const { return num_[index(row, col)]; }
double Accumulator::denominator(int row, int col) const { return den_[index(row, col)]; }

GrayImage aggregate_finalize(const Accumulator& acc) {
  require(acc.row_offset() == 0 && acc.rows() == acc.height(),
          "aggregate_finalize: accumulator does not span the image");
  GrayImage out(acc.width(), acc.height());
  for (int r = 0; r < acc.height(); ++r)
    for (int c = 0; c < acc.width(); ++c) {
      const double den = acc.denominator(r, c);
      if (!(den > 0.0))
        throw ContractError("aggregate_finalize: pixel (" + std::to_string(r) + ", " +
                            std::to_string(c) + ") is not covered by any patch");
      out.at(r, c) = acc.numerator(r, c) / den;
    }
  return out;
}

namespace {

std::vector<int> reference_grid(int length, int step) {
  require(step >= 1, "step must be >= 1");
  std::vector<int> grid;
  for (int i = 0; i < length; i += step) grid.push_back(i);
  if (grid.back() != length - 1) grid.push_back(length - 1);
  return grid;
}

// Runs `fn(reference, tile)` for every reference patch on the stride grid.
// One band of rows per grid row; bands are reduced in row order, so the sum
// at each pixel is formed in the same order for any number of workers.
template <typename Fn>
GrayImage aggregate_grid(int width, int height, int step, int reach, Fn fn) {
  const auto rows = reference_grid(height, step);
  const auto cols = reference_grid(width, step);
  auto tiles = parallel_map(rows.size(), [&](std::size_t i) {
    const int r = rows[i];
    const int lo = std::max(0, r - reach);
    const int hi = std::min(height - 1, r + reach);
    std::optional<Accumulator> tile(std::in_place, width, height, lo, hi - lo + 1);
    for (int c : cols) fn(Coord{r, c}, *tile);
    return tile;
  });
  Accumulator full(width, height);
  for (const auto& tile : tiles) full.merge(*tile);
  return aggregate_finalize(full);
}

void deposit_group(Accumulator& acc, const Eigen::MatrixXd& estimate,
                   const std::vector<Coord>& centers, int side, double weight) {
  for (std::size_t j = 0; j < centers.size(); ++j)
    acc.deposit_patch(centers[j], side, estimate.col(static_cast<Eigen::Index>(j)).data(), weight);
}

double nlm_h(const DenoiseConfig& config, double sigma) {
  if (config.nlm_h > 0.0) return config.nlm_h;
  // sigma = 0 degenerates to the identity: only the self-weight survives.
  return std::max(config.nlm_h_coeff * sigma, 1e-6);
}

}  // namespace

double resolve_sigma(const DenoiseConfig& config, const GrayImage& image) {
  if (config.noise_sigma >= 0.0) return config.noise_sigma;
  if (image.width() < 3 || image.height() < 3) return 0.0;
  return estimate_noise_sigma(image);
}

// ---- NLM -----------------------------------------------------------------

std::vector<WeightedNeighbor> nlm_weights(const GrayImage& image, Coord center,
                                          const DenoiseConfig& config) {
  const double sigma = resolve_sigma(config, image);
  const double h = nlm_h(config, sigma);
  const PatchSearcher searcher(image, config.grouping.patch_side);
  const auto kernel = gaussian_patch_kernel(config.grouping.patch_side, config.nlm_kernel_sigma);
  const auto cands = searcher.candidates(center, config.grouping.search_radius);
  std::vector<WeightedNeighbor> out;
  out.reserve(cands.size());
  double z = 0.0;
  for (const auto& n : cands) {
    const double w = std::exp(-searcher.weighted_distance(center, n.center, kernel) / (h * h));
    out.push_back({n.center, w});
    z += w;
  }
  for (auto& n : out) n.weight /= z;
  return out;
}

GrayImage nlm_denoise(const GrayImage& image, const DenoiseConfig& config) {
  const double sigma = resolve_sigma(config, image);
  const double h = nlm_h(config, sigma);
  require(h > 0.0, "nlm: h must be > 0");
  const int side = config.grouping.patch_side;
  const int radius = config.grouping.search_radius;
  const PatchSearcher searcher(image, side);
  const auto kernel = gaussian_patch_kernel(side, config.nlm_kernel_sigma);
  const double inv_h2 = 1.0 / (h * h);
  const int w = image.width();
  const int ht = image.height();

  auto rows = parallel_map(static_cast<std::size_t>(ht), [&](std::size_t ri) {
    const int r = static_cast<int>(ri);
    std::vector<double> out(static_cast<std::size_t>(w));
    const int r0 = std::max(0, r - radius), r1 = std::min(ht - 1, r + radius);
    for (int c = 0; c < w; ++c) {
      const int c0 = std::max(0, c - radius), c1 = std::min(w - 1, c + radius);
      double z = 0.0, acc = 0.0;
      for (int qr = r0; qr <= r1; ++qr)
        for (int qc = c0; qc <= c1; ++qc) {
          const double d = searcher.weighted_distance({r, c}, {qr, qc}, kernel);
          const double wt = std::exp(-d * inv_h2);
          z += wt;
          acc += wt * image.at(qr, qc);
        }
      out[static_cast<std::size_t>(c)] = acc / z;
    }
    return out;
  });
  GrayImage result(w, ht);
  for (int r = 0; r < ht; ++r)
    std::copy(rows[static_cast<std::size_t>(r)].begin(), rows[static_cast<std::size_t>(r)].end(),
              result.samples().begin() + static_cast<std::ptrdiff_t>(r) * w);
  return result;
}

// ---- LRA-SVD ---------------------------------------------------------------

Eigen::MatrixXd lowrank_group_estimate(const Eigen::MatrixXd& group, const ShrinkSpec& shrink,
                                       double sigma) {
  const Eigen::VectorXd mean = group.rowwise().mean();
  const Eigen::MatrixXd centred = group.colwise() - mean;
  const auto n = static_cast<double>(group.rows());
  const auto m = static_cast<double>(group.cols());
  const LeftSpectrum spec = left_spectrum(centred);

  Eigen::MatrixXd estimate;
  if (shrink.kind == ShrinkSpec::Kind::soft_sv) {
    // U diag(s'/s) U^T Xc equals U S' V^T without forming V.
    const double tau = shrink.soft_coeff * sigma * std::sqrt(m);
    Eigen::VectorXd gain(spec.energies.size());
    for (Eigen::Index i = 0; i < gain.size(); ++i) {
      const double s = std::sqrt(spec.energies(i));
      gain(i) = s > 0.0 ? std::max(s - tau, 0.0) / s : 0.0;
    }
    estimate = spec.u * gain.asDiagonal() * (spec.u.transpose() * centred);
  } else {
    const double tau_sq = noise_tau_sq(n, m, sigma, shrink.tau_sq_coeff);
    const int r = select_rank_from_energies(
        std::span<const double>(spec.energies.data(), static_cast<std::size_t>(spec.energies.size())),
        tau_sq);
    if (r == 0) {
      estimate = Eigen::MatrixXd::Zero(group.rows(), group.cols());
    } else {
      const auto ur = spec.u.leftCols(r);
      estimate = ur * (ur.transpose() * centred);
    }
  }
  estimate.colwise() += mean;
  return estimate;
}

GrayImage lra_svd_denoise(const GrayImage& image, const DenoiseConfig& config) {
  const double sigma = resolve_sigma(config, image);
  const GroupingConfig& g = config.grouping;
  const PatchSearcher searcher(image, g.patch_side);
  return aggregate_grid(image.width(), image.height(), config.step,
                        g.patch_side / 2 + g.search_radius, [&](Coord ref, Accumulator& tile) {
                          const PatchGroup group = gather_group(searcher, searcher, ref, g);
                          const Eigen::MatrixXd est =
                              lowrank_group_estimate(group.columns, config.shrink, sigma);
                          deposit_group(tile, est, group.centers, g.patch_side, 1.0);
                        });
}

// ---- LPG-PCA ---------------------------------------------------------------

namespace {

GrayImage lpg_pca_stage(const GrayImage& image, const DenoiseConfig& config, double sigma) {
  GroupingConfig g = config.grouping;
  const double n = static_cast<double>(g.patch_side) * g.patch_side;
  g.selection = Selection::threshold(n * (2.0 * sigma * sigma + config.lpg_offset * config.lpg_offset));
  const double noise_var = sigma * sigma;
  const PatchSearcher searcher(image, g.patch_side);
  return aggregate_grid(
      image.width(), image.height(), config.step, g.patch_side / 2 + g.search_radius,
      [&](Coord ref, Accumulator& tile) {
        const PatchGroup group = gather_group(searcher, searcher, ref, g);
        if (group.size() < 2) {
          // Singleton: the centred data is zero, so the mean is the estimate.
          deposit_group(tile, group.columns, group.centers, g.patch_side, 1.0);
          return;
        }
        const PcaModel pca = pca_fit(group.columns);
        const Eigen::MatrixXd centred = group.columns.colwise() - pca.mean;
        Eigen::MatrixXd coeffs = pca.basis.transpose() * centred;
        std::vector<double> signal(static_cast<std::size_t>(pca.eigenvalues.size()));
        for (std::size_t i = 0; i < signal.size(); ++i)
          signal[i] = std::max(pca.eigenvalues(static_cast<Eigen::Index>(i)) - noise_var, 0.0);
        const auto w = wiener_weights(signal, noise_var);
        for (std::size_t i = 0; i < w.size(); ++i) coeffs.row(static_cast<Eigen::Index>(i)) *= w[i];
        Eigen::MatrixXd est = pca.basis * coeffs;
        est.colwise() += pca.mean;
        deposit_group(tile, est, group.centers, g.patch_side, 1.0);
      });
}

}  // namespace

GrayImage lpg_pca_denoise(const GrayImage& image, const DenoiseConfig& config) {
  const double sigma = resolve_sigma(config, image);
  GrayImage stage1 = lpg_pca_stage(image, config, sigma);
  if (config.stages < 2) return stage1;
  return lpg_pca_stage(stage1, config, std::sqrt(config.stage2_noise_coeff) * sigma);
}

// ---- BM3D-lite -------------------------------------------------------------

namespace {

// Separable 3D transform of a group: 2D DCT of each patch, then Haar along
// the (reflect-padded) group dimension.
struct GroupTransform {
  Eigen::MatrixXd c;  // side x side 1D DCT
  int side;

  explicit GroupTransform(int patch_side) : c(dct_matrix(patch_side)), side(patch_side) {}

  void planar(const Eigen::MatrixXd& in, Eigen::MatrixXd& out, bool inverse) const {
    out.resize(in.rows(), in.cols());
    const int s = side;
    // a(i,k) = C(i,k) forward, C(k,i) inverse
    std::vector<double> a(static_cast<std::size_t>(s) * s), tmp(a.size());
    for (int i = 0; i < s; ++i)
      for (int k = 0; k < s; ++k) a[static_cast<std::size_t>(i) * s + k] = inverse ? c(k, i) : c(i, k);
    for (Eigen::Index j = 0; j < in.cols(); ++j) {
      const double* p = in.col(j).data();
      double* q = out.col(j).data();
      // tmp = A P, then Q = tmp A^T, all row-major.
      for (int i = 0; i < s; ++i)
        for (int col = 0; col < s; ++col) {
          double acc = 0.0;
          for (int k = 0; k < s; ++k) acc += a[static_cast<std::size_t>(i) * s + k] * p[k * s + col];
          tmp[static_cast<std::size_t>(i) * s + col] = acc;
        }
      for (int i = 0; i < s; ++i)
        for (int col = 0; col < s; ++col) {
          double acc = 0.0;
          for (int k = 0; k < s; ++k)
            acc += tmp[static_cast<std::size_t>(i) * s + k] * a[static_cast<std::size_t>(col) * s + k];
          q[i * s + col] = acc;
        }
    }
  }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& group) const {
    Eigen::MatrixXd plane;
    planar(group, plane, false);
    const auto pad = haar_padding(static_cast<int>(group.cols()));
    Eigen::MatrixXd padded(group.rows(), static_cast<Eigen::Index>(pad.size()));
    for (std::size_t j = 0; j < pad.size(); ++j)
      padded.col(static_cast<Eigen::Index>(j)) = plane.col(pad[j]);
    haar_columns(padded, false);
    return padded;
  }

  Eigen::MatrixXd inverse(Eigen::MatrixXd coeffs, Eigen::Index m) const {
    haar_columns(coeffs, true);
    Eigen::MatrixXd out;
    planar(coeffs.leftCols(m), out, true);
    return out;
  }

  // Orthonormal Haar along the group axis, same layout as haar1d_forward.
  static void haar_columns(Eigen::MatrixXd& x, bool inverse) {
    const double k = 0.5 * std::numbers::sqrt2;
    const Eigen::Index n = x.cols();
    Eigen::MatrixXd tmp(x.rows(), n);
    if (!inverse) {
      for (Eigen::Index len = n; len > 1; len /= 2) {
        const Eigen::Index half = len / 2;
        for (Eigen::Index i = 0; i < half; ++i) {
          tmp.col(i) = (x.col(2 * i) + x.col(2 * i + 1)) * k;
          tmp.col(half + i) = (x.col(2 * i) - x.col(2 * i + 1)) * k;
        }
        x.leftCols(len) = tmp.leftCols(len);
      }
    } else {
      for (Eigen::Index len = 2; len <= n; len *= 2) {
        const Eigen::Index half = len / 2;
        for (Eigen::Index i = 0; i < half; ++i) {
          tmp.col(2 * i) = (x.col(i) + x.col(half + i)) * k;
          tmp.col(2 * i + 1) = (x.col(i) - x.col(half + i)) * k;
        }
        x.leftCols(len) = tmp.leftCols(len);
      }
    }
  }
};

GrayImage bm3d_hard_stage(const GrayImage& noisy, const DenoiseConfig& config, double sigma) {
  const GroupingConfig& g = config.grouping;
  const PatchSearcher searcher(noisy, g.patch_side);
  const GroupTransform transform(g.patch_side);
  const double threshold = config.shrink.lambda * sigma;
  return aggregate_grid(
      noisy.width(), noisy.height(), config.step, g.patch_side / 2 + g.search_radius,
      [&](Coord ref, Accumulator& tile) {
        const PatchGroup group = gather_group(searcher, searcher, ref, g);
        Eigen::MatrixXd coeffs = transform.forward(group.columns);
        const auto kept = hard_threshold(
            std::span<const double>(coeffs.data(), static_cast<std::size_t>(coeffs.size())),
            threshold);
        std::size_t n_kept = 0;
        for (std::size_t i = 0; i < kept.size(); ++i) {
          coeffs.data()[i] = kept[i];
          if (kept[i] != 0.0) ++n_kept;
        }
        const Eigen::MatrixXd est = transform.inverse(coeffs, group.columns.cols());
        deposit_group(tile, est, group.centers, g.patch_side,
                      1.0 / (1.0 + static_cast<double>(n_kept)));
      });
}

GrayImage bm3d_wiener_stage(const GrayImage& noisy, const GrayImage& basic,
                            const DenoiseConfig& config, double sigma) {
  GroupingConfig g = config.grouping;
  g.selection = Selection::nearest(config.stage2_top_m);
  const PatchSearcher pilot(basic, g.patch_side);
  const PatchSearcher values(noisy, g.patch_side);
  const GroupTransform transform(g.patch_side);
  const double noise_var = sigma * sigma;
  return aggregate_grid(
      noisy.width(), noisy.height(), config.step, g.patch_side / 2 + g.search_radius,
      [&](Coord ref, Accumulator& tile) {
        const PatchGroup group = gather_group(pilot, values, ref, g);
        const Eigen::MatrixXd pilot_coeffs = transform.forward(pilot.stack(group.centers));
        Eigen::MatrixXd coeffs = transform.forward(group.columns);
        std::vector<double> energy(static_cast<std::size_t>(pilot_coeffs.size()));
        for (std::size_t i = 0; i < energy.size(); ++i)
          energy[i] = pilot_coeffs.data()[i] * pilot_coeffs.data()[i];
        const auto w = wiener_weights(energy, noise_var);
        double w_energy = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
          coeffs.data()[i] *= w[i];
          w_energy += w[i] * w[i];
        }
        const Eigen::MatrixXd est = transform.inverse(coeffs, group.columns.cols());
        deposit_group(tile, est, group.centers, g.patch_side, 1.0 / (1.0 + w_energy));
      });
}

}  // namespace

GrayImage bm3d_lite_denoise(const GrayImage& image, const DenoiseConfig& config) {
  const double sigma = resolve_sigma(config, image);
  GrayImage basic = bm3d_hard_stage(image, config, sigma);
  if (config.stages < 2) return basic;
  return bm3d_wiener_stage(image, basic, config, sigma);
}

// ---- boosting --------------------------------------------------------------

// The boosters are written so that their degenerate cases hold exactly in
// floating point: where the denoiser hands a sample back unchanged the noisy
// sample itself is returned, since z + (y - z) may differ from y by an ulp.
GrayImage boost_twicing(const GrayImage& noisy, const GrayImage& estimate, const DenoiseFn& f) {
  require(noisy.same_shape(estimate), "boost_twicing: dimension mismatch");
  const GrayImage residual = noisy - estimate;
  const GrayImage extracted = f(residual);
  require(extracted.same_shape(noisy), "boost_twicing: denoiser changed the image size");
  GrayImage out(noisy.width(), noisy.height());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = extracted[i] == residual[i] ? noisy[i] : estimate[i] + extracted[i];
  return out;
}

GrayImage boost_back_projection(const GrayImage& noisy, const GrayImage& estimate, double delta) {
  require(noisy.same_shape(estimate), "boost_back_projection: dimension mismatch");
  require(delta >= 0.0 && delta <= 1.0, "boost_back_projection: delta must be in [0,1]");
  GrayImage out(noisy.width(), noisy.height());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (1.0 - delta) * estimate[i] + delta * noisy[i];
  return out;
}

GrayImage boost_sos(const GrayImage& noisy, const GrayImage& estimate, const DenoiseFn& f) {
  require(noisy.same_shape(estimate), "boost_sos: dimension mismatch");
  const GrayImage strengthened = noisy + estimate;
  const GrayImage operated = f(strengthened);
  require(operated.same_shape(noisy), "boost_sos: denoiser changed the image size");
  GrayImage out(noisy.width(), noisy.height());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = operated[i] == strengthened[i] ? noisy[i] : operated[i] - estimate[i];
  return out;
}

GrayImage denoise_once(const GrayImage& image, const DenoiseConfig& config) {
  switch (config.method) {
    case Method::identity: return image;
    case Method::nlm: return nlm_denoise(image, config);
    case Method::lra_svd: return lra_svd_denoise(image, config);
    case Method::lpg_pca: return lpg_pca_denoise(image, config);
    case Method::bm3d_lite: return bm3d_lite_denoise(image, config);
  }
  throw ContractError("denoise: unknown method");
}

GrayImage denoise(const GrayImage& image, const DenoiseConfig& config) {
  require(config.step >= 1, "denoise: step must be >= 1");
  DenoiseConfig fixed = config;
  fixed.noise_sigma = resolve_sigma(config, image);
  fixed.shrink.noise_sigma = fixed.noise_sigma;
  GrayImage estimate = denoise_once(image, fixed);
  const Boost& boost = config.boost;
  if (boost.kind == Boost::Kind::none || config.method == Method::identity) return estimate;
  require(boost.iterations >= 0, "denoise: boost iterations must be >= 0");

  const DenoiseFn f = [&](const GrayImage& x) { return denoise_once(x, fixed); };
  for (int k = 0; k < boost.iterations; ++k) {
    switch (boost.kind) {
      case Boost::Kind::twicing:
        estimate = boost_twicing(image, estimate, f);
        break;
      case Boost::Kind::back_projection: {
        require(boost.delta > 0.0 && boost.delta < 1.0, "back projection: delta must be in (0,1)");
        // The blended input carries roughly delta times the original noise.
        DenoiseConfig next = fixed;
        next.noise_sigma = boost.delta * fixed.noise_sigma;
        next.shrink.noise_sigma = next.noise_sigma;
        estimate = denoise_once(boost_back_projection(image, estimate, boost.delta), next);
        break;
      }
      case Boost::Kind::sos:
        estimate = boost_sos(image, estimate, f);
        break;
      case Boost::Kind::none:
        break;
    }
  }
  return estimate;
}

}  // namespace patchlab
