#include "patchlab/transforms.hpp"

#include <cmath>
#include <numbers>

namespace patchlab {

namespace {
constexpr double kInvSqrt2 = 0.5 * std::numbers::sqrt2;
}

Eigen::MatrixXd dct_matrix(int side) {
  require(side >= 1, "dct_matrix: side must be >= 1");
  Eigen::MatrixXd c(side, side);
  for (int u = 0; u < side; ++u) {
    const double scale = std::sqrt((u == 0 ? 1.0 : 2.0) / side);
    for (int x = 0; x < side; ++x)
      c(u, x) = scale * std::cos(std::numbers::pi * (2 * x + 1) * u / (2.0 * side));
  }
  return c;
}

Eigen::MatrixXd dct2_operator(int side) {
  const Eigen::MatrixXd c = dct_matrix(side);
  const int n = side * side;
  Eigen::MatrixXd k(n, n);
  for (int u = 0; u < side; ++u)
    for (int v = 0; v < side; ++v)
      for (int r = 0; r < side; ++r)
        for (int s = 0; s < side; ++s) k(u * side + v, r * side + s) = c(u, r) * c(v, s);
  return k;
}

Eigen::MatrixXd dct2_forward(const Patch& patch) {
  require(patch.side >= 1 && static_cast<std::size_t>(patch.side) * patch.side == patch.values.size(),
          "dct2_forward: patch must be square");
  const int s = patch.side;
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      x(patch.values.data(), s, s);
  const Eigen::MatrixXd c = dct_matrix(s);
  return c * x * c.transpose();
}

Patch dct2_inverse(const Eigen::MatrixXd& coeffs) {
  require(coeffs.rows() == coeffs.cols() && coeffs.rows() >= 1, "dct2_inverse: block must be square");
  const int s = static_cast<int>(coeffs.rows());
  const Eigen::MatrixXd c = dct_matrix(s);
  const Eigen::MatrixXd x = c.transpose() * coeffs * c;
  Patch out;
  out.side = s;
  out.values.resize(static_cast<std::size_t>(s) * s);
  for (int r = 0; r < s; ++r)
    for (int q = 0; q < s; ++q) out.values[static_cast<std::size_t>(r) * s + q] = x(r, q);
  return out;
}

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

std::vector<double> haar1d_forward(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  require(is_power_of_two(n), "haar1d_forward: length must be a power of two");
  std::vector<double> tmp(values.size());
  for (int len = n; len > 1; len /= 2) {
    const int half = len / 2;
    for (int i = 0; i < half; ++i) {
      tmp[i] = (values[2 * i] + values[2 * i + 1]) * kInvSqrt2;
      tmp[half + i] = (values[2 * i] - values[2 * i + 1]) * kInvSqrt2;
    }
    std::copy(tmp.begin(), tmp.begin() + len, values.begin());
  }
  return values;
}

std::vector<double> haar1d_inverse(std::vector<double> coeffs) {
  const int n = static_cast<int>(coeffs.size());
  require(is_power_of_two(n), "haar1d_inverse: length must be a power of two");
  std::vector<double> tmp(coeffs.size());
  for (int len = 2; len <= n; len *= 2) {
    const int half = len / 2;
    for (int i = 0; i < half; ++i) {
      tmp[2 * i] = (coeffs[i] + coeffs[half + i]) * kInvSqrt2;
      tmp[2 * i + 1] = (coeffs[i] - coeffs[half + i]) * kInvSqrt2;
    }
    std::copy(tmp.begin(), tmp.begin() + len, coeffs.begin());
  }
  return coeffs;
}

Eigen::MatrixXd haar_matrix(int length) {
  require(is_power_of_two(length), "haar_matrix: length must be a power of two");
  Eigen::MatrixXd h(length, length);
  for (int j = 0; j < length; ++j) {
    std::vector<double> e(static_cast<std::size_t>(length), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    const auto col = haar1d_forward(std::move(e));
    for (int i = 0; i < length; ++i) h(i, j) = col[static_cast<std::size_t>(i)];
  }
  return h;
}

std::vector<int> haar_padding(int m) {
  require(m >= 1, "haar_padding: group must be nonempty");
  int padded = 1;
  while (padded < m) padded *= 2;
  std::vector<int> map(static_cast<std::size_t>(padded));
  for (int i = 0; i < padded; ++i) map[static_cast<std::size_t>(i)] = i < m ? i : 2 * (m - 1) - i;
  return map;
}

void canonicalize_signs(Eigen::MatrixXd& u, Eigen::MatrixXd* v) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index arg = 0;
    u.col(j).cwiseAbs().maxCoeff(&arg);
    if (u(arg, j) < 0.0) {
      u.col(j) *= -1.0;
      if (v != nullptr) v->col(j) *= -1.0;
    }
  }
}

PcaModel pca_fit(const Eigen::MatrixXd& group) {
  require(group.cols() >= 2, "pca_fit: need at least two patches");
  const double m = static_cast<double>(group.cols());
  PcaModel model;
  model.mean = group.rowwise().mean();
  const Eigen::MatrixXd centred = group.colwise() - model.mean;
  Eigen::MatrixXd omega = centred * centred.transpose() / m;
  omega = 0.5 * (omega + omega.transpose()).eval();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(omega);
  const Eigen::Index n = omega.rows();
  model.basis = eig.eigenvectors().rowwise().reverse();
  model.eigenvalues = eig.eigenvalues().reverse();
  for (Eigen::Index i = 0; i < n; ++i)
    if (model.eigenvalues(i) < 0.0) model.eigenvalues(i) = 0.0;
  canonicalize_signs(model.basis);
  return model;
}

PcaModel pca_fit(const PatchGroup& group) { return pca_fit(group.columns); }

SvdFactors svd_decompose(const Eigen::MatrixXd& matrix) {
  require(matrix.rows() >= 1 && matrix.cols() >= 1, "svd_decompose: empty matrix");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors f{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  canonicalize_signs(f.u, &f.v);
  return f;
}

Eigen::MatrixXd low_rank_approx(const SvdFactors& factors, int r) {
  const auto k = factors.sigma.size();
  require(r >= 0 && r <= k, "low_rank_approx: rank out of range");
  if (r == 0) return Eigen::MatrixXd::Zero(factors.u.rows(), factors.v.rows());
  return factors.u.leftCols(r) * factors.sigma.head(r).asDiagonal() *
         factors.v.leftCols(r).transpose();
}

LeftSpectrum left_spectrum(const Eigen::MatrixXd& matrix) {
  Eigen::MatrixXd gram = matrix * matrix.transpose();
  gram = 0.5 * (gram + gram.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  LeftSpectrum out{eig.eigenvectors().rowwise().reverse(), eig.eigenvalues().reverse()};
  out.energies = out.energies.cwiseMax(0.0);
  canonicalize_signs(out.u);
  return out;
}

}  // namespace patchlab
