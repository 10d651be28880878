#pragma once

#include <Eigen/Dense>
#include <vector>

#include "patchlab/grouping.hpp"

namespace patchlab {

// ---- Fixed bases ---------------------------------------------------------

/// Orthonormal DCT-II matrix; row u is the u-th basis vector.
Eigen::MatrixXd dct_matrix(int side);

/// Orthonormal 2D DCT acting on row-major flattened side x side patches:
/// kron(C, C). Multiplying a group's columns by it transforms every patch.
Eigen::MatrixXd dct2_operator(int side);

/// 2D DCT-II coefficients of a square patch (side x side block).
Eigen::MatrixXd dct2_forward(const Patch& patch);
/// Inverse of dct2_forward; the returned patch is centred at (0,0).
Patch dct2_inverse(const Eigen::MatrixXd& coeffs);

/// Full orthonormal Haar decomposition. Output layout:
/// [approximation, coarsest detail, ..., finest details].
std::vector<double> haar1d_forward(std::vector<double> values);
std::vector<double> haar1d_inverse(std::vector<double> coeffs);

/// Orthonormal Haar analysis matrix for power-of-two length.
Eigen::MatrixXd haar_matrix(int length);

/// Column index map that pads a group of m columns to the next power of two by
/// whole-sample reflection: m=5 -> {0,1,2,3,4,3,2,1}. The first m entries are
/// the identity, so stripping the padding is truncation.
std::vector<int> haar_padding(int m);

bool is_power_of_two(int n);

// ---- Adaptive bases ------------------------------------------------------

struct PcaModel {
  Eigen::VectorXd mean;         // per-row means of the group
  Eigen::MatrixXd basis;        // n x n, orthonormal columns
  Eigen::VectorXd eigenvalues;  // nonincreasing, >= 0
};

/// Eigendecomposition of (1/m) Xc Xc^T for the row-centred group matrix.
PcaModel pca_fit(const Eigen::MatrixXd& group);
PcaModel pca_fit(const PatchGroup& group);

struct SvdFactors {
  Eigen::MatrixXd u;      // n x k
  Eigen::VectorXd sigma;  // k, nonincreasing
  Eigen::MatrixXd v;      // m x k
};

/// Thin SVD, k = min(n, m). Singular values sorted nonincreasing; each left
/// vector's largest-magnitude entry is nonnegative.
SvdFactors svd_decompose(const Eigen::MatrixXd& matrix);

/// Sum of the r leading rank-one terms, 0 <= r <= k.
Eigen::MatrixXd low_rank_approx(const SvdFactors& factors, int r);

/// Left singular structure through the n x n Gram matrix: energies are the
/// squared singular values (nonincreasing, padded with zeros when m < n) and
/// vectors the matching left singular vectors. Cheaper than svd_decompose
/// when n << m; projecting onto the leading r vectors gives the same rank-r
/// approximation.
struct LeftSpectrum {
  Eigen::MatrixXd u;         // n x n
  Eigen::VectorXd energies;  // n
};
LeftSpectrum left_spectrum(const Eigen::MatrixXd& matrix);

/// Fix the sign ambiguity of the columns of `u` (and matching columns of `v`
/// when provided).
void canonicalize_signs(Eigen::MatrixXd& u, Eigen::MatrixXd* v = nullptr);

}  // namespace patchlab
