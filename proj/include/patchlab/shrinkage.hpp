#pragma once

#include <span>
#include <vector>

namespace patchlab {

/// Coefficient regularisation choices and their parameters.
struct ShrinkSpec {
  enum class Kind { hard, soft_sv, wiener, tikhonov, rank_select };
  Kind kind = Kind::rank_select;
  double lambda = 2.7;        // hard threshold in units of noise sigma
  double mu = 0.0;            // ridge weight
  double tau_sq_coeff = 1.0;  // c in tau^2 = c * n * m * sigma^2
  double soft_coeff = 1.3;    // soft SV threshold = soft_coeff * sigma * sqrt(m)
  double noise_sigma = 0.0;
};

/// Keep c_i iff |c_i| > lambda.
std::vector<double> hard_threshold(std::span<const double> coeffs, double lambda);

/// max(sigma_i - tau, 0).
std::vector<double> soft_threshold_sv(std::span<const double> sigma_values, double tau);

/// w_i = S_i / (S_i + N_i), with 0/0 := 0.
std::vector<double> wiener_weights(std::span<const double> signal_psd,
                                   std::span<const double> noise_psd);
std::vector<double> wiener_weights(std::span<const double> signal_psd, double noise_psd);

/// Closed-form ridge under an orthonormal basis: c_i / (1 + mu^2).
std::vector<double> tikhonov_shrink(std::span<const double> coeffs, double mu);
/// Per-mode ridge: c_i * e_i / (e_i + mu^2), i.e. Wiener weighting with S = e, N = mu^2.
std::vector<double> tikhonov_shrink(std::span<const double> coeffs, double mu,
                                    std::span<const double> energies);

/// Rank r with sum_{i>=r} s_i^2 > tau^2 >= sum_{i>r} s_i^2 (1-based), or 0 when
/// the total energy does not exceed tau^2.
int select_rank(std::span<const double> sigma_values, double tau_sq);
/// Same rule on squared singular values.
int select_rank_from_energies(std::span<const double> energies, double tau_sq);

/// c * n * m * sigma^2.
double noise_tau_sq(double n, double m, double sigma, double c);

}  // namespace patchlab
