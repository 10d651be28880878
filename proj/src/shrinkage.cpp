#include "patchlab/shrinkage.hpp"

#include <algorithm>
#include <cmath>

#include "patchlab/errors.hpp"

namespace patchlab {

std::vector<double> hard_threshold(std::span<const double> coeffs, double lambda) {
  require(lambda >= 0.0, "hard_threshold: lambda must be >= 0");
  std::vector<double> out(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    out[i] = std::abs(coeffs[i]) > lambda ? coeffs[i] : 0.0;
  return out;
}

std::vector<double> soft_threshold_sv(std::span<const double> sigma_values, double tau) {
  require(tau >= 0.0, "soft_threshold_sv: tau must be >= 0");
  std::vector<double> out(sigma_values.size());
  for (std::size_t i = 0; i < sigma_values.size(); ++i)
    out[i] = std::max(sigma_values[i] - tau, 0.0);
  return out;
}

namespace {

double wiener_ratio(double s, double n) {
  const double den = s + n;
  return den > 0.0 ? s / den : 0.0;
}

}  // namespace

std::vector<double> wiener_weights(std::span<const double> signal_psd,
                                   std::span<const double> noise_psd) {
  require(signal_psd.size() == noise_psd.size(), "wiener_weights: size mismatch");
  std::vector<double> w(signal_psd.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    require(signal_psd[i] >= 0.0 && noise_psd[i] >= 0.0, "wiener_weights: negative PSD");
    w[i] = wiener_ratio(signal_psd[i], noise_psd[i]);
  }
  return w;
}

std::vector<double> wiener_weights(std::span<const double> signal_psd, double noise_psd) {
  require(noise_psd >= 0.0, "wiener_weights: negative noise PSD");
  std::vector<double> w(signal_psd.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    require(signal_psd[i] >= 0.0, "wiener_weights: negative PSD");
    w[i] = wiener_ratio(signal_psd[i], noise_psd);
  }
  return w;
}

std::vector<double> tikhonov_shrink(std::span<const double> coeffs, double mu) {
  require(mu >= 0.0, "tikhonov_shrink: mu must be >= 0");
  const double f = 1.0 / (1.0 + mu * mu);
  std::vector<double> out(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = coeffs[i] * f;
  return out;
}

std::vector<double> tikhonov_shrink(std::span<const double> coeffs, double mu,
                                    std::span<const double> energies) {
  require(mu >= 0.0, "tikhonov_shrink: mu must be >= 0");
  const auto w = wiener_weights(energies, mu * mu);
  require(w.size() == coeffs.size(), "tikhonov_shrink: size mismatch");
  std::vector<double> out(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = w[i] * coeffs[i];
  return out;
}

int select_rank_from_energies(std::span<const double> energies, double tau_sq) {
  require(tau_sq >= 0.0, "select_rank: tau^2 must be >= 0");
  // suffix[r] (0-based) = sum_{i >= r} energies[i]; suffix[k] = 0.
  // Keep the largest r (1-based) whose suffix sum from r still exceeds tau^2.
  double suffix = 0.0;
  for (std::size_t i = energies.size(); i-- > 0;) {
    suffix += energies[i];
    if (suffix > tau_sq) return static_cast<int>(i) + 1;
  }
  return 0;
}

int select_rank(std::span<const double> sigma_values, double tau_sq) {
  std::vector<double> energies(sigma_values.size());
  for (std::size_t i = 0; i < energies.size(); ++i)
    energies[i] = sigma_values[i] * sigma_values[i];
  return select_rank_from_energies(energies, tau_sq);
}

double noise_tau_sq(double n, double m, double sigma, double c) {
  require(n >= 0.0 && m >= 0.0 && sigma >= 0.0 && c >= 0.0, "noise_tau_sq: negative input");
  return c * n * m * sigma * sigma;
}

}  // namespace patchlab
