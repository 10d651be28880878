#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "patchlab/errors.hpp"
#include "patchlab/random.hpp"
#include "patchlab/shrinkage.hpp"

using namespace patchlab;

namespace {

double norm(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

std::vector<double> random_spectrum(Rng& rng, int k) {
  std::vector<double> s(k);
  for (auto& v : s) v = rng.uniform01() < 0.2 ? 0.0 : 10.0 * rng.uniform01();
  if (rng.uniform01() < 0.3) std::fill(s.begin() + k / 2, s.end(), s[k / 2]);  // ties
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

}  // namespace

TEST_SUITE("shrinkage") {
  TEST_CASE("hard_threshold") {
    CHECK(hard_threshold(std::vector<double>{5, -1, 3}, 2) == std::vector<double>{5, 0, 3});
    CHECK(hard_threshold(std::vector<double>{5, -1, 0, 2}, 0) == std::vector<double>{5, -1, 0, 2});
    CHECK(hard_threshold(std::vector<double>{5, -1, 3}, std::numeric_limits<double>::infinity()) ==
          std::vector<double>{0, 0, 0});
    CHECK(hard_threshold(std::vector<double>{2, -2}, 2) == std::vector<double>{0, 0});
    CHECK_THROWS_AS(hard_threshold(std::vector<double>{1}, -1), ContractError);
  }

  TEST_CASE("soft_threshold_sv") {
    CHECK(soft_threshold_sv(std::vector<double>{5, 2, 1}, 1.5) == std::vector<double>{3.5, 0.5, 0});
    CHECK(soft_threshold_sv(std::vector<double>{5, 2, 1}, 0) == std::vector<double>{5, 2, 1});
    CHECK(soft_threshold_sv(std::vector<double>{5, 2, 1}, 5) == std::vector<double>{0, 0, 0});
  }

  TEST_CASE("wiener_weights") {
    CHECK(wiener_weights(std::vector<double>{0, 2, 6, 0}, 2.0) == std::vector<double>{0, 0.5, 0.75, 0});
    CHECK(wiener_weights(std::vector<double>{0}, 0.0) == std::vector<double>{0});
    CHECK(wiener_weights(std::vector<double>{1, 3}, std::vector<double>{1, 1}) == std::vector<double>{0.5, 0.75});
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      const double w = wiener_weights(std::vector<double>{100 * rng.uniform01()}, 100 * rng.uniform01())[0];
      CHECK(w >= 0.0);
      CHECK(w <= 1.0);
    }
    CHECK_THROWS_AS(wiener_weights(std::vector<double>{-1}, 1.0), ContractError);
  }

  TEST_CASE("tikhonov_shrink") {
    const std::vector<double> c{3, -4, 0.5};
    CHECK(tikhonov_shrink(c, 0.0) == c);
    for (double v : tikhonov_shrink(c, 1e6)) CHECK(std::abs(v) < 1e-6);
    CHECK(tikhonov_shrink(c, 1.0) == std::vector<double>{1.5, -2, 0.25});

    Rng rng(17);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> coeffs(8), energy(8);
      for (auto& v : coeffs) v = rng.normal() * 10;
      for (auto& v : energy) v = rng.uniform01() * 50;
      const double mu = rng.uniform01() * 5;
      const auto shrunk = tikhonov_shrink(coeffs, mu, energy);
      const auto w = wiener_weights(energy, mu * mu);
      for (int i = 0; i < 8; ++i) CHECK(shrunk[i] == doctest::Approx(w[i] * coeffs[i]).epsilon(1e-14));
    }
  }

  TEST_CASE("shrinkers are non-expansive") {
    Rng rng(23);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> c(12), e(12);
      for (auto& v : c) v = rng.normal() * 20;
      for (auto& v : e) v = rng.uniform01() * 100;
      const double lam = rng.uniform01() * 30;
      CHECK(norm(hard_threshold(c, lam)) <= norm(c));
      CHECK(norm(tikhonov_shrink(c, lam)) <= norm(c));
      CHECK(norm(tikhonov_shrink(c, lam, e)) <= norm(c));
      std::vector<double> s(c.size());
      std::transform(c.begin(), c.end(), s.begin(), [](double v) { return std::abs(v); });
      std::sort(s.begin(), s.end(), std::greater<>());
      const auto soft = soft_threshold_sv(s, lam);
      CHECK(norm(soft) <= norm(s));
      CHECK(std::is_sorted(soft.begin(), soft.end(), std::greater<>()));
    }
  }

  TEST_CASE("select_rank hand cases") {
    const std::vector<double> s{5, 2, 1};
    CHECK(select_rank(s, 4) == 2);
    CHECK(select_rank(s, 0.5) == 3);
    CHECK(select_rank(s, 100) == 0);
    CHECK(select_rank(s, 30) == 0);
    CHECK(select_rank(s, 1) == 2);
    CHECK(select_rank(s, 0) == 3);
    CHECK(select_rank(std::vector<double>{0, 0}, 0) == 0);
    CHECK(select_rank_from_energies(std::vector<double>{25, 4, 1}, 4) == 2);
  }

  TEST_CASE("select_rank double inequality and monotonicity on random spectra") {
    Rng rng(77);
    for (int t = 0; t < 500; ++t) {
      const auto s = random_spectrum(rng, 1 + static_cast<int>(rng.below(12)));
      const int k = static_cast<int>(s.size());
      std::vector<double> suffix(k + 2, 0.0);  // suffix[i] = sum_{j>=i} s_j^2, 1-based
      for (int i = k; i >= 1; --i) suffix[i] = suffix[i + 1] + s[i - 1] * s[i - 1];
      const double tau = suffix[1] * rng.uniform01() * 1.2;
      const int r = select_rank(s, tau);
      if (r == 0) {
        CHECK(suffix[1] <= tau);
      } else {
        CHECK(suffix[r] > tau);
        CHECK(tau >= suffix[r + 1]);
      }
      CHECK(select_rank(s, tau * 1.5 + 1.0) <= r);
    }
  }

  TEST_CASE("noise_tau_sq") {
    CHECK(noise_tau_sq(25, 85, 5, 1) == 53125.0);
    CHECK(noise_tau_sq(25, 85, 0, 1) == 0.0);
    CHECK(noise_tau_sq(25, 85, 5, 2.5) == doctest::Approx(2.5 * 53125.0));
    CHECK_THROWS_AS(noise_tau_sq(25, 85, -1, 1), ContractError);
  }
}
