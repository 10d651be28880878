#include <doctest.h>

#include <cmath>
#include <numbers>

#include "patchlab/errors.hpp"
#include "patchlab/random.hpp"
#include "patchlab/transforms.hpp"

using namespace patchlab;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

Patch random_patch(int side, Rng& rng) {
  Patch p;
  p.side = side;
  for (int i = 0; i < side * side; ++i) p.values.push_back(255.0 * rng.uniform01());
  return p;
}

Eigen::MatrixXd row_centred(const Eigen::MatrixXd& x) {
  return x.colwise() - x.rowwise().mean();
}

}  // namespace

TEST_SUITE("transforms") {
  TEST_CASE("dct2 of a constant patch is pure DC") {
    Patch p{std::vector<double>(16, 10.0), {}, 4};
    const Eigen::MatrixXd c = dct2_forward(p);
    CHECK(c(0, 0) == doctest::Approx(40.0).epsilon(1e-14));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i || j) CHECK(std::abs(c(i, j)) < 1e-9);

    Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(4, 4);
    dc(0, 0) = 4.0 * 7.0;
    for (double v : dct2_inverse(dc).values) CHECK(v == doctest::Approx(7.0).epsilon(1e-14));
    for (double v : dct2_inverse(Eigen::MatrixXd::Zero(5, 5)).values) CHECK(v == 0.0);
  }

  TEST_CASE("dct2 roundtrip and energy preservation") {
    Rng rng(4);
    for (int side : {3, 4, 5, 8}) {
      const Patch p = random_patch(side, rng);
      const Eigen::MatrixXd c = dct2_forward(p);
      double es = 0.0;
      for (double v : p.values) es += v * v;
      CHECK(c.squaredNorm() == doctest::Approx(es).epsilon(1e-9));
      const Patch back = dct2_inverse(c);
      for (std::size_t i = 0; i < p.values.size(); ++i) CHECK(std::abs(back.values[i] - p.values[i]) <= 1e-9);
    }
    const Eigen::MatrixXd d = dct_matrix(6);
    CHECK((d * d.transpose() - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-13);
  }

  TEST_CASE("haar hand cases and roundtrip") {
    const auto c = haar1d_forward({3, 3, 3, 3});
    CHECK(c[0] == doctest::Approx(6.0));
    for (int i = 1; i < 4; ++i) CHECK(std::abs(c[i]) < 1e-15);
    const auto d = haar1d_forward({1, -1});
    CHECK(std::abs(d[0]) < 1e-15);
    CHECK(d[1] == doctest::Approx(std::numbers::sqrt2));

    Rng rng(8);
    for (int n : {1, 2, 8, 64}) {
      std::vector<double> v(n);
      for (auto& x : v) x = rng.normal();
      const auto f = haar1d_forward(v);
      double e0 = 0.0, e1 = 0.0;
      for (int i = 0; i < n; ++i) {
        e0 += v[i] * v[i];
        e1 += f[i] * f[i];
      }
      CHECK(e1 == doctest::Approx(e0).epsilon(1e-9));
      const auto back = haar1d_inverse(f);
      for (int i = 0; i < n; ++i) CHECK(std::abs(back[i] - v[i]) <= 1e-9);
      const Eigen::MatrixXd h = haar_matrix(n);
      CHECK((h * h.transpose() - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-12);
    }
    CHECK_THROWS_AS(haar1d_forward({1, 2, 3}), ContractError);
  }

  TEST_CASE("haar padding reflects and strips by truncation") {
    CHECK(haar_padding(5) == std::vector<int>{0, 1, 2, 3, 4, 3, 2, 1});
    CHECK(haar_padding(8) == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
    const auto p85 = haar_padding(85);
    CHECK(p85.size() == 128);
    for (int i = 0; i < 85; ++i) CHECK(p85[i] == i);
    for (int i : p85) {
      CHECK(i >= 0);
      CHECK(i < 85);
    }
  }

  TEST_CASE("pca_fit hand cases") {
    Eigen::MatrixXd same(3, 4);
    same.colwise() = Eigen::Vector3d(1, 2, 3);
    const PcaModel z = pca_fit(same);
    CHECK(z.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
    CHECK((z.mean - Eigen::Vector3d(1, 2, 3)).norm() < 1e-15);

    Eigen::MatrixXd toy(2, 3);
    toy << 1, 2, 3, 1, 2, 3;
    const PcaModel t = pca_fit(toy);
    CHECK(std::abs(std::abs(t.basis(0, 0)) - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(t.basis(0, 0) - t.basis(1, 0)) < 1e-12);
    CHECK(t.eigenvalues(0) == doctest::Approx(4.0 / 3.0));
    CHECK(std::abs(t.eigenvalues(1)) < 1e-12);

    CHECK_THROWS_AS(pca_fit(Eigen::MatrixXd::Ones(3, 1)), ContractError);
  }

  TEST_CASE("pca_fit decorrelates and reconstructs") {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd x = random_matrix(9, 20, rng) * 30.0;
      const PcaModel pca = pca_fit(x);
      CHECK((pca.basis.transpose() * pca.basis - Eigen::MatrixXd::Identity(9, 9)).norm() < 1e-8);
      for (int i = 1; i < 9; ++i) CHECK(pca.eigenvalues(i) <= pca.eigenvalues(i - 1));
      CHECK(pca.eigenvalues.minCoeff() >= 0.0);
      const Eigen::MatrixXd y = pca.basis.transpose() * row_centred(x);
      Eigen::MatrixXd cov = y * y.transpose() / 20.0;
      const double trace = cov.trace();
      cov.diagonal().setZero();
      CHECK(cov.cwiseAbs().maxCoeff() <= 1e-8 * trace);
      const Eigen::MatrixXd back = (pca.basis * y).colwise() + pca.mean;
      CHECK((back - x).norm() <= 1e-8 * x.norm());

      // Eigenvalues of the covariance are sigma_i^2 / m of the centred matrix.
      const SvdFactors f = svd_decompose(row_centred(x));
      for (int i = 0; i < 9; ++i)
        CHECK(pca.eigenvalues(i) == doctest::Approx(f.sigma(i) * f.sigma(i) / 20.0).epsilon(1e-7));
    }
  }

  TEST_CASE("svd_decompose hand cases") {
    Eigen::MatrixXd d(2, 2);
    d << 3, 0, 0, 1;
    const SvdFactors f = svd_decompose(d);
    CHECK(f.sigma(0) == doctest::Approx(3.0));
    CHECK(f.sigma(1) == doctest::Approx(1.0));
    Eigen::MatrixXd r1(2, 2);
    r1 << 3, 0, 0, 0;
    CHECK((low_rank_approx(f, 1) - r1).norm() < 1e-14);
    CHECK(low_rank_approx(f, 0).norm() == 0.0);
    CHECK_THROWS_AS(low_rank_approx(f, 3), ContractError);
    CHECK_THROWS_AS(low_rank_approx(f, -1), ContractError);

    Rng rng(1);
    const Eigen::VectorXd u = random_matrix(5, 1, rng), v = random_matrix(8, 1, rng);
    const SvdFactors outer = svd_decompose(u * v.transpose());
    CHECK(outer.sigma(1) <= 1e-8 * outer.sigma(0));

    const SvdFactors zero = svd_decompose(Eigen::MatrixXd::Zero(3, 4));
    CHECK(zero.sigma.norm() == 0.0);
  }

  TEST_CASE("svd accuracy, sign convention and residual energy") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::MatrixXd x = random_matrix(6, 10, rng);
      const SvdFactors f = svd_decompose(x);
      const Eigen::MatrixXd rec = f.u * f.sigma.asDiagonal() * f.v.transpose();
      CHECK((rec - x).norm() <= 1e-7 * x.norm());
      CHECK((f.u.transpose() * f.u - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-8);
      CHECK((f.v.transpose() * f.v - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-8);
      for (int j = 0; j < 6; ++j) {
        Eigen::Index at;
        f.u.col(j).cwiseAbs().maxCoeff(&at);
        CHECK(f.u(at, j) >= 0.0);
      }
      CHECK((low_rank_approx(f, 6) - x).norm() <= 1e-7 * x.norm());
      for (int r = 0; r <= 6; ++r) {
        const double resid = (x - low_rank_approx(f, r)).squaredNorm();
        const double tail = f.sigma.tail(6 - r).squaredNorm();
        CHECK(std::abs(resid - tail) <= 1e-8 * x.squaredNorm());
      }
    }
  }

  TEST_CASE("truncated SVD beats random rank-r matrices") {
    Rng rng(123);
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXd x = random_matrix(6, 10, rng);
      const SvdFactors f = svd_decompose(x);
      for (int r = 1; r < 6; ++r) {
        const double best = (x - low_rank_approx(f, r)).norm();
        for (int k = 0; k < 100; ++k) {
          const Eigen::MatrixXd b = random_matrix(6, r, rng) * random_matrix(r, 10, rng);
          CHECK(best <= (x - b).norm() + 1e-6);
        }
      }
    }
  }

  TEST_CASE("left_spectrum gives the same low-rank projection") {
    Rng rng(5);
    const Eigen::MatrixXd x = random_matrix(9, 30, rng);
    const LeftSpectrum ls = left_spectrum(x);
    const SvdFactors f = svd_decompose(x);
    for (int i = 0; i < 9; ++i)
      CHECK(ls.energies(i) == doctest::Approx(f.sigma(i) * f.sigma(i)).epsilon(1e-9));
    for (int r = 0; r <= 9; ++r) {
      const Eigen::MatrixXd ur = ls.u.leftCols(r);
      CHECK((ur * (ur.transpose() * x) - low_rank_approx(f, r)).norm() <= 1e-8 * x.norm());
    }
  }
}
