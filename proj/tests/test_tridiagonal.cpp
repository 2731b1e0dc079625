#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "weylab/models.hpp"
#include "weylab/tridiagonal.hpp"

using namespace weylab;
using doctest::Approx;

TEST_CASE("discrete Dirichlet Laplacian") {
  const double h = kPi / 4;
  const auto T = discretize_1d([](double) { return 0.0; }, 0.0, kPi, h, BoundaryCondition::Dirichlet);
  REQUIRE(T.size() == 3);
  for (double d : T.diag) CHECK(d == Approx(2 / (h * h)).epsilon(1e-14));
  for (double o : T.offdiag) CHECK(o == Approx(-1 / (h * h)).epsilon(1e-14));
  for (int k = 1; k <= 3; ++k) {
    const double mu = 2 / (h * h) * (1 - std::cos(k * kPi / 4));
    CHECK(sturm_count(T, mu * (1 - 1e-12)) == k - 1);
    CHECK(sturm_count(T, mu * (1 + 1e-12)) == k);
  }
  const auto S = discretize_1d([](double) { return 5.0; }, 0.0, kPi, h, BoundaryCondition::Dirichlet);
  for (std::size_t i = 0; i < 3; ++i) CHECK(S.diag[i] - T.diag[i] == Approx(5.0).epsilon(1e-14));
}

TEST_CASE("discrete Neumann Laplacian") {
  const auto T = discretize_1d([](double) { return 0.0; }, 0.0, 1.0, 0.5, BoundaryCondition::Neumann);
  REQUIRE(T.size() == 3);
  CHECK(T.diag[0] == Approx(4.0));
  CHECK(T.diag[1] == Approx(8.0));
  CHECK(T.diag[2] == Approx(4.0));
  CHECK(sturm_count(T, 1e-9) == 1);  // constant mode at 0
  CHECK_THROWS_AS(discretize_1d([](double) { return 0.0; }, 0.0, 0.0, 0.1, BoundaryCondition::Neumann),
                  PreconditionError);
  CHECK_THROWS_AS(discretize_1d([](double) { return 0.0; }, 0.0, 1.0, -0.1, BoundaryCondition::Neumann),
                  PreconditionError);
}

TEST_CASE("sturm count examples") {
  const std::vector<double> d{2, 2, 2}, o{-1, -1};
  CHECK(sturm_count(d, o, 2.5) == 2);
  CHECK(sturm_count(d, o, 2.0 - std::sqrt(2.0) - 1e-9) == 0);
  // Strict count: an eigenvalue equal to λ is not counted.
  CHECK(sturm_count(d, o, 2.0) == 1);
  const auto T = discretize_1d([](double) { return 0.0; }, 0.0, kPi, kPi / 1024, BoundaryCondition::Dirichlet);
  CHECK(sturm_count(T, 10.5) == 3);
  const std::vector<double> ls{0.5, 1.5, 4.5, 10.5};
  const auto many = sturm_counts(T, ls);
  CHECK(many == std::vector<std::int64_t>{0, 1, 2, 3});
}

TEST_CASE("sturm count equals dense eigendecomposition") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(1, 200);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    std::vector<double> d(n), o(n > 0 ? n - 1 : 0);
    for (auto& x : d) x = g(rng);
    for (auto& x : o) x = g(rng);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) M(i, i) = d[i];
    for (int i = 0; i + 1 < n; ++i) M(i, i + 1) = M(i + 1, i) = o[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    for (int k = 0; k < 5; ++k) {
      const double l = g(rng) * 2;
      std::int64_t dense = 0;
      for (int i = 0; i < n; ++i) dense += es.eigenvalues()[i] < l;
      CHECK(sturm_count(d, o, l) == dense);
    }
  }
}
