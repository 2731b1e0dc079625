#include <doctest.h>

#include <cmath>

#include "weylab/heatkernel.hpp"
#include "weylab/tauberian.hpp"

using namespace weylab;
using doctest::Approx;

TEST_CASE("parametrix diagonal") {
  CHECK(parametrix_diagonal(5.0, 1, 0.01) == Approx(std::pow(4 * kPi * 0.01, -0.5) * std::exp(-0.05)).epsilon(1e-14));
  CHECK(parametrix_diagonal(5.0, 1, 0.01) == Approx(2.683365).epsilon(1e-6));
  CHECK(parametrix_diagonal(0.0, 3, 1.0) == Approx(0.02244839026).epsilon(1e-9));
  CHECK(parametrix_diagonal(7.0, 2, 1e-8) * 1e-8 == Approx(1.0 / (4 * kPi)).epsilon(1e-6));
  CHECK(parametrix_diagonal(PotentialModel::power(2.0), 1, 0.1, 3.0) == Approx(parametrix_diagonal(9.0, 1, 0.1)));
  CHECK_THROWS_AS(parametrix_diagonal(1.0, 1, 0.0), PreconditionError);
}

TEST_CASE("exact H³ kernel") {
  CHECK(exact_h3_kernel(1.0, 0.0) == Approx(std::exp(-1.0) * std::pow(4 * kPi, -1.5)).epsilon(1e-14));
  CHECK(exact_h3_kernel(1.0, 0.0) == Approx(0.0082583).epsilon(1e-5));
  // Series branch meets the direct formula.
  const double d = 1e-4;
  CHECK(exact_h3_kernel(0.3, d * 0.999) == Approx(exact_h3_kernel(0.3, d * 1.001)).epsilon(1e-6));
  const double v = exact_h3_kernel(0.5, 3.0);
  const double direct = std::exp(-0.5) * std::pow(2 * kPi, -1.5) * (3.0 / std::sinh(3.0)) * std::exp(-4.5);
  CHECK(v == Approx(direct).epsilon(1e-13));
  CHECK(std::exp(log_exact_h3_kernel(0.5, 3.0)) == Approx(direct).epsilon(1e-13));
  CHECK(v > 0.0);
  CHECK(v < 1e-3);
  CHECK(std::isfinite(log_exact_h3_kernel(1.0, 1e4)));
}

TEST_CASE("H³ kernel has mass one") {
  for (double t : {0.1, 1.0, 10.0}) CHECK(std::abs(h3_kernel_mass(t).value - 1.0) <= 1e-6);
}

TEST_CASE("spectral kernel identities") {
  const auto T = discretize_1d([](double x) { return 5.0 + std::sin(2 * kPi * x); }, 0.0, 1.0, 1.0 / 400,
                               BoundaryCondition::Dirichlet);
  const auto spec = dense_spectrum(T);
  for (double t : {0.001, 0.01, 0.1}) {
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.nodes.size(); ++i) sum += spec.h * spectral_kernel_diagonal(spec, t, i);
    CHECK(sum == Approx(heat_trace(spec, t)).epsilon(1e-10));
  }
  double prev = heat_trace(spec, 1e-4);
  for (double t = 2e-4; t < 1.0; t *= 2) {
    const double now = heat_trace(spec, t);
    CHECK(now < prev);
    prev = now;
  }
  const std::size_t mid = spec.nodes.size() / 2;
  for (double t : {0.001, 0.05}) {
    double direct = 0.0;
    for (std::size_t j = 0; j < spec.size(); ++j)
      direct += std::exp(-2 * t * spec.eigenvalues[j]) * spec.phi(mid, j) * spec.phi(mid, j);
    CHECK(spectral_kernel_diagonal(spec, 2 * t, mid) == Approx(direct).epsilon(1e-10));
    CHECK(spectral_kernel_diagonal(spec, t, mid) > 0.0);
  }
}

TEST_CASE("short-time limit of the spectral kernel") {
  const auto T = discretize_1d([](double x) { return 5.0 + std::sin(2 * kPi * x); }, 0.0, 1.0, 1.0 / 2000,
                               BoundaryCondition::Dirichlet);
  const auto spec = dense_spectrum(T);
  const double v = spectral_kernel_diagonal(spec, 1e-4, spec.nodes.size() / 2) * std::sqrt(4 * kPi * 1e-4);
  CHECK(v == Approx(1.0).epsilon(0.02));
}

TEST_CASE("pointwise counting bound on a two-level toy") {
  DenseSpectrum toy;
  toy.eigenvalues = {1.0, 4.0};
  toy.nodes = {0.0};
  toy.h = 1.0;
  toy.phi = Eigen::MatrixXd(1, 2);
  toy.phi(0, 0) = std::sqrt(0.3);
  toy.phi(0, 1) = std::sqrt(0.7);
  const std::vector<double> ls{2.0, 0.5};
  const auto rows = lemma21_check(toy, ls, 0);
  CHECK(rows[0].counting == Approx(0.3));
  CHECK(rows[0].bound == Approx(std::exp(1.0) * (0.3 * std::exp(-0.5) + 0.7 * std::exp(-2.0))).epsilon(1e-12));
  CHECK(rows[0].bound == Approx(0.7521).epsilon(1e-4));
  CHECK(rows[1].counting == 0.0);
  CHECK(rows[0].holds());
  CHECK(rows[1].holds());
  CHECK(spectral_kernel_diagonal(toy, 0.5, 0) == Approx(0.3 * std::exp(-0.5) + 0.7 * std::exp(-2.0)));
}

TEST_CASE("sine basis reproduces a constant potential") {
  const SineGalerkin g([](double) { return 5.0; }, 0.0, 1.0, 64);
  for (int k = 1; k <= 5; ++k) CHECK(g.eigenvalues()[k - 1] == Approx(k * k * kPi * kPi + 5.0).epsilon(1e-12));
  const auto ts = log_grid(1e-4, 1e-2, 10);
  const SineGalerkin big([](double) { return 5.0; }, 0.0, 1.0, 320);
  for (const auto& p : parametrix_defects(big, [](double) { return 5.0; }, 0.5, ts)) CHECK(p.defect < 1e-10);
}

TEST_CASE("remainder fit") {
  auto V = [](double x) { return 5.0 + std::sin(2 * kPi * x); };
  const auto ts = log_grid(1e-4, 1e-2, 10);
  RemainderOptions opt;
  opt.sup_v = 6.0;
  const auto fit = remainder_scaling_fit(V, 0.0, 1.0, 0.5, ts, opt);
  // V''(1/2) = 0, so the defect starts at order t^{5/2}; it is far smaller
  // than the t^{1/2} bound of the estimate.
  CHECK(fit.slope == Approx(2.465).epsilon(0.01));
  CHECK(fit.bound_constant < 1e-3);
  // At a generic point the leading defect is -t^{3/2} V''/(6 sqrt(4π)).
  const auto generic = remainder_scaling_fit(V, 0.0, 1.0, 0.4, ts, opt);
  CHECK(generic.slope == Approx(1.5).epsilon(0.03));
  const std::vector<double> bad{0.05};
  CHECK_THROWS_AS(remainder_scaling_fit(V, 0.0, 1.0, 0.5, bad, opt), PreconditionError);
  CHECK_THROWS_AS(remainder_scaling_fit(V, 0.0, 1.0, 0.1, ts, opt), PreconditionError);
}
