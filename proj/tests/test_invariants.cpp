#include <doctest.h>

#include <cmath>

#include "weylab/invariants.hpp"

using namespace weylab;
using doctest::Approx;

namespace {
const auto line = GeometryModel::line();
const auto x2 = PotentialModel::power(2.0, 0.0);
}  // namespace

TEST_CASE("a(λ) closed forms") {
  for (double l : {10.0, 16.0, 100.0}) CHECK(a_of_lambda(line, x2, l) == Approx(0.6 * l).epsilon(1e-9));
  // σ = 2e^s: 2·2e^{λ-s} = 2e^{λ+s}, s = ln 2 / 2.
  const double a = growth_scale([](double s) { return std::log(2.0) + s; }, 10.0);
  CHECK(a == Approx(std::log(2.0) / 2.0).epsilon(1e-9));
  CHECK_THROWS_AS(a_of_lambda(line, x2, 2.0), PreconditionError);
}

TEST_CASE("a(λ) is a supremum") {
  const double l = 16.0, a = a_of_lambda(line, x2, l);
  auto pred = [&](double s) { return 2.0 * sigma(line, x2, l - s) >= sigma(line, x2, l + s); };
  CHECK(pred(a * (1 - 1e-8)));
  CHECK_FALSE(pred(a * (1 + 1e-8)));
}

TEST_CASE("a(λ) on H³ with V = r² grows like λ^{1/2}") {
  const auto g = GeometryModel::hyperbolic3();
  for (double l : {25.0, 100.0, 400.0}) {
    const double ratio = a_of_lambda(g, PotentialModel::power(2.0), l) / std::sqrt(l);
    CHECK(ratio >= 0.1);
    CHECK(ratio <= 10.0);
  }
}

TEST_CASE("d_δ closed form and defining inequality") {
  CHECK(d_delta(line, x2, 16.0, 0.5) == Approx(kPi * kPi / 4.0).epsilon(1e-9));
  for (double l : {10.0, 16.0, 100.0})
    CHECK(d_delta(line, x2, l, 0.2) == Approx(0.04 * kPi * kPi * l / 16.0).epsilon(1e-9));
  const auto g = GeometryModel::hyperbolic3();
  const auto V = PotentialModel::power(0.5);
  const double d = d_delta(g, V, 3.0, 0.3);
  CHECK(d > 0.0);
  CHECK(d < 3.0);
  const double lhs = 1.5 * std::log(3.0) + log_sigma(g, V, d);
  const double rhs = std::log(0.3) + log_phase_integral(g, V, 3.0, 1.5).log_value;
  CHECK(lhs <= rhs + 1e-9);
  CHECK(d_delta(line, x2, 16.0, 1e-4) < 1e-6);
}

TEST_CASE("b_δ on the line with V = x²") {
  // osc over B_r(x) is 4xr; the for-all condition binds at the outer shell radius.
  const double l = 25.0, delta = 0.2;
  const double a = a_of_lambda(line, x2, l);
  const double d = d_delta(line, x2, l, delta);
  const auto b = b_delta(line, x2, l, delta, a, d);
  CHECK_FALSE(b.capped);
  CHECK(b.value == Approx(delta * delta * a / (4.0 * std::sqrt(l + delta * a))).epsilon(1e-9));
}

TEST_CASE("b_δ caps") {
  // Cylinder: never beyond the injectivity radius.
  const auto c = GeometryModel::cylinder();
  const auto V = PotentialModel::log_power(1.0, 2.0);
  const double a = a_of_lambda(c, V, 100.0);
  const auto b = b_delta(c, V, 100.0, 0.2, a, d_delta(c, V, 100.0, 0.2));
  CHECK(b.value <= kPi);
  // Slowly varying V on the line: the search stops at the cap.
  const auto L = PotentialModel::log_power(1.0, 1.0);
  const double al = a_of_lambda(line, L, 30.0);
  const auto bl = b_delta(line, L, 30.0, 0.2, al, d_delta(line, L, 30.0, 0.2), {1e6});
  CHECK(bl.capped);
  CHECK(bl.effectively_infinite);
  CHECK(bl.value == 1e6);
}

TEST_CASE("c formula and homogeneity") {
  CHECK(c_formula(0.0, 6.0, 2.0) == Approx(1.0 / 24.0).epsilon(1e-15));
  CHECK(c_formula(1.0, 10.0, 1.0) == Approx(0.2).epsilon(1e-15));
  CHECK(c_formula(2.0, 4.0, kInf) == 0.5);
  CHECK(c_formula(0.0, 4.0, kInf) == 0.0);
  CHECK_THROWS_AS(c_formula(1.0, 0.0, 1.0), PreconditionError);
  // (κ²R, κ³S, κ⁴T) with b/κ leaves K b² unchanged when only one term is present.
  for (double kappa : {0.5, 2.0, 3.0}) {
    const double b = 1.7;
    CurvatureBounds base{1.3, 0.0, 0.0}, scaled{kappa * kappa * 1.3, 0.0, 0.0};
    CHECK(scaled.combined() * (b / kappa) * (b / kappa) == Approx(base.combined() * b * b).epsilon(1e-14));
    CurvatureBounds s1{0.0, 2.0, 0.0}, s2{0.0, kappa * kappa * kappa * 2.0, 0.0};
    CHECK(s2.combined() * (b / kappa) * (b / kappa) == Approx(s1.combined() * b * b).epsilon(1e-14));
    CurvatureBounds t1{0.0, 0.0, 5.0}, t2{0.0, 0.0, std::pow(kappa, 4) * 5.0};
    CHECK(t2.combined() * (b / kappa) * (b / kappa) == Approx(t1.combined() * b * b).epsilon(1e-14));
  }
}

TEST_CASE("reports satisfy their invariants") {
  for (double l : {10.0, 16.0, 100.0}) {
    const auto r = c_delta(line, x2, l, 0.2);
    CHECK_NOTHROW(r.check());
    CHECK(r.d_delta < r.lambda);
    CHECK(r.a <= r.lambda);
    CHECK(r.K == 0.0);
    CHECK(r.c_delta > 0.0);
  }
  const auto h = c_delta(GeometryModel::hyperbolic3(), PotentialModel::power(2.0), 50.0, 0.2);
  CHECK(h.K == 1.0);
  CHECK_NOTHROW(h.check());
}

TEST_CASE("doubling") {
  const auto d = doubling_check(line, x2, {10.0, 20.0, 40.0});
  CHECK(d.holds);
  for (const auto& r : d.rows) CHECK(r.ratio == Approx(std::sqrt(2.0)).epsilon(1e-12));
  const auto l = doubling_check(line, PotentialModel::log_power(1.0, 1.0), {5.0, 10.0, 20.0});
  CHECK_FALSE(l.holds);
  CHECK(l.rows.back().log_ratio == Approx(20.0).epsilon(1e-12));
  const auto s = doubling_check(line, PotentialModel::power(2.0), {0.4});
  CHECK(s.rows[0].skipped);
}

TEST_CASE("criterion verdicts") {
  const std::vector<double> grid{25, 50, 100, 200};
  CHECK(criterion_trend(line, x2, 0.2, grid).satisfied);
  CHECK(criterion_trend(GeometryModel::hyperbolic3(), PotentialModel::power(2.0), 0.2, grid).satisfied);
  CHECK(criterion_trend(GeometryModel::cylinder(), PotentialModel::log_power(1.0, 2.0), 0.2, grid).satisfied);
  CHECK_FALSE(criterion_trend(GeometryModel::cylinder(), PotentialModel::log_power(0.5, 0.5), 0.2, grid).satisfied);
  CHECK_FALSE(criterion_trend(GeometryModel::hyperbolic3(), PotentialModel::power(0.5), 0.2, grid).satisfied);
  CHECK_THROWS_AS(criterion_trend(line, x2, 0.2, {25, 50, 100}), PreconditionError);
}
