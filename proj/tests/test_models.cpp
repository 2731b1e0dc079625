#include <doctest.h>

#include <cmath>
#include <random>

#include "weylab/models.hpp"
#include "weylab/quadrature.hpp"

using namespace weylab;
using doctest::Approx;

TEST_CASE("volume weights") {
  CHECK(GeometryModel::line().volume_weight(3.0) == 2.0);
  CHECK(GeometryModel::hyperbolic3().volume_weight(1.0) ==
        Approx(4 * kPi * std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-14));
  CHECK(GeometryModel::euclidean(2).volume_weight(2.0) == Approx(4 * kPi).epsilon(1e-14));
  CHECK(GeometryModel::cylinder().volume_weight(7.0) == Approx(4 * kPi).epsilon(1e-14));
  CHECK_THROWS_AS(GeometryModel::line().volume_weight(0.0), PreconditionError);
}

TEST_CASE("ball volumes match quadrature of the weight") {
  for (const auto& g : {GeometryModel::line(), GeometryModel::euclidean(3), GeometryModel::hyperbolic3(),
                        GeometryModel::cylinder()}) {
    for (double rho : {0.5, 2.0, 5.0}) {
      const auto q = integrate([&](double r) { return r > 0 ? g.volume_weight(r) : 0.0; }, 0.0, rho);
      CHECK(g.ball_volume(rho) == Approx(q.value).epsilon(1e-10));
      CHECK(g.log_ball_volume(rho) == Approx(std::log(q.value)).epsilon(1e-10));
    }
  }
  // π(sinh 2ρ - 2ρ) on H³
  CHECK(GeometryModel::hyperbolic3().ball_volume(2.0) == Approx(kPi * (std::sinh(4.0) - 4.0)).epsilon(1e-12));
  CHECK(GeometryModel::euclidean(3).ball_volume(2.0) == Approx(4.0 / 3.0 * kPi * 8.0).epsilon(1e-12));
}

TEST_CASE("geometry constants") {
  CHECK(GeometryModel::line().spectral_floor() == 0.0);
  CHECK(GeometryModel::hyperbolic3().spectral_floor() == 1.0);
  CHECK(GeometryModel::cylinder().injectivity_radius() == kPi);
  CHECK(std::isinf(GeometryModel::line().injectivity_radius()));
  CHECK(std::isinf(GeometryModel::hyperbolic3().injectivity_radius()));
  const auto h = GeometryModel::hyperbolic3().curvature_bounds({0.0, 10.0});
  CHECK(h.R == 1.0);
  CHECK(h.S == 0.0);
  CHECK(h.T == 0.0);
  const auto c = GeometryModel::cylinder().curvature_bounds({0.0, 10.0});
  CHECK(c.combined() == 0.0);
  CHECK(GeometryModel::hyperbolic3().dim() == 3);
  CHECK(GeometryModel::cylinder().dim() == 2);
}

TEST_CASE("potential evaluation") {
  CHECK(PotentialModel::log_power(1.0, 1.0)(std::exp(2.0)) == Approx(2.0).epsilon(1e-14));
  CHECK(PotentialModel::power(2.0)(3.0) == 9.0);
  CHECK(PotentialModel::power(2.0)(0.5) == 1.0);
  CHECK(PotentialModel::power(2.0, 0.0)(0.5) == 0.25);
  CHECK(PotentialModel::log_power(0.5, 0.5)(std::exp(4.0)) == Approx(1.0).epsilon(1e-14));
  CHECK(PotentialModel::iterated_log(2)(std::exp(std::exp(3.0))) == Approx(3.0).epsilon(1e-12));
  // The log form agrees with the direct one and stays finite past overflow.
  const auto V = PotentialModel::log_power(1.0, 2.0);
  CHECK(V.at_log_radius(std::log(50.0)) == Approx(V(50.0)).epsilon(1e-13));
  CHECK(V.at_log_radius(1e4) == Approx(1e8).epsilon(1e-13));
}

TEST_CASE("potentials are continuous, confining and monotone") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  const std::vector<PotentialModel> models{
      PotentialModel::power(2.0), PotentialModel::power(0.5), PotentialModel::log_power(1.0, 1.0),
      PotentialModel::log_power(0.5, 0.5), PotentialModel::iterated_log(2),
      PotentialModel::piecewise({{0.0, 1.0}, {1.0, 2.0}, {3.0, 2.5}, {4.0, 7.0}})};
  for (const auto& V : models) {
    CHECK(V.minimum() >= 1.0);
    for (int i = 0; i < 1000; ++i) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      CHECK(V(a) <= V(b));
    }
    for (double k : V.breakpoints())
      CHECK(V(k * (1 - 1e-12)) == Approx(V(k * (1 + 1e-12))).epsilon(1e-9));
    CHECK(V(1e6) > V(10.0));
  }
}

TEST_CASE("sublevel sets and level radii") {
  const auto V = PotentialModel::power(2.0, 0.0);
  const auto spans = V.sublevel(4.0);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].lo == 0.0);
  CHECK(spans[0].hi == Approx(2.0).epsilon(1e-12));
  CHECK(V.level_radius(9.0) == Approx(3.0).epsilon(1e-12));
  CHECK(PotentialModel::power(2.0).sublevel(0.5).empty());
  // ln r < 800 has radius e^800, beyond double range.
  const auto L = PotentialModel::log_power(1.0, 1.0);
  CHECK(std::isinf(L.level_radius(800.0)));
  CHECK(L.log_level_radius(800.0) == Approx(800.0).epsilon(1e-12));
}

TEST_CASE("oscillation") {
  const auto L = PotentialModel::log_power(1.0, 1.0);
  CHECK(oscillation(L, GeometryModel::line(), 10.0, 2.0) == Approx(std::log(12.0) - std::log(8.0)).epsilon(1e-12));
  CHECK(oscillation(PotentialModel::power(1.0), GeometryModel::hyperbolic3(), 5.0, 1.0) ==
        Approx(2.0).epsilon(1e-12));
  CHECK(oscillation(PotentialModel::power(2.0), GeometryModel::line(), 3.0, 0.0) == 0.0);
  CHECK_THROWS_AS(oscillation(L, GeometryModel::cylinder(), 10.0, 4.0), PreconditionError);
  CHECK(oscillation_at_log_center(L, GeometryModel::line(), std::log(10.0), 2.0) ==
        Approx(std::log(1.5)).epsilon(1e-10));
  // Monotone in the ball radius.
  double prev = 0.0;
  for (double r = 0.0; r < 5.0; r += 0.25) {
    const double o = oscillation(PotentialModel::piecewise({{0.0, 1.0}, {2.0, 5.0}, {6.0, 5.5}}),
                                 GeometryModel::line(), 4.0, r);
    CHECK(o >= prev);
    prev = o;
  }
}
