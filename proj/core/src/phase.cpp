#include "weylab/phase.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "numerics.hpp"

namespace weylab {

namespace {

using detail::log_add;
using detail::log_sub;

double log_ball(const GeometryModel& g, double r, double log_r) {
  if (r <= 0.0) return -kInf;
  if (std::isfinite(r) && g.exponential_growth()) return g.log_ball_volume(r);
  return g.log_ball_volume_at_log_radius(log_r);
}

// Breakpoints on [lo, hi] graded geometrically toward hi, where the
// integrand of a sublevel integral is concentrated and non-smooth.
std::vector<double> graded_points(double lo, double hi, std::vector<double> interior) {
  std::vector<double> pts{lo, hi};
  for (double x : interior)
    if (x > lo && x < hi) pts.push_back(x);
  double width = 0.5 * (hi - lo);
  const double smallest = 1e-6 * std::max(1.0, std::abs(hi));
  for (int k = 0; k < 48 && width > smallest; ++k, width *= 0.5) pts.push_back(hi - width);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

double LogQuantity::value() const { return std::exp(log_value); }

double weyl_constant(int n) {
  return std::pow(2.0 * kPi, -n) * unit_ball_volume(n);
}

double log_sigma(const GeometryModel& geometry, const PotentialModel& V, double lambda) {
  if (!(lambda > 0.0)) throw PreconditionError("sigma: lambda must be positive");
  double total = -kInf;
  for (const auto& span : V.sublevel(lambda)) {
    const double hi = log_ball(geometry, span.hi, span.log_hi);
    const double lo = span.lo > 0.0 ? log_ball(geometry, span.lo, std::log(span.lo)) : -kInf;
    total = log_add(total, log_sub(hi, lo));
  }
  return total;
}

double sigma(const GeometryModel& geometry, const PotentialModel& V, double lambda) {
  return std::exp(log_sigma(geometry, V, lambda));
}

LogQuantity log_phase_integral(const GeometryModel& geometry, const PotentialModel& V,
                               double lambda, double exponent, double cutoff,
                               const QuadratureSettings& settings) {
  if (exponent < 0.0) throw PreconditionError("phase integral: exponent must be >= 0");
  const double level = std::min(cutoff, lambda);
  LogQuantity out;
  const double vmin = V.minimum();
  if (level <= vmin) return out;
  const double log_gap = std::log(lambda - vmin);
  const auto kinks = V.breakpoints();

  double total_log = -kInf;
  double abs_err_scaled = 0.0;  // error relative to e^{total_log}, accumulated loosely
  auto accumulate = [&](double shift, const QuadratureResult& r) {
    if (!(r.value > 0.0)) return;
    const double piece = shift + std::log(r.value);
    const double before = total_log;
    total_log = log_add(total_log, piece);
    // Track relative error of the running sum.
    const double w_new = std::exp(piece - total_log);
    const double w_old = before == -kInf ? 0.0 : std::exp(before - total_log);
    abs_err_scaled = abs_err_scaled * w_old + (r.error / r.value) * w_new;
  };

  for (const auto& span : V.sublevel(level)) {
    // Part in r: the whole span on H^3, otherwise r <= 1.
    const double r_split = geometry.exponential_growth() ? kInf : 1.0;
    const double a_hi = std::min(span.hi, r_split);
    if (a_hi > span.lo) {
      const double shift = exponent * log_gap + geometry.log_volume_weight(a_hi);
      auto f = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double gap = lambda - V(r);
        if (!(gap > 0.0)) return 0.0;
        return std::exp(exponent * std::log(gap) + geometry.log_volume_weight(r) - shift);
      };
      std::vector<double> interior = kinks;
      const auto pts = graded_points(span.lo, a_hi, interior);
      accumulate(shift, integrate_pieces(f, pts, settings));
    }
    // Part in u = ln r for r >= 1.
    if (span.hi > r_split) {
      const double u_lo = std::log(std::max(span.lo, 1.0));
      const double u_hi = span.log_hi;
      if (u_hi > u_lo) {
        const double shift =
            exponent * log_gap + geometry.log_volume_weight_at_log_radius(u_hi) + u_hi;
        auto f = [&](double u) {
          const double gap = lambda - V.at_log_radius(u);
          if (!(gap > 0.0)) return 0.0;
          return std::exp(exponent * std::log(gap) +
                          geometry.log_volume_weight_at_log_radius(u) + u - shift);
        };
        std::vector<double> interior;
        for (double k : kinks) interior.push_back(std::log(k));
        const auto pts = graded_points(u_lo, u_hi, interior);
        accumulate(shift, integrate_pieces(f, pts, settings));
      }
    }
  }
  out.log_value = total_log;
  out.rel_error = abs_err_scaled;
  return out;
}

LogQuantity log_phase_integral(const GeometryModel& geometry, const PotentialModel& V,
                               double lambda, double exponent,
                               const QuadratureSettings& settings) {
  return log_phase_integral(geometry, V, lambda, exponent, lambda, settings);
}

PhiResult phi(const GeometryModel& geometry, const PotentialModel& V, double lambda,
              const QuadratureSettings& settings) {
  if (!(lambda > 0.0)) throw PreconditionError("phi: lambda must be positive");
  const int n = geometry.dim();
  const auto integral = log_phase_integral(geometry, V, lambda, 0.5 * n, settings);
  PhiResult out;
  if (integral.is_zero()) return out;
  out.log_value = std::log(weyl_constant(n)) + integral.log_value;
  out.value = std::exp(out.log_value);
  out.error = out.value * integral.rel_error;
  return out;
}

GrowthInequalities check_growth_inequalities(const GeometryModel& geometry,
                                             const PotentialModel& V, double lambda,
                                             double delta, double a, double d_delta,
                                             const QuadratureSettings& settings) {
  if (!(lambda > 3.0)) throw PreconditionError("growth inequalities need lambda > 3");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");
  const int n = geometry.dim();
  GrowthInequalities out;
  const double outer = log_sigma(geometry, V, lambda + delta * a);
  const double inner = lambda - delta * a > 0.0 ? log_sigma(geometry, V, lambda - delta * a) : -kInf;
  const double shell = log_sub(outer, inner);
  out.log_lhs = a > 0.0 ? 0.5 * n * std::log(a) + shell : -kInf;
  const auto rhs = log_phase_integral(geometry, V, lambda, 0.5 * n, lambda - a, settings);
  out.log_rhs = std::log(2.0) + rhs.log_value;
  out.shell_bound = out.log_lhs <= out.log_rhs + std::log1p(1e-6);
  out.d_below_lambda = d_delta < lambda;
  return out;
}

}  // namespace weylab
