#include "weylab/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "numerics.hpp"
#include "weylab/parallel.hpp"

namespace weylab {

namespace {

using detail::grid_golden_max;
using detail::log_add;

constexpr double kBisectRel = 1e-12;

std::function<double(double)> model_log_sigma(const GeometryModel& g, const PotentialModel& V) {
  return [&g, &V](double x) { return x > 0.0 ? log_sigma(g, V, x) : -kInf; };
}

// Interval of log radii; lo = -inf stands for the origin.
struct LogSpan {
  double lo;
  double hi;
};

std::vector<LogSpan> log_spans(const PotentialModel& V, double level) {
  std::vector<LogSpan> out;
  for (const auto& s : V.sublevel(level))
    out.push_back({s.lo > 0.0 ? std::log(s.lo) : -kInf, s.log_hi});
  return out;
}

// a \ b for sorted disjoint span lists.
std::vector<LogSpan> subtract(const std::vector<LogSpan>& a, const std::vector<LogSpan>& b) {
  std::vector<LogSpan> out;
  for (auto s : a) {
    double lo = s.lo;
    for (const auto& cut : b) {
      if (cut.hi <= lo || cut.lo >= s.hi) continue;
      if (cut.lo > lo) out.push_back({lo, cut.lo});
      lo = std::max(lo, cut.hi);
    }
    if (lo < s.hi) out.push_back({lo, s.hi});
  }
  // The shell is closed at its inner boundary {V = d}; keep degenerate
  // spans out.
  std::erase_if(out, [](const LogSpan& s) { return !(s.hi > s.lo); });
  return out;
}

}  // namespace

double growth_scale(const std::function<double(double)>& log_sigma_fn, double lambda) {
  const double log_two = std::log(2.0);
  if (log_sigma_fn(lambda) == -kInf)
    throw PreconditionError("a(lambda): sigma(lambda) = 0, below the classical spectrum");
  auto holds = [&](double s) {
    const double lhs = log_sigma_fn(lambda - s);
    if (lhs == -kInf) return false;
    return log_two + lhs >= log_sigma_fn(lambda + s);
  };
  double lo = 0.0;
  double hi = std::max(lambda, 1.0);
  for (int k = 0; holds(hi); ++k) {
    if (k == 64) throw InvariantViolation("a(lambda): predicate holds on an unbounded range");
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 400 && hi - lo > kBisectRel * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return lo;
}

double a_of_lambda(const GeometryModel& geometry, const PotentialModel& V, double lambda) {
  if (!(lambda >= 3.0)) throw PreconditionError("a(lambda) is defined for lambda >= 3");
  return growth_scale(model_log_sigma(geometry, V), lambda);
}

double d_delta(const GeometryModel& geometry, const PotentialModel& V, double lambda,
               double delta, const QuadratureSettings& settings) {
  if (!(lambda > 0.0)) throw PreconditionError("d_delta: lambda must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("d_delta: delta must lie in (0, 1)");
  const double n2 = 0.5 * geometry.dim();
  const auto J = log_phase_integral(geometry, V, lambda, n2, settings);
  if (J.is_zero()) throw PreconditionError("d_delta: Phi(lambda) = 0");
  const double rhs = std::log(delta) + J.log_value;
  const double lhs0 = n2 * std::log(lambda);
  auto holds = [&](double s) {
    if (s <= 0.0) return true;
    const double ls = log_sigma(geometry, V, s);
    return ls == -kInf || lhs0 + ls <= rhs;
  };
  double lo = std::max(0.0, V.minimum());
  double hi = lambda;
  if (holds(hi)) throw InvariantViolation("d_delta: predicate holds at s = lambda");
  for (int it = 0; it < 400 && hi - lo > kBisectRel * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return lo;
}

OscillationRadius b_delta(const GeometryModel& geometry, const PotentialModel& V, double lambda,
                          double delta, double a, double d, const OscillationOptions& options) {
  if (!(options.cap > 0.0)) throw PreconditionError("b_delta: cap must be positive");
  const double threshold = delta * delta * a;
  const auto shell = subtract(log_spans(V, lambda + delta * a), log_spans(V, d));
  if (shell.empty()) throw InvariantViolation("b_delta: empty shell");

  // max over shell centres of osc_{B_r(x)} V
  auto worst = [&](double r) {
    double m = 0.0;
    for (const auto& s : shell) {
      if (s.lo < 0.0) {
        const double x_lo = s.lo == -kInf ? 0.0 : std::exp(s.lo);
        const double x_hi = std::min(1.0, std::exp(s.hi));
        m = std::max(m, grid_golden_max(
                            [&](double x) { return oscillation(V, geometry, x, r); }, x_lo, x_hi));
      }
      if (s.hi > 0.0) {
        m = std::max(m, grid_golden_max(
                            [&](double u) { return oscillation_at_log_center(V, geometry, u, r); },
                            std::max(s.lo, 0.0), s.hi));
      }
    }
    return m;
  };
  auto holds = [&](double r) { return worst(r) <= threshold; };

  OscillationRadius out;
  const double inj = geometry.injectivity_radius();
  const bool finite_inj = std::isfinite(inj);
  const double top = finite_inj ? std::nextafter(inj, 0.0) : options.cap;
  if (holds(top)) {
    out.capped = true;
    out.effectively_infinite = !finite_inj;
    out.value = finite_inj ? inj : options.cap;
    out.log_value = std::log(out.value);
    return out;
  }
  double hi = std::log(top);
  double lo = hi - 700.0;
  if (!holds(std::exp(lo))) {
    out.value = 0.0;
    out.log_value = -kInf;
    return out;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(std::exp(mid)) ? lo : hi) = mid;
  }
  out.log_value = lo;
  out.value = std::exp(lo);
  return out;
}

double c_formula(double K, double a, double b) {
  if (!(a > 0.0)) throw PreconditionError("c_delta: a must be positive");
  if (std::isinf(b)) return K / a;
  return (1.0 + K * b * b) / (a * b * b);
}

double InvariantReport::doubling_ratio() const { return std::exp(log_doubling_ratio); }

void InvariantReport::check() const {
  if (!(d_delta < lambda)) throw InvariantViolation("report: d_delta >= lambda");
  if (!(a >= 0.0 && a <= lambda)) throw InvariantViolation("report: a outside [0, lambda]");
  if (K != curvature.combined()) throw InvariantViolation("report: K != R + S^(2/3) + T^(1/2)");
  const bool limit_zero = b.effectively_infinite && K == 0.0;
  if (!(c_delta > 0.0) && !limit_zero && log_c_delta == -kInf)
    throw InvariantViolation("report: c_delta must be positive");
}

InvariantReport c_delta(const GeometryModel& geometry, const PotentialModel& V, double lambda,
                        double delta, const OscillationOptions& options,
                        const QuadratureSettings& settings) {
  InvariantReport rep;
  rep.lambda = lambda;
  rep.delta = delta;
  rep.log_sigma = log_sigma(geometry, V, lambda);
  rep.log_phi = phi(geometry, V, lambda, settings).log_value;
  rep.a = a_of_lambda(geometry, V, lambda);
  rep.d_delta = d_delta(geometry, V, lambda, delta, settings);
  rep.b = b_delta(geometry, V, lambda, delta, rep.a, rep.d_delta, options);
  const double r_lo = std::exp(std::min(700.0, V.log_level_radius(rep.d_delta)));
  rep.curvature = geometry.curvature_bounds({std::max(0.0, r_lo - rep.b.value),
                                             V.level_radius(lambda + delta * rep.a) + rep.b.value});
  rep.K = rep.curvature.combined();
  const double log_a = std::log(rep.a);
  const double log_k = rep.K > 0.0 ? std::log(rep.K) : -kInf;
  if (rep.b.effectively_infinite) {
    rep.c_delta = c_formula(rep.K, rep.a, kInf);
    rep.log_c_delta = log_k - log_a;
  } else {
    rep.c_delta = c_formula(rep.K, rep.a, rep.b.value);
    rep.log_c_delta = log_add(-2.0 * rep.b.log_value, log_k) - log_a;
  }
  rep.log_doubling_ratio = log_sigma(geometry, V, 2.0 * lambda) - rep.log_sigma;
  rep.check();
  return rep;
}

DoublingReport doubling_check(const GeometryModel& geometry, const PotentialModel& V,
                              const std::vector<double>& lambda_grid, double bound) {
  DoublingReport rep;
  rep.holds = true;
  for (double lambda : lambda_grid) {
    DoublingRow row;
    row.lambda = lambda;
    const double base = log_sigma(geometry, V, lambda);
    if (base == -kInf) {
      row.skipped = true;
    } else {
      row.log_ratio = log_sigma(geometry, V, 2.0 * lambda) - base;
      row.ratio = std::exp(row.log_ratio);
      rep.max_ratio = std::max(rep.max_ratio, row.ratio);
      if (!(row.ratio <= bound)) rep.holds = false;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

CriterionVerdict criterion_from_reports(std::vector<InvariantReport> reports) {
  if (reports.size() < 4) throw PreconditionError("criterion_trend: need at least 4 grid points");
  for (std::size_t i = 1; i < reports.size(); ++i)
    if (!(reports[i].lambda > reports[i - 1].lambda))
      throw PreconditionError("criterion_trend: grid must be strictly increasing");
  CriterionVerdict v;
  const std::size_t n = reports.size();
  v.monotone_upper_half = true;
  for (std::size_t i = n / 2; i + 1 < n; ++i) {
    const double now = reports[i].log_c_delta;
    const double next = reports[i + 1].log_c_delta;
    const bool both_zero = now == -kInf && next == -kInf;
    if (!(next < now) && !both_zero) v.monotone_upper_half = false;
  }
  // Least squares on the finite points; a tail of exact zeros (b = inf,
  // K = 0) counts as slope -inf.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& r : reports) {
    if (r.log_c_delta == -kInf) continue;
    const double x = std::log(r.lambda);
    sx += x, sy += r.log_c_delta, sxx += x * x, sxy += x * r.log_c_delta;
    ++m;
  }
  const bool zero_tail = reports.back().log_c_delta == -kInf;
  if (zero_tail) {
    v.slope = -kInf;
    v.note = "c_delta vanishes at the top of the grid (b effectively infinite, K = 0)";
  } else if (m >= 2) {
    v.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  } else {
    v.slope = std::numeric_limits<double>::quiet_NaN();
  }
  v.satisfied = v.monotone_upper_half && v.slope < -0.1;
  if (v.note.empty())
    v.note = v.satisfied ? "criterion satisfied empirically" : "criterion fails or inconclusive";
  v.reports = std::move(reports);
  return v;
}

CriterionVerdict criterion_trend(const GeometryModel& geometry, const PotentialModel& V,
                                 double delta, const std::vector<double>& lambda_grid,
                                 const OscillationOptions& options,
                                 const QuadratureSettings& settings) {
  auto reports = parallel_map(lambda_grid, [&](double lambda) {
    return c_delta(geometry, V, lambda, delta, options, settings);
  });
  return criterion_from_reports(std::move(reports));
}

}  // namespace weylab
