#include "weylab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

namespace weylab {

namespace {

std::size_t refinement_levels(long max_subdivisions) {
  // tanh-sinh doubles its abscissa count per level.
  const double levels = std::log2(static_cast<double>(std::max(max_subdivisions, 16L)));
  return static_cast<std::size_t>(std::clamp(levels, 4.0, 22.0));
}

// One rule per thread: the abscissa tables grow lazily on first use.
boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule(std::size_t levels) {
  thread_local std::map<std::size_t, std::unique_ptr<boost::math::quadrature::tanh_sinh<double>>>
      cache;
  auto& slot = cache[levels];
  if (!slot) slot = std::make_unique<boost::math::quadrature::tanh_sinh<double>>(levels);
  return *slot;
}

void accept_or_throw(const char* who, const QuadratureResult& r, double l1,
                     const QuadratureSettings& s) {
  const double scale = std::max(std::abs(r.value), l1);
  const double allowed = std::max(s.abs_tol, s.rel_tol * scale);
  if (!std::isfinite(r.value) || r.error > 10.0 * allowed) {
    throw QuadratureError(std::string(who) + ": no convergence",
                          scale > 0.0 ? r.error / scale : r.error);
  }
}

QuadratureResult tanh_sinh_raw(const Integrand& f, double a, double b,
                               const QuadratureSettings& settings, double* l1) {
  auto& rule = tanh_sinh_rule(refinement_levels(settings.max_subdivisions));
  QuadratureResult out;
  try {
    out.value = rule.integrate(f, a, b, settings.rel_tol, &out.error, l1);
  } catch (const std::exception& e) {
    throw QuadratureError(std::string("tanh-sinh: ") + e.what(),
                          std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 1)
    throw std::invalid_argument("quadrature settings: tolerances must be positive");
}

QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureSettings& settings) {
  settings.validate();
  if (a == b) return {};
  if (b < a) {
    auto r = integrate(f, b, a, settings);
    return {-r.value, r.error};
  }
  double l1 = 0.0;
  auto out = tanh_sinh_raw(f, a, b, settings, &l1);
  accept_or_throw("tanh-sinh", out, l1, settings);
  return out;
}

QuadratureResult integrate_pieces(const Integrand& f, std::span<const double> points,
                                  const QuadratureSettings& settings) {
  settings.validate();
  // Tolerances apply to the sum, so tiny pieces are not held to abs_tol alone.
  QuadratureResult total;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    double piece_l1 = 0.0;
    auto r = tanh_sinh_raw(f, points[i], points[i + 1], settings, &piece_l1);
    total.value += r.value;
    total.error += r.error;
    l1 += piece_l1;
  }
  accept_or_throw("tanh-sinh", total, l1, settings);
  return total;
}

QuadratureResult integrate_gauss_kronrod(const Integrand& f, double a, double b,
                                         const QuadratureSettings& settings) {
  settings.validate();
  if (a == b) return {};
  const auto depth = static_cast<unsigned>(
      std::clamp(std::log2(static_cast<double>(settings.max_subdivisions)), 1.0, 30.0));
  QuadratureResult out;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, depth, settings.rel_tol, &out.error, &l1);
  accept_or_throw("gauss-kronrod", out, l1, settings);
  return out;
}

}  // namespace weylab
