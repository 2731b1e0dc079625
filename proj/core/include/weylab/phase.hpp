#pragma once

// Classical phase-space quantities of H = Δ + V: sublevel volumes
// σ(λ) = |{V < λ}| and the Weyl integral
//   Φ(λ) = (2π)^{-n} ω_n ∫ (λ - V)_+^{n/2} dvol.
//
// Sublevel volumes grow like exp(λ²) or faster for slowly growing
// potentials, so everything is also available in log form.

#include "weylab/models.hpp"
#include "weylab/quadrature.hpp"

namespace weylab {

/// A positive quantity stored by its logarithm (log_value = -inf means 0).
struct LogQuantity {
  double log_value = -kInf;
  double rel_error = 0.0;

  double value() const;
  bool is_zero() const { return log_value == -kInf; }
};

/// (2π)^{-n} ω_n.
double weyl_constant(int n);

/// σ(λ) = vol{V < λ}, in closed form from the model volume function.
/// Nondecreasing and left-continuous in λ.
double sigma(const GeometryModel& geometry, const PotentialModel& V, double lambda);
double log_sigma(const GeometryModel& geometry, const PotentialModel& V, double lambda);

/// log ∫_{V < cutoff} (λ - V)_+^exponent dvol. `cutoff` defaults to λ.
LogQuantity log_phase_integral(const GeometryModel& geometry, const PotentialModel& V,
                               double lambda, double exponent, double cutoff,
                               const QuadratureSettings& settings = {});
LogQuantity log_phase_integral(const GeometryModel& geometry, const PotentialModel& V,
                               double lambda, double exponent,
                               const QuadratureSettings& settings = {});

struct PhiResult {
  double value = 0.0;      // may be +inf when it overflows; log_value is exact
  double log_value = -kInf;
  double error = 0.0;      // absolute quadrature error estimate
};

/// Φ(λ); zero for λ at or below inf V.
PhiResult phi(const GeometryModel& geometry, const PotentialModel& V, double lambda,
              const QuadratureSettings& settings = {});

struct GrowthInequalities {
  bool shell_bound = false;       // a^{n/2} |Ω_{λ+δa} \ Ω_{λ-δa}| <= 2 ∫_{Ω_{λ-a}} (λ-V)_+^{n/2}
  bool d_below_lambda = false;    // d_δ(λ) < λ
  double log_lhs = -kInf;
  double log_rhs = -kInf;

  bool holds() const { return shell_bound && d_below_lambda; }
};

/// The structural inequalities relating a(λ), d_δ(λ) and the sublevel sets.
/// The shell bound is tested with slack factor (1 + 1e-6).
GrowthInequalities check_growth_inequalities(const GeometryModel& geometry,
                                             const PotentialModel& V, double lambda,
                                             double delta, double a, double d_delta,
                                             const QuadratureSettings& settings = {});

}  // namespace weylab
