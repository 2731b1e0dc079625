#pragma once

// The growth scale a(λ), the energy d_δ(λ), the oscillation radius b_δ(λ)
// and the criterion quantity
//   c_δ(λ) = (1 + K b²) / (a b²),   K = R + S^{2/3} + T^{1/2}.
// The Weyl law holds when c_δ(λ) -> 0 for all small δ.

#include <functional>
#include <string>
#include <vector>

#include "weylab/models.hpp"
#include "weylab/phase.hpp"

namespace weylab {

/// sup{s >= 0 : 2σ(λ - s) >= σ(λ + s)} for a nondecreasing σ given by its
/// logarithm (log σ(x) = -inf for empty sublevel sets). Returns the lower
/// end of the final bisection bracket, so the predicate holds there.
double growth_scale(const std::function<double(double)>& log_sigma_fn, double lambda);

/// a(λ) for a model. Requires λ >= 3 and σ(λ) > 0.
double a_of_lambda(const GeometryModel& geometry, const PotentialModel& V, double lambda);

/// sup{s : λ^{n/2} σ(s) <= δ ∫ (λ - V)_+^{n/2}}.
double d_delta(const GeometryModel& geometry, const PotentialModel& V, double lambda,
               double delta, const QuadratureSettings& settings = {});

struct OscillationRadius {
  double value = 0.0;
  double log_value = -kInf;
  bool capped = false;                // search stopped at the cap
  bool effectively_infinite = false;  // capped and the cap is not an injectivity radius
};

struct OscillationOptions {
  /// Search cap for models with infinite injectivity radius.
  double cap = 1e12;
};

/// sup{r < inj : osc_{B_r(x)} V <= δ² a for every x with d_δ <= V(x) < λ + δ a}.
/// The centre maximum is taken over a radial grid of the shell refined by
/// golden-section search; shell endpoints are always included.
OscillationRadius b_delta(const GeometryModel& geometry, const PotentialModel& V, double lambda,
                          double delta, double a, double d, const OscillationOptions& options = {});

/// (1 + K b²) / (a b²) = (1/b² + K) / a.
double c_formula(double K, double a, double b);

struct InvariantReport {
  double lambda = 0.0;
  double delta = 0.0;
  double log_sigma = -kInf;
  double log_phi = -kInf;
  double a = 0.0;
  double d_delta = 0.0;
  OscillationRadius b;
  CurvatureBounds curvature;
  double K = 0.0;
  /// Uses 1/b² = 0 when b is effectively infinite.
  double c_delta = 0.0;
  double log_c_delta = -kInf;
  double log_doubling_ratio = 0.0;  // log σ(2λ)/σ(λ)

  double doubling_ratio() const;
  /// Throws InvariantViolation unless d_δ < λ, 0 <= a <= λ, K matches the
  /// curvature triple and c_δ > 0 (or b is effectively infinite with K = 0).
  void check() const;
};

InvariantReport c_delta(const GeometryModel& geometry, const PotentialModel& V, double lambda,
                        double delta, const OscillationOptions& options = {},
                        const QuadratureSettings& settings = {});

struct DoublingRow {
  double lambda = 0.0;
  double ratio = 0.0;  // +inf when it overflows; log_ratio stays finite
  double log_ratio = 0.0;
  bool skipped = false;  // σ(λ) = 0
};

struct DoublingReport {
  std::vector<DoublingRow> rows;
  double max_ratio = 0.0;
  bool holds = false;  // every computed ratio <= bound
};

DoublingReport doubling_check(const GeometryModel& geometry, const PotentialModel& V,
                              const std::vector<double>& lambda_grid, double bound = 4.0);

struct CriterionVerdict {
  bool satisfied = false;
  bool monotone_upper_half = false;
  double slope = 0.0;  // fitted d log c / d log λ
  std::string note;
  std::vector<InvariantReport> reports;
};

/// Fits log c_δ against log λ; "satisfied" iff c_δ decreases over the
/// upper half of the grid and the slope is below -0.1.
CriterionVerdict criterion_trend(const GeometryModel& geometry, const PotentialModel& V,
                                 double delta, const std::vector<double>& lambda_grid,
                                 const OscillationOptions& options = {},
                                 const QuadratureSettings& settings = {});

/// Same verdict from precomputed reports.
CriterionVerdict criterion_from_reports(std::vector<InvariantReport> reports);

}  // namespace weylab
