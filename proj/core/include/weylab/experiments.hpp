#pragma once

// End-to-end experiments: Weyl ratios against the invariant criterion, the
// R x S^1 counterexample, the positive families and the doubling survey.
// Each returns a table plus named pass/fail assertions.

#include <span>
#include <vector>

#include "weylab/config.hpp"
#include "weylab/csv.hpp"
#include "weylab/invariants.hpp"
#include "weylab/spectral.hpp"

namespace weylab {

struct ExperimentResult {
  CsvTable table;
  std::vector<Assertion> assertions;

  bool passed() const { return all_pass(assertions); }
};

/// Counting function on any model with a radial solver (line, cylinder, H^3).
CountingFunction count_model(const GeometryModel& geometry, const PotentialModel& V,
                             std::span<const double> lambdas, const MeshControl& mesh = {});

/// |f_i - 1| decreasing over the last ceil(n/2) entries. A change smaller
/// than `resolution` (one eigenvalue, or the mesh tolerance) counts as a tie.
bool approaches_one(std::span<const double> ratios, double resolution = 0.0);
/// |log f_i| strictly increasing over the whole sequence (all f_i > 0).
bool diverges_monotonically(std::span<const double> ratios);

/// Per λ: N bracket, Φ and N/Φ; plus the criterion verdict on the config's
/// criterion grid. With expect = satisfied the ratios must approach 1, with
/// expect = fails they must move away from 1 monotonically.
ExperimentResult run_weyl_ratio(const ExperimentConfig& config);

/// λ window in which the R x S^1 counts stay below ~10^7.
inline constexpr double kRxs1Lo = 2.0;
inline constexpr double kRxs1Hi = 4.0;
/// Declared bounds for the normalized integrals.
inline constexpr double kRxs1I1Floor = 0.25;
inline constexpr double kRxs1I2Ceiling = 1.0;

struct Rxs1Integrals {
  double i1 = 0.0;             // ∫_1^{e^{λ²}} (λ - sqrt(ln x))^{1/2} dx, times λ^{1/2} e^{-λ²}
  double i2 = 0.0;             // ∫_1^{e^{λ²}} (λ - sqrt(ln x)) dx, times λ e^{-λ²}
  double ratio = 0.0;          // unnormalized I₂ / I₁
};

Rxs1Integrals rxs1_integrals(double lambda);

/// V = c (ln|x|)^{1/2} on R and on R x S^1.
ExperimentResult run_counterexample_rxs1(std::span<const double> lambdas, double c = 1.0,
                                         const MeshControl& mesh = {0.2, 8, 1e-3});

/// H^3 with V = r^{1/2}: criterion fails and N/Φ decays.
ExperimentResult run_h3_failure(std::span<const double> lambdas = {},
                                const MeshControl& mesh = {});

/// Families where the criterion must hold, with their growth-type checks.
ExperimentResult run_positive_examples(double delta = 0.2);

/// V = x² (doubling) against V = ln|x| (not doubling).
ExperimentResult run_doubling_survey();

}  // namespace weylab
