#pragma once

// Symmetric tridiagonal discretisations of -u'' + V_eff u on an interval and
// exact eigenvalue counting by Sturm sequences (LDL^T pivot signs).

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace weylab {

enum class BoundaryCondition { Dirichlet, Neumann };

struct TridiagonalOperator {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size diag.size() - 1
  double h = 0.0;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::string effective_potential;

  std::size_t size() const { return diag.size(); }
  /// Abscissa of row i.
  double node(std::size_t i) const;
};

/// Second-order central differences with nodes x_lo + i h', where h' is the
/// largest mesh width <= h that divides the interval evenly. Dirichlet drops
/// the two boundary nodes; Neumann keeps them with diagonal 1/h'^2 + V_eff.
/// At least two cells are required.
TridiagonalOperator discretize_1d(const std::function<double(double)>& v_eff, double x_lo,
                                  double x_hi, double h, BoundaryCondition bc,
                                  std::string description = {});

/// Number of eigenvalues strictly below lambda. An exactly vanishing pivot
/// is replaced by +pivmin, which keeps an eigenvalue equal to lambda out of
/// the count.
std::int64_t sturm_count(std::span<const double> diag, std::span<const double> offdiag,
                         double lambda);
std::int64_t sturm_count(const TridiagonalOperator& T, double lambda);

/// Counts for several thresholds in one sweep over the matrix.
std::vector<std::int64_t> sturm_counts(const TridiagonalOperator& T,
                                       std::span<const double> lambdas);

}  // namespace weylab
