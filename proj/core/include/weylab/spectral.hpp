#pragma once

// Eigenvalue counting functions N(λ) = #{λ_j < λ} of Δ + V on the model
// geometries. The domain is truncated where V exceeds λ; the Dirichlet and
// Neumann counts on the truncated domain bracket the true count.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "weylab/models.hpp"
#include "weylab/quadrature.hpp"
#include "weylab/tridiagonal.hpp"

namespace weylab {

struct MeshControl {
  double h_initial = 0.05;
  int refinement_rounds = 8;
  /// 0 demands identical integer counts at h and h/2; otherwise the counts
  /// may differ by rel_tol times the count.
  double rel_tol = 0.0;
  std::int64_t max_nodes = 400'000'000;

  void validate() const;
};

struct TruncationRule {
  double margin = 2.0;         // V(X) >= λ + margin
  double agmon_buffer = 15.0;  // Agmon distance from {V = λ} to X
  /// Beyond this radius the margin condition is dropped and only
  /// V(X) > λ plus the Agmon buffer are required.
  double margin_radius_limit = 1e6;
  double max_radius = 1e9;
};

struct CountBracket {
  double lambda = 0.0;
  std::int64_t lower = 0;  // Dirichlet
  std::int64_t upper = 0;  // Neumann
  double h = 0.0;
  double truncation = 0.0;
};

struct CountingFunction {
  std::vector<CountBracket> samples;
  std::string provenance;
  int rounds = 0;

  /// lower <= upper everywhere and both nondecreasing in λ.
  void check() const;
};

/// Thrown when halving h stops changing the counts too late.
class MeshConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest X >= level radius with V(X) >= λ + margin and Agmon distance
/// >= buffer. `shift` is added to V (the H^3 floor).
double truncation_radius(const PotentialModel& V, double lambda, const TruncationRule& rule = {},
                         double shift = 0.0);

/// ∫_{r1}^{r2} sqrt((V(r) - μ)_+) dr.
double agmon_distance(const PotentialModel& V, double mu, double r1, double r2,
                      const QuadratureSettings& settings = {});
double agmon_distance(const std::function<double(double)>& V, double mu, double r1, double r2,
                      const QuadratureSettings& settings = {});

/// N(λ) for -d²/dx² + V(|x|) on the line. Symmetric potentials split into
/// even and odd sectors on [0, X].
CountingFunction count_line(const PotentialModel& V, std::span<const double> lambdas,
                            const MeshControl& mesh = {}, const TruncationRule& rule = {});
CountBracket count_line(const PotentialModel& V, double lambda, const MeshControl& mesh = {},
                        const TruncationRule& rule = {});

/// N(λ) on R x S¹: Σ_k N_R(λ - k²) over circle modes k ∈ Z.
CountingFunction count_cylinder(const PotentialModel& V, std::span<const double> lambdas,
                                const MeshControl& mesh = {}, const TruncationRule& rule = {});
CountBracket count_cylinder(const PotentialModel& V, double lambda, const MeshControl& mesh = {},
                            const TruncationRule& rule = {});

/// N(λ) on H³ by angular momentum channels: u = sinh(r) f turns channel l
/// into -u'' + (1 + V + l(l+1)/sinh² r) u with u(0) = 0 and multiplicity
/// 2l + 1.
CountingFunction count_hyperbolic3(const PotentialModel& V, std::span<const double> lambdas,
                                   const MeshControl& mesh = {}, const TruncationRule& rule = {});
CountBracket count_hyperbolic3(const PotentialModel& V, double lambda, const MeshControl& mesh = {},
                               const TruncationRule& rule = {});

/// Effective potential of H³ channel l.
double h3_channel_potential(const PotentialModel& V, int l, double r);
/// Largest l whose effective potential dips below λ, or -1.
int h3_last_channel(const PotentialModel& V, double lambda, double radius);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct DnSandwich {
  std::int64_t dirichlet_sum = 0;
  std::int64_t global = 0;
  std::int64_t neumann_sum = 0;
  bool holds() const { return dirichlet_sum <= global && global <= neumann_sum; }
};

/// Σ_j N_D(Q_j) <= N(λ) <= Σ_j N_N(Q_j) for cells Q_j tiling [x_lo, x_hi]
/// of the line. Cell counts are mesh converged; the global count is
/// count_line.
DnSandwich dn_bracket(std::span<const Interval> partition, const PotentialModel& V, double lambda,
                      const MeshControl& mesh = {}, const TruncationRule& rule = {});

/// Eigenpairs of a discretised operator with eigenvectors normalised in the
/// h-weighted inner product: Σ_i h φ_j(x_i)² = 1.
struct DenseSpectrum {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd phi;  // column j = φ_j at the nodes
  std::vector<double> nodes;
  double h = 0.0;

  std::size_t size() const { return eigenvalues.size(); }
};

inline constexpr std::size_t kDenseLimit = 4000;

DenseSpectrum dense_spectrum(const TridiagonalOperator& T);

/// e(λ, x_i, x_i) = Σ_{λ_j < λ} φ_j(x_i)².
double pointwise_counting(const DenseSpectrum& spectrum, double lambda, std::size_t node);

struct AgmonTail {
  double buffer = 0.0;     // region {V_eff > λ + buffer}
  double tail_mass = 0.0;  // ∫_region |ψ|² / ∫ |ψ|²
  double rho_min = 0.0;    // Agmon distance (energy λ) from {V_eff <= λ} to the region
  double shape = 0.0;      // λ^{1+c} e^{-2 β rho_min}
};

/// Tail mass of eigenvector j beyond {V_eff > λ + λ^{-c}}.
AgmonTail agmon_tail_mass(const DenseSpectrum& spectrum, std::size_t j,
                          const std::function<double(double)>& v_eff, double lambda,
                          double c_exponent, double beta = 1.0);

struct AgmonSweep {
  std::vector<AgmonTail> rows;
  double C = 0.0;            // fitted on the first row
  bool bound_holds = false;  // tail_mass <= C shape on every row
  double slope = 0.0;        // d log(tail_mass) / d rho_min
};

AgmonSweep agmon_decay_sweep(const DenseSpectrum& spectrum, std::size_t j,
                             const std::function<double(double)>& v_eff, double lambda,
                             std::span<const double> buffers, double c_exponent = 0.0,
                             double beta = 1.0);

}  // namespace weylab
