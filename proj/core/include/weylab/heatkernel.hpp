#pragma once

// Heat kernels: the diagonal parametrix (4πt)^{-n/2} e^{-tV(x)}, the exact
// kernel of H³ + 0 shifted by the spectral floor, kernels rebuilt from
// eigendecompositions, and the counting-vs-heat inequality
//   e(λ, x, x) <= e K(1/λ, x, x).

#include <functional>
#include <span>
#include <vector>

#include "weylab/models.hpp"
#include "weylab/spectral.hpp"

namespace weylab {

enum class KernelSource { Parametrix, SpectralSum, ExactH3 };

struct KernelSample {
  double t = 0.0;
  double x = 0.0;
  double value = 0.0;
  KernelSource source = KernelSource::Parametrix;
};

/// (4πt)^{-n/2} e^{-t v}, with v = V(x).
double parametrix_diagonal(double v, int n, double t);
double parametrix_diagonal(const PotentialModel& V, int n, double t, double x);

/// e^{-t} (4πt)^{-3/2} (d / sinh d) e^{-d²/4t}; Taylor series for d < 1e-4.
double exact_h3_kernel(double t, double d);
/// log of the same, finite for large d.
double log_exact_h3_kernel(double t, double d);

/// ∫_0^∞ k(t, d) 4π sinh²d dd, which equals 1.
QuadratureResult h3_kernel_mass(double t, const QuadratureSettings& settings = {});

/// Σ_j e^{-tλ_j} φ_j(x_i)², dropping terms below 1e-16 of the leading one.
double spectral_kernel_diagonal(const DenseSpectrum& spectrum, double t, std::size_t node);
/// Σ_j e^{-tλ_j}.
double heat_trace(const DenseSpectrum& spectrum, double t);

struct Lemma21Row {
  double lambda = 0.0;
  std::size_t node = 0;
  double counting = 0.0;  // e(λ, x, x)
  double bound = 0.0;     // e K(1/λ, x, x)
  bool holds() const { return counting <= bound; }
};

std::vector<Lemma21Row> lemma21_check(const DenseSpectrum& spectrum,
                                      std::span<const double> lambdas, std::size_t node);
/// Every node.
std::vector<Lemma21Row> lemma21_check(const DenseSpectrum& spectrum,
                                      std::span<const double> lambdas);

/// Dirichlet eigenpairs of -d²/dx² + V on [a, b] in the sine basis
/// sqrt(2/(b-a)) sin(kπ(x-a)/(b-a)), k = 1..modes. Potential matrix
/// elements come from cosine moments of V by composite Gauss-Legendre.
class SineGalerkin {
 public:
  SineGalerkin(const std::function<double(double)>& V, double a, double b, int modes = 320);

  /// K(t, x, x).
  double kernel_diagonal(double t, double x) const;
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

 private:
  double a_, b_;
  int modes_;
  std::vector<double> eigenvalues_;
  Eigen::MatrixXd vectors_;  // columns: coefficients in the sine basis
};

struct RemainderPoint {
  double t = 0.0;
  double kernel = 0.0;
  double parametrix = 0.0;
  double defect = 0.0;  // |K - parametrix|
  bool dropped = false;
};

struct RemainderFit {
  double slope = 0.0;  // d log defect / d log t
  double intercept = 0.0;
  std::vector<RemainderPoint> points;
  /// max over kept points of defect / (t^{1/2} max(1, sup V)); the bound
  /// |K - k⁰| <= C t^{-n/2+1} max(1, sup V) holds with this C.
  double bound_constant = 0.0;
};

struct RemainderOptions {
  double eps0 = 0.3;
  int modes = 320;
  double sup_v = 1.0;  // sup V over the interval
};

/// Parametrix defect at x for t on the grid, all t in (0, min(1, eps0³)) and
/// x at distance >= eps0 from the ends. Points whose defect is at rounding
/// level are dropped; at least five must remain.
RemainderFit remainder_scaling_fit(const std::function<double(double)>& V, double a, double b,
                                   double x, std::span<const double> t_grid,
                                   const RemainderOptions& options = {});

/// Defects only, without the fit or the minimum point count.
std::vector<RemainderPoint> parametrix_defects(const SineGalerkin& reference,
                                               const std::function<double(double)>& V, double x,
                                               std::span<const double> t_grid);

}  // namespace weylab
