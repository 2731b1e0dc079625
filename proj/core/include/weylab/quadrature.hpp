#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace weylab {

struct QuadratureSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  long max_subdivisions = 1'000'000;

  void validate() const;
};

/// Quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved relative error " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved_tolerance() const { return achieved_; }

 private:
  double achieved_;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

using Integrand = std::function<double(double)>;

/// Double-exponential (tanh-sinh) quadrature on [a, b]. Tolerates integrable
/// endpoint singularities such as (b - x)^{-1/2}.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureSettings& settings = {});

/// Sums `integrate` over consecutive breakpoints (sorted, first = a, last = b).
QuadratureResult integrate_pieces(const Integrand& f, std::span<const double> points,
                                  const QuadratureSettings& settings = {});

/// Adaptive Gauss-Kronrod (G15/K31). An algorithmically independent route
/// used as a cross-check.
QuadratureResult integrate_gauss_kronrod(const Integrand& f, double a, double b,
                                         const QuadratureSettings& settings = {});

}  // namespace weylab
