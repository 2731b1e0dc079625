#pragma once

// Model geometries and confining potential families.
//
// Every geometry is radial: points are described by a single radius r >= 0
// (|x| on the line, geodesic distance to the origin on R^n and H^3, and the
// distance along the R factor on the cylinder R x S^1). Potentials are
// functions of that radius.

#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Raised when an operation is called outside its documented domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computed quantity violates an invariant it must satisfy.
/// Signals a bug upstream rather than bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class GeometryKind { Line, EuclideanRadial, Cylinder, Hyperbolic3 };

/// Suprema of |Rm|, |∇Rm| and |∇²Rm| over a region.
struct CurvatureBounds {
  double R = 0.0;
  double S = 0.0;
  double T = 0.0;

  /// R + S^{2/3} + T^{1/2}; invariant under metric rescaling when paired
  /// with a length squared.
  double combined() const;
};

struct RadialInterval {
  double lo = 0.0;
  double hi = 0.0;
};

class GeometryModel {
 public:
  static GeometryModel line();
  static GeometryModel euclidean(int n);
  static GeometryModel cylinder();
  static GeometryModel hyperbolic3();

  GeometryKind kind() const { return kind_; }
  int dim() const { return dim_; }

  /// Bottom of the spectrum of the Laplacian: 0 for flat models, 1 on H^3.
  double spectral_floor() const;

  /// Radial volume density w(r): vol{radius < rho} = ∫_0^rho w(r) dr.
  /// The cylinder carries the 2π of the circle fibre and both half-lines,
  /// so w = 4π there.
  double volume_weight(double r) const;
  double log_volume_weight(double r) const;
  /// log w(e^u); stays finite when e^u overflows.
  double log_volume_weight_at_log_radius(double u) const;

  /// vol{radius < rho} in closed form.
  double ball_volume(double rho) const;
  double log_ball_volume(double rho) const;
  double log_ball_volume_at_log_radius(double u) const;

  /// +inf except on the cylinder, where the circle factor caps it at π.
  double injectivity_radius() const;

  CurvatureBounds curvature_bounds(RadialInterval region) const;

  /// True when w(r) grows exponentially (H^3); quadrature then works in r
  /// rather than in log r.
  bool exponential_growth() const { return kind_ == GeometryKind::Hyperbolic3; }

  std::string name() const;

 private:
  GeometryModel(GeometryKind kind, int dim) : kind_(kind), dim_(dim) {}

  GeometryKind kind_;
  int dim_;
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

enum class PotentialFamily { Power, LogPower, IteratedLog, Piecewise };

struct PiecewiseNode {
  double r = 0.0;
  double value = 0.0;
};

/// A half-open radial interval [lo, hi). `log_hi` is ln(hi) and remains
/// finite when hi itself overflows a double.
struct RadialSpan {
  double lo = 0.0;
  double hi = 0.0;
  double log_hi = -kInf;
};

/// Confining radial potential V(r) = max(floor, f(r)) where f is one of
///   Power        f = r^alpha
///   LogPower     f = c (ln max(r, e))^alpha
///   IteratedLog  f = ln∘…∘ln (depth times) of max(r, E_depth), E_k = exp^k(1)
///   Piecewise    linear interpolation of a table, linear extrapolation past
///                the last node (the last slope must be positive)
/// The max(r, ·) clamps replace the closed forms near the origin, where they
/// are negative or singular; the result is continuous and nondecreasing for
/// every built-in family.
class PotentialModel {
 public:
  static PotentialModel power(double alpha, double floor = 1.0);
  static PotentialModel log_power(double c, double alpha, double floor = 1.0);
  static PotentialModel iterated_log(int depth, double floor = 1.0);
  static PotentialModel piecewise(std::vector<PiecewiseNode> table, double floor = 1.0);
  /// Whitespace separated "r value" rows; '#' starts a comment.
  static PotentialModel piecewise_from_file(const std::filesystem::path& path, double floor = 1.0);

  PotentialFamily family() const { return family_; }
  double floor() const { return floor_; }

  /// V(r) for r >= 0.
  double operator()(double r) const;
  /// V(e^u), accurate when e^u overflows.
  double at_log_radius(double u) const;
  /// The unclamped family formula f(r).
  double closed_form(double r) const;

  /// inf_{r >= 0} V(r).
  double minimum() const;
  bool monotone() const { return monotone_; }
  /// Radius beyond which V equals the family's closed form.
  double smoothing_radius() const;
  /// Radii where V fails to be smooth (clamp junctions, table nodes).
  std::vector<double> breakpoints() const;

  /// {r >= 0 : V(r) < level} as disjoint sorted spans.
  std::vector<RadialSpan> sublevel(double level) const;
  /// sup{r : V(r) < level}; 0 when the sublevel set is empty. May be +inf
  /// for the logarithmic families, in which case log_level_radius is finite.
  double level_radius(double level) const;
  double log_level_radius(double level) const;

  std::string name() const;

 private:
  PotentialModel() = default;

  double at_log_radius_unclamped(double u) const;
  double piecewise_raw(double r) const;

  PotentialFamily family_ = PotentialFamily::Power;
  double alpha_ = 1.0;
  double c_ = 1.0;
  int depth_ = 1;
  double floor_ = 1.0;
  bool monotone_ = true;
  std::vector<PiecewiseNode> table_;
};

/// sup - inf of V over the closed metric ball of radius `ball_radius`
/// centred at a point at radius `center`. The ball must be smaller than the
/// injectivity radius.
double oscillation(const PotentialModel& V, const GeometryModel& geometry, double center,
                   double ball_radius);

/// Same, with the centre given by its log-radius so that astronomically
/// distant shells (logarithmic potentials) are handled without overflow.
double oscillation_at_log_center(const PotentialModel& V, const GeometryModel& geometry,
                                 double log_center, double ball_radius);

}  // namespace weylab
