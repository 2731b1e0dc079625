#pragma once

// Monotone measures on [0, ∞), their Laplace-Stieltjes transforms, and a
// numerical check of the quantitative Tauberian comparison
//   |μ(s) - ν(s)| <= (ε + εL + C₁ L β(C₁/s)) ν(s),   s >= C₁ λ₁.

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace weylab {

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

/// Weight w at start, start + step, start + 2 step, ... (infinitely many).
struct Lattice {
  double start = 0.0;
  double step = 1.0;
  double weight = 1.0;
};

/// scale · (r - C)_+^α.
struct ShiftedPower {
  double C = 0.0;
  double alpha = 1.0;
  double scale = 1.0;
};

/// Nondecreasing, left-continuous function ν on [0, ∞) given as a sum of
/// finitely many atoms, lattices and shifted powers.
class MonotoneMeasure {
 public:
  MonotoneMeasure() = default;

  static MonotoneMeasure from_atoms(std::vector<Atom> atoms);
  static MonotoneMeasure from_lattice(Lattice lattice);
  static MonotoneMeasure from_power(ShiftedPower power);
  /// Atoms of weight 1 at each value (repeats merge).
  static MonotoneMeasure counting(std::span<const double> eigenvalues);

  MonotoneMeasure& add(const MonotoneMeasure& other);
  MonotoneMeasure scaled(double factor) const;

  /// ν(s) = mass of [0, s).
  double operator()(double s) const;
  /// ∫ e^{-tr} dν(r).
  double laplace(double t) const;
  bool empty() const { return atoms_.empty() && lattices_.empty() && powers_.empty(); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Lattice>& lattices() const { return lattices_; }
  const std::vector<ShiftedPower>& powers() const { return powers_; }

  /// "lattice:1,2,1", "power:0,1,0.5", "atoms:5:2,7:1"; terms joined by '+'.
  static MonotoneMeasure parse(const std::string& text);

 private:
  void normalize_atoms();

  std::vector<Atom> atoms_;  // strictly sorted, positive weights
  std::vector<Lattice> lattices_;
  std::vector<ShiftedPower> powers_;
};

/// ∫_C^∞ e^{-tr} (r - C)^p dr = Γ(p+1) t^{-(p+1)} e^{-tC}, p > -1.
double laplace_of_density(double C, double p, double t);

/// 40 points per decade on [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, int per_decade = 40);

struct ExponentialBound {
  double L = 0.0;
  double t_at_max = 0.0;
};

/// max over the grid of laplace(t) / ν(1/t); every t must lie in (0, 1/λ₁].
ExponentialBound check_exponential_bound(const MonotoneMeasure& nu, double lambda1,
                                         std::span<const double> t_grid);

struct QuotientRow {
  double tau = 1.0;
  double deviation = 0.0;  // max over s of |ν(τs)/ν(s) - 1|
};

struct QuotientReport {
  double max_deviation = 0.0;
  std::vector<QuotientRow> rows;  // one per τ
};

/// Default τ grid {1 ± 10^{-k}, k = 1..4}.
std::vector<double> default_tau_grid();

QuotientReport check_uniform_quotient(const MonotoneMeasure& nu, double lambda1,
                                      std::span<const double> tau_grid,
                                      std::span<const double> s_grid);

struct BetaPoint {
  double t = 0.0;
  double beta = 0.0;
};

/// |Lμ(t) - Lν(t)| / Lν(t).
double beta_at(const MonotoneMeasure& mu, const MonotoneMeasure& nu, double t);
std::vector<BetaPoint> beta_profile(const MonotoneMeasure& mu, const MonotoneMeasure& nu,
                                    std::span<const double> t_grid);

struct ConclusionRow {
  double s = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double bound = 0.0;  // right side for the reported C₁ (or the cap)
};

struct TauberianVerdict {
  double L_found = 0.0;
  double lambda1 = 0.0;
  double epsilon = 0.0;
  std::vector<BetaPoint> beta_profile;
  std::optional<double> conclusion_C1;  // empty: not found up to the cap
  double C1_cap = 0.0;
  std::vector<ConclusionRow> rows;
  std::size_t points_checked = 0;

  bool found() const { return conclusion_C1.has_value(); }
  std::string describe() const;
};

/// Smallest C₁ on a log grid in [1, cap] with the comparison holding at
/// every s >= C₁ λ₁ of s_grid. A C₁ for which no grid point qualifies does
/// not count as verified.
TauberianVerdict verify_conclusion(const MonotoneMeasure& mu, const MonotoneMeasure& nu,
                                   double lambda1, double epsilon,
                                   std::span<const double> s_grid, double C1_cap = 1e3);

}  // namespace weylab
