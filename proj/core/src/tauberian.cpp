#include "weylab/tauberian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "weylab/models.hpp"

namespace weylab {

namespace {

// Neumaier compensated sum.
class Sum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw PreconditionError("measure: bad number '" + s + "'");
  }
  if (used != s.size()) throw PreconditionError("measure: bad number '" + s + "'");
  return v;
}

}  // namespace

MonotoneMeasure MonotoneMeasure::from_atoms(std::vector<Atom> atoms) {
  MonotoneMeasure m;
  m.atoms_ = std::move(atoms);
  m.normalize_atoms();
  return m;
}

MonotoneMeasure MonotoneMeasure::from_lattice(Lattice lattice) {
  if (!(lattice.start >= 0.0) || !(lattice.step > 0.0) || !(lattice.weight > 0.0))
    throw PreconditionError("lattice: need start >= 0, step > 0, weight > 0");
  MonotoneMeasure m;
  m.lattices_.push_back(lattice);
  return m;
}

MonotoneMeasure MonotoneMeasure::from_power(ShiftedPower power) {
  if (!(power.C >= 0.0) || !(power.alpha > 0.0) || !(power.scale > 0.0))
    throw PreconditionError("shifted power: need C >= 0, alpha > 0, scale > 0");
  MonotoneMeasure m;
  m.powers_.push_back(power);
  return m;
}

MonotoneMeasure MonotoneMeasure::counting(std::span<const double> eigenvalues) {
  std::vector<Atom> atoms;
  for (double e : eigenvalues) atoms.push_back({e, 1.0});
  return from_atoms(std::move(atoms));
}

void MonotoneMeasure::normalize_atoms() {
  for (const auto& a : atoms_)
    if (!(a.location >= 0.0) || !(a.weight > 0.0) || !std::isfinite(a.location))
      throw PreconditionError("atoms: need location >= 0 and weight > 0");
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& x, const Atom& y) { return x.location < y.location; });
  std::vector<Atom> merged;
  for (const auto& a : atoms_) {
    if (!merged.empty() && merged.back().location == a.location)
      merged.back().weight += a.weight;
    else
      merged.push_back(a);
  }
  atoms_ = std::move(merged);
}

MonotoneMeasure& MonotoneMeasure::add(const MonotoneMeasure& other) {
  atoms_.insert(atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  lattices_.insert(lattices_.end(), other.lattices_.begin(), other.lattices_.end());
  powers_.insert(powers_.end(), other.powers_.begin(), other.powers_.end());
  normalize_atoms();
  return *this;
}

MonotoneMeasure MonotoneMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) throw PreconditionError("measure: scale factor must be positive");
  MonotoneMeasure m = *this;
  for (auto& a : m.atoms_) a.weight *= factor;
  for (auto& l : m.lattices_) l.weight *= factor;
  for (auto& p : m.powers_) p.scale *= factor;
  return m;
}

double MonotoneMeasure::operator()(double s) const {
  Sum total;
  const auto end = std::lower_bound(atoms_.begin(), atoms_.end(), s,
                                    [](const Atom& a, double v) { return a.location < v; });
  for (auto it = atoms_.begin(); it != end; ++it) total.add(it->weight);
  for (const auto& l : lattices_) {
    if (s <= l.start) continue;
    // #{k >= 0 : start + k step < s}
    double k = std::ceil((s - l.start) / l.step);
    while (k > 0 && l.start + (k - 1) * l.step >= s) k -= 1;
    while (l.start + k * l.step < s) k += 1;
    total.add(k * l.weight);
  }
  for (const auto& p : powers_)
    if (s > p.C) total.add(p.scale * std::pow(s - p.C, p.alpha));
  return total.value();
}

double MonotoneMeasure::laplace(double t) const {
  if (!(t > 0.0)) throw PreconditionError("laplace: t must be positive");
  Sum total;
  for (const auto& a : atoms_) total.add(a.weight * std::exp(-t * a.location));
  for (const auto& l : lattices_)
    total.add(l.weight * std::exp(-t * l.start) / -std::expm1(-t * l.step));
  for (const auto& p : powers_)
    total.add(p.scale * std::tgamma(p.alpha + 1.0) * std::exp(-p.alpha * std::log(t) - t * p.C));
  return total.value();
}

MonotoneMeasure MonotoneMeasure::parse(const std::string& text) {
  MonotoneMeasure out;
  for (const auto& term : split(text, '+')) {
    const auto colon = term.find(':');
    if (colon == std::string::npos) throw PreconditionError("measure: expected kind:args in '" + term + "'");
    const std::string kind = term.substr(0, colon);
    const auto args = split(term.substr(colon + 1), ',');
    if (kind == "lattice") {
      if (args.size() != 3) throw PreconditionError("lattice needs start,step,weight");
      out.add(from_lattice({number(args[0]), number(args[1]), number(args[2])}));
    } else if (kind == "power") {
      if (args.size() < 2 || args.size() > 3) throw PreconditionError("power needs C,alpha[,scale]");
      out.add(from_power({number(args[0]), number(args[1]), args.size() == 3 ? number(args[2]) : 1.0}));
    } else if (kind == "atoms") {
      std::vector<Atom> atoms;
      for (const auto& a : args) {
        const auto parts = split(a, ':');
        if (parts.size() != 2) throw PreconditionError("atoms need location:weight pairs");
        atoms.push_back({number(parts[0]), number(parts[1])});
      }
      out.add(from_atoms(std::move(atoms)));
    } else {
      throw PreconditionError("measure: unknown kind '" + kind + "'");
    }
  }
  if (out.empty()) throw PreconditionError("measure: empty specification");
  return out;
}

double laplace_of_density(double C, double p, double t) {
  if (!(t > 0.0)) throw PreconditionError("laplace: t must be positive");
  if (!(p > -1.0)) throw PreconditionError("laplace: density exponent must exceed -1");
  return std::tgamma(p + 1.0) * std::exp(-(p + 1.0) * std::log(t) - t * C);
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) throw PreconditionError("log grid: need 0 < lo <= hi");
  const double decades = std::log10(hi / lo);
  const int n = std::max(1, int(std::ceil(decades * per_decade - 1e-9)));
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / n));
  out.front() = lo;
  out.back() = hi;
  return out;
}

ExponentialBound check_exponential_bound(const MonotoneMeasure& nu, double lambda1,
                                         std::span<const double> t_grid) {
  if (!(lambda1 > 0.0)) throw PreconditionError("exponential bound: lambda1 must be positive");
  if (t_grid.empty()) throw PreconditionError("exponential bound: empty t grid");
  ExponentialBound out;
  for (double t : t_grid) {
    if (!(t > 0.0) || t > (1.0 / lambda1) * (1.0 + 1e-12))
      throw PreconditionError("exponential bound: t grid must lie in (0, 1/lambda1]");
    const double denom = nu(1.0 / t);
    if (!(denom > 0.0)) throw PreconditionError("exponential bound: nu(1/t) = 0, lambda1 too small");
    const double ratio = nu.laplace(t) / denom;
    if (ratio > out.L) out = {ratio, t};
  }
  return out;
}

std::vector<double> default_tau_grid() {
  std::vector<double> out;
  for (int k = 1; k <= 4; ++k) {
    out.push_back(1.0 - std::pow(10.0, -k));
    out.push_back(1.0 + std::pow(10.0, -k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

QuotientReport check_uniform_quotient(const MonotoneMeasure& nu, double lambda1,
                                      std::span<const double> tau_grid,
                                      std::span<const double> s_grid) {
  QuotientReport out;
  for (double tau : tau_grid) {
    if (!(tau > 0.0)) throw PreconditionError("quotient: tau must be positive");
    QuotientRow row{tau, 0.0};
    for (double s : s_grid) {
      if (s < lambda1) throw PreconditionError("quotient: s grid must lie in [lambda1, inf)");
      const double base = nu(s);
      if (!(base > 0.0)) throw PreconditionError("quotient: nu(s) = 0");
      row.deviation = std::max(row.deviation, std::abs(nu(tau * s) / base - 1.0));
    }
    out.max_deviation = std::max(out.max_deviation, row.deviation);
    out.rows.push_back(row);
  }
  return out;
}

double beta_at(const MonotoneMeasure& mu, const MonotoneMeasure& nu, double t) {
  const double ln = nu.laplace(t);
  if (!(ln > 0.0)) throw PreconditionError("beta: laplace(nu) vanishes");
  return std::abs(mu.laplace(t) - ln) / ln;
}

std::vector<BetaPoint> beta_profile(const MonotoneMeasure& mu, const MonotoneMeasure& nu,
                                    std::span<const double> t_grid) {
  std::vector<BetaPoint> out;
  for (double t : t_grid) out.push_back({t, beta_at(mu, nu, t)});
  return out;
}

std::string TauberianVerdict::describe() const {
  std::ostringstream os;
  os << "L=" << L_found << " lambda1=" << lambda1 << " epsilon=" << epsilon << " C1=";
  if (conclusion_C1)
    os << *conclusion_C1;
  else
    os << "not found <= " << C1_cap;
  os << " checked=" << points_checked;
  return os.str();
}

TauberianVerdict verify_conclusion(const MonotoneMeasure& mu, const MonotoneMeasure& nu,
                                   double lambda1, double epsilon,
                                   std::span<const double> s_grid, double C1_cap) {
  if (!(lambda1 > 0.0) || !(epsilon > 0.0) || !(C1_cap >= 1.0) || s_grid.empty())
    throw PreconditionError("conclusion: need lambda1 > 0, epsilon > 0, cap >= 1, nonempty s grid");
  TauberianVerdict v;
  v.lambda1 = lambda1;
  v.epsilon = epsilon;
  v.C1_cap = C1_cap;
  const double s_max = *std::max_element(s_grid.begin(), s_grid.end());
  const auto t_grid = log_grid(0.1 / s_max, 1.0 / lambda1);
  v.L_found = check_exponential_bound(nu, lambda1, t_grid).L;
  v.beta_profile = beta_profile(mu, nu, t_grid);

  auto rows_for = [&](double C1, bool& ok) {
    std::vector<ConclusionRow> rows;
    ok = true;
    for (double s : s_grid) {
      if (s < C1 * lambda1) continue;
      ConclusionRow r{s, mu(s), nu(s), 0.0};
      const double b = beta_at(mu, nu, C1 / s);
      r.bound = (epsilon + epsilon * v.L_found + C1 * v.L_found * b) * r.nu;
      if (!(std::abs(r.mu - r.nu) <= r.bound)) ok = false;
      rows.push_back(r);
    }
    if (rows.empty()) ok = false;
    return rows;
  };

  const auto c_grid = log_grid(1.0, C1_cap, 20);
  for (double C1 : c_grid) {
    bool ok = false;
    auto rows = rows_for(C1, ok);
    if (ok) {
      v.conclusion_C1 = C1;
      v.points_checked = rows.size();
      v.rows = std::move(rows);
      return v;
    }
  }
  bool ok = false;
  v.rows = rows_for(C1_cap, ok);
  v.points_checked = v.rows.size();
  return v;
}

}  // namespace weylab
