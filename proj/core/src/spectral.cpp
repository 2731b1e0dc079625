#include "weylab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "numerics.hpp"
#include "sturm.hpp"
#include "weylab/parallel.hpp"

namespace weylab {

namespace {

struct SectorCounts {
  std::vector<std::int64_t> dirichlet;
  std::vector<std::int64_t> neumann;
};

// One sweep over the nodes r_i = i h of [0, X] (X = cells h) for all
// thresholds at once. `even` keeps node 0 with the reflected coupling
// sqrt(2)/h²; otherwise u(0) = 0. The outer end gets both a Dirichlet and
// a Neumann closure, which share every pivot but the last.
template <class Veff>
SectorCounts radial_pass(const Veff& veff, double h, std::int64_t cells, bool even,
                         std::span<const double> thresholds) {
  const double inv_h2 = 1.0 / (h * h);
  const double b2 = inv_h2 * inv_h2;
  std::vector<detail::SturmState> states;
  states.reserve(thresholds.size());
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, 2.0 * b2);
  for (double t : thresholds) states.emplace_back(t, pivmin);
  const std::int64_t start = even ? 0 : 1;
  for (std::int64_t i = start; i < cells; ++i) {
    const double a = 2.0 * inv_h2 + veff(static_cast<double>(i) * h);
    const double coupling = i == start ? 0.0 : (even && i == 1 ? 2.0 * b2 : b2);
    for (auto& s : states) s.push(a, coupling);
  }
  SectorCounts out;
  out.dirichlet.reserve(states.size());
  out.neumann.reserve(states.size());
  const double a_edge = inv_h2 + veff(static_cast<double>(cells) * h);
  const double coupling_edge = cells - 1 == 0 && even ? 2.0 * b2 : b2;
  for (auto& s : states) {
    out.dirichlet.push_back(s.negatives);
    s.push(a_edge, coupling_edge);
    out.neumann.push_back(s.negatives);
  }
  return out;
}

// A 1D radial problem on [0, X]; the counting problem is a weighted sum of
// sector counts at a shared list of thresholds.
struct Sector {
  std::function<double(double)> veff;
  bool even = false;
  std::int64_t multiplicity = 1;
};

struct CountingProblem {
  std::vector<Sector> sectors;
  std::vector<double> thresholds;
  // For each output λ: (threshold index, weight).
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> uses;
};

struct MeshCounts {
  double h = 0.0;
  std::int64_t cells = 0;
  std::vector<SectorCounts> per_sector;
};

MeshCounts count_on_mesh(const CountingProblem& p, double h, std::int64_t cells) {
  MeshCounts m;
  m.h = h;
  m.cells = cells;
  m.per_sector = parallel_map(p.sectors, [&](const Sector& s) {
    return radial_pass(s.veff, h, cells, s.even, p.thresholds);
  });
  return m;
}

std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> combine(
    const CountingProblem& p, const MeshCounts& m) {
  std::vector<std::int64_t> lower(p.uses.size(), 0), upper(p.uses.size(), 0);
  for (std::size_t s = 0; s < p.sectors.size(); ++s) {
    const auto mult = p.sectors[s].multiplicity;
    for (std::size_t i = 0; i < p.uses.size(); ++i) {
      for (auto [t, w] : p.uses[i]) {
        lower[i] += mult * w * m.per_sector[s].dirichlet[t];
        upper[i] += mult * w * m.per_sector[s].neumann[t];
      }
    }
  }
  return {lower, upper};
}

// j-th eigenvalue (0-based) of a sector closure inside [lo, hi].
double sector_eigenvalue(const Sector& s, double h, std::int64_t cells, bool neumann,
                         std::int64_t j, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double t[] = {mid};
    const auto c = radial_pass(s.veff, h, cells, s.even, t);
    ((neumann ? c.neumann[0] : c.dirichlet[0]) > j ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Finite differences converge from below, so an eigenvalue sitting exactly
// on a threshold is counted at every mesh. Eigenvalues near the threshold
// are located at the last two meshes and Richardson extrapolated (O(h²)
// error); values within the extrapolation uncertainty of the threshold are
// treated as equal to it and left out.
void correct_near_threshold(const CountingProblem& p, const MeshCounts& coarse, MeshCounts& fine) {
  const double ratio2 = (fine.h / coarse.h) * (fine.h / coarse.h);
  for (std::size_t s = 0; s < p.sectors.size(); ++s) {
    for (std::size_t t = 0; t < p.thresholds.size(); ++t) {
      const double lam = p.thresholds[t];
      const double w = std::max(1e-6, 4.0 * lam * lam * coarse.h * coarse.h);
      const double window[] = {lam - w, lam + w};
      for (bool neumann : {false, true}) {
        const auto cf = radial_pass(p.sectors[s].veff, fine.h, fine.cells, p.sectors[s].even,
                                    window);
        const auto cc = radial_pass(p.sectors[s].veff, coarse.h, coarse.cells, p.sectors[s].even,
                                    window);
        const auto& f = neumann ? cf.neumann : cf.dirichlet;
        const auto& c = neumann ? cc.neumann : cc.dirichlet;
        if (f[0] != c[0] || f[1] != c[1]) continue;  // indices do not pair up; keep the raw count
        std::int64_t count = f[0];
        for (std::int64_t j = f[0]; j < f[1]; ++j) {
          const double ef = sector_eigenvalue(p.sectors[s], fine.h, fine.cells, neumann, j,
                                              window[0], window[1]);
          const double ec = sector_eigenvalue(p.sectors[s], coarse.h, coarse.cells, neumann, j,
                                              window[0], window[1]);
          const double extrapolated = (ef - ratio2 * ec) / (1.0 - ratio2);
          const double tie = std::max(1e-9 * std::max(1.0, lam), 0.1 * std::abs(ef - ec));
          if (extrapolated < lam - tie) ++count;
        }
        (neumann ? fine.per_sector[s].neumann[t] : fine.per_sector[s].dirichlet[t]) = count;
      }
    }
  }
}

struct Refined {
  std::vector<std::int64_t> lower;
  std::vector<std::int64_t> upper;
  double h = 0.0;
  int rounds = 0;
};

bool close_counts(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                  double rel_tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto diff = std::abs(a[i] - b[i]);
    if (rel_tol == 0.0 ? diff != 0
                       : static_cast<double>(diff) >
                             rel_tol * static_cast<double>(std::max<std::int64_t>(1, b[i])))
      return false;
  }
  return true;
}

std::int64_t cells_for(double X, double h_target, const MeshControl& mesh, const char* who) {
  const auto cells = static_cast<std::int64_t>(std::ceil(X / h_target));
  if (cells > mesh.max_nodes) {
    std::ostringstream msg;
    msg << who << ": mesh needs " << cells << " nodes (limit " << mesh.max_nodes
        << "); lambda outside the feasibility window";
    throw MeshConvergenceError(msg.str());
  }
  return std::max<std::int64_t>(cells, 2);
}

// Halves h until two consecutive rounds agree.
Refined solve(const CountingProblem& p, const MeshControl& mesh, double X, const char* who) {
  mesh.validate();
  MeshCounts prev;
  std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> prev_totals;
  for (int k = 0; k <= mesh.refinement_rounds; ++k) {
    const auto cells = cells_for(X, mesh.h_initial / std::ldexp(1.0, k), mesh, who);
    auto now = count_on_mesh(p, X / double(cells), cells);
    auto totals = combine(p, now);
    if (k > 0 && close_counts(prev_totals.first, totals.first, mesh.rel_tol) &&
        close_counts(prev_totals.second, totals.second, mesh.rel_tol)) {
      if (mesh.rel_tol == 0.0) {
        correct_near_threshold(p, prev, now);
        totals = combine(p, now);
      }
      return {std::move(totals.first), std::move(totals.second), now.h, k};
    }
    prev = std::move(now);
    prev_totals = std::move(totals);
  }
  std::ostringstream msg;
  msg << who << ": counts not stable after " << mesh.refinement_rounds
      << " halvings (last h = " << prev.h << ")";
  throw MeshConvergenceError(msg.str());
}

// Thresholds λ - k² for every circle mode that can contribute (or just λ).
CountingProblem line_problem(const PotentialModel& V, std::span<const double> lambdas,
                             bool circle_modes) {
  CountingProblem p;
  auto veff = [&V](double x) { return V(x); };
  p.sectors = {{veff, true, 1}, {veff, false, 1}};
  p.uses.resize(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    for (int k = 0; k == 0 || (circle_modes && lambdas[i] - double(k) * k > V.minimum()); ++k) {
      p.uses[i].push_back({p.thresholds.size(), k == 0 ? 1 : 2});
      p.thresholds.push_back(lambdas[i] - double(k) * k);
    }
  }
  return p;
}

double max_of(std::span<const double> xs) {
  if (xs.empty()) throw PreconditionError("empty lambda grid");
  return *std::max_element(xs.begin(), xs.end());
}

CountingFunction assemble(std::span<const double> lambdas, const Refined& r, double X,
                          std::string provenance) {
  CountingFunction f;
  f.provenance = std::move(provenance);
  f.rounds = r.rounds;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    f.samples.push_back({lambdas[i], r.lower[i], r.upper[i], r.h, X});
  f.check();
  return f;
}

}  // namespace

void MeshControl::validate() const {
  if (!(h_initial > 0.0)) throw PreconditionError("mesh: h_initial must be positive");
  if (refinement_rounds < 1) throw PreconditionError("mesh: need at least one refinement round");
  if (!(rel_tol >= 0.0)) throw PreconditionError("mesh: rel_tol must be >= 0");
}

void CountingFunction::check() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.lower > s.upper) throw InvariantViolation("counting function: lower > upper");
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (samples[j].lambda < s.lambda &&
          (samples[j].lower > s.lower || samples[j].upper > s.upper))
        throw InvariantViolation("counting function: not monotone in lambda");
    }
  }
}

double agmon_distance(const std::function<double(double)>& V, double mu, double r1, double r2,
                      const QuadratureSettings& settings) {
  if (!(r1 < r2)) throw PreconditionError("agmon_distance: need r1 < r2");
  auto f = [&](double r) {
    const double gap = V(r) - mu;
    return gap > 0.0 ? std::sqrt(gap) : 0.0;
  };
  return integrate(f, r1, r2, settings).value;
}

double agmon_distance(const PotentialModel& V, double mu, double r1, double r2,
                      const QuadratureSettings& settings) {
  if (!(r1 < r2)) throw PreconditionError("agmon_distance: need r1 < r2");
  auto f = [&](double r) {
    const double gap = V(r) - mu;
    return gap > 0.0 ? std::sqrt(gap) : 0.0;
  };
  std::vector<double> pts{r1};
  const double level = V.level_radius(mu);
  for (double b : V.breakpoints())
    if (b > r1 && b < r2) pts.push_back(b);
  if (level > r1 && level < r2) pts.push_back(level);
  pts.push_back(r2);
  std::sort(pts.begin(), pts.end());
  return integrate_pieces(f, pts, settings).value;
}

double truncation_radius(const PotentialModel& V, double lambda, const TruncationRule& rule,
                         double shift) {
  const double level = lambda - shift;
  const double x_level = level > V.minimum() ? V.level_radius(level) : 0.0;
  if (!std::isfinite(x_level) || x_level > rule.max_radius)
    throw PreconditionError("truncation: level radius beyond max_radius; lambda outside the "
                            "feasibility window");
  double base = x_level;
  const double x_margin = V.level_radius(level + rule.margin);
  if (std::isfinite(x_margin) && x_margin <= rule.margin_radius_limit)
    base = std::max(base, x_margin);
  base = std::max(base, 1.0);
  auto agmon = [&](double X) { return X > x_level ? agmon_distance(V, level, x_level, X) : 0.0; };
  if (agmon(base) >= rule.agmon_buffer) return base;
  double step = std::max(1.0, 1e-3 * x_level);
  double lo = base;
  double hi = base + step;
  while (agmon(hi) < rule.agmon_buffer) {
    lo = hi;
    step *= 2.0;
    hi = base + step;
    if (hi > rule.max_radius)
      throw PreconditionError("truncation: Agmon buffer not reached below max_radius");
  }
  for (int it = 0; it < 100 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (agmon(mid) >= rule.agmon_buffer ? hi : lo) = mid;
  }
  return hi;
}

CountingFunction count_line(const PotentialModel& V, std::span<const double> lambdas,
                            const MeshControl& mesh, const TruncationRule& rule) {
  const double X = truncation_radius(V, max_of(lambdas), rule);
  return assemble(lambdas, solve(line_problem(V, lambdas, false), mesh, X, "count_line"), X,
                  "line: Dirichlet/Neumann on [-X, X], even/odd sectors");
}

CountBracket count_line(const PotentialModel& V, double lambda, const MeshControl& mesh,
                        const TruncationRule& rule) {
  const double l[] = {lambda};
  return count_line(V, l, mesh, rule).samples.front();
}

CountingFunction count_cylinder(const PotentialModel& V, std::span<const double> lambdas,
                                const MeshControl& mesh, const TruncationRule& rule) {
  const double X = truncation_radius(V, max_of(lambdas), rule);
  return assemble(lambdas, solve(line_problem(V, lambdas, true), mesh, X, "count_cylinder"), X,
                  "cylinder: sum over circle modes k of line counts at lambda - k^2");
}

CountBracket count_cylinder(const PotentialModel& V, double lambda, const MeshControl& mesh,
                            const TruncationRule& rule) {
  const double l[] = {lambda};
  return count_cylinder(V, l, mesh, rule).samples.front();
}

double h3_channel_potential(const PotentialModel& V, int l, double r) {
  const double s = std::sinh(r);
  return 1.0 + V(r) + (l == 0 ? 0.0 : double(l) * (l + 1) / (s * s));
}

int h3_last_channel(const PotentialModel& V, double lambda, double radius) {
  int last = -1;
  for (int l = 0;; ++l) {
    const double m = detail::grid_golden_min(
        [&](double r) { return h3_channel_potential(V, l, r); }, 1e-6 * radius, radius, 256);
    if (m >= lambda) return last;
    last = l;
    if (l > 10'000'000) throw PreconditionError("h3_last_channel: channel sum does not terminate");
  }
}

CountingFunction count_hyperbolic3(const PotentialModel& V, std::span<const double> lambdas,
                                   const MeshControl& mesh, const TruncationRule& rule) {
  const double lmax = max_of(lambdas);
  const double X = truncation_radius(V, lmax, rule, 1.0);
  const int last = h3_last_channel(V, lmax, X);
  CountingProblem p;
  p.thresholds.assign(lambdas.begin(), lambdas.end());
  for (std::size_t i = 0; i < lambdas.size(); ++i) p.uses.push_back({{i, 1}});
  for (int l = 0; l <= last; ++l) {
    p.sectors.push_back({[&V, l](double r) { return h3_channel_potential(V, l, r); }, false,
                         2 * l + 1});
  }
  if (p.sectors.empty()) {
    Refined none;
    none.lower.assign(lambdas.size(), 0);
    none.upper.assign(lambdas.size(), 0);
    none.h = mesh.h_initial;
    return assemble(lambdas, none, X, "hyperbolic3: no channel below lambda");
  }
  return assemble(lambdas, solve(p, mesh, X, "count_hyperbolic3"), X,
                  "hyperbolic3: sum over l of (2l+1) radial channel counts, u(0) = 0");
}

CountBracket count_hyperbolic3(const PotentialModel& V, double lambda, const MeshControl& mesh,
                               const TruncationRule& rule) {
  const double l[] = {lambda};
  return count_hyperbolic3(V, l, mesh, rule).samples.front();
}

DnSandwich dn_bracket(std::span<const Interval> partition, const PotentialModel& V, double lambda,
                      const MeshControl& mesh, const TruncationRule& rule) {
  if (partition.empty()) throw PreconditionError("dn_bracket: empty partition");
  std::vector<Interval> cells(partition.begin(), partition.end());
  std::sort(cells.begin(), cells.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!(cells[i].hi > cells[i].lo)) throw PreconditionError("dn_bracket: empty cell");
    if (i > 0) {
      const double gap = cells[i].lo - cells[i - 1].hi;
      const double tol = 1e-12 * std::max(1.0, std::abs(cells[i].lo));
      if (gap < -tol) throw PreconditionError("dn_bracket: overlapping intervals");
      if (gap > tol) throw PreconditionError("dn_bracket: intervals must tile the domain");
    }
  }
  auto veff = [&V](double x) { return V(std::abs(x)); };
  DnSandwich out;
  for (const auto& c : cells) {
    std::int64_t prev_d = -1, prev_n = -1;
    bool done = false;
    for (int k = 0; k <= mesh.refinement_rounds && !done; ++k) {
      const double h = mesh.h_initial / std::ldexp(1.0, k);
      const auto D = sturm_count(discretize_1d(veff, c.lo, c.hi, h, BoundaryCondition::Dirichlet), lambda);
      const auto N = sturm_count(discretize_1d(veff, c.lo, c.hi, h, BoundaryCondition::Neumann), lambda);
      if (D == prev_d && N == prev_n) {
        out.dirichlet_sum += D;
        out.neumann_sum += N;
        done = true;
      }
      prev_d = D;
      prev_n = N;
    }
    if (!done) throw MeshConvergenceError("dn_bracket: cell counts not stable");
  }
  out.global = count_line(V, lambda, mesh, rule).lower;
  return out;
}

DenseSpectrum dense_spectrum(const TridiagonalOperator& T) {
  const auto n = T.size();
  if (n == 0) throw PreconditionError("dense_spectrum: empty operator");
  if (n > kDenseLimit)
    throw PreconditionError("dense_spectrum: " + std::to_string(n) +
                            " nodes exceeds the dense limit; use Sturm counts (trace-only mode)");
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(T.diag.data(), Eigen::Index(n));
  Eigen::VectorXd e(Eigen::Index(n > 0 ? n - 1 : 0));
  for (std::size_t i = 0; i + 1 < n; ++i) e[Eigen::Index(i)] = T.offdiag[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense_spectrum: eigensolver failed");
  DenseSpectrum s;
  s.h = T.h;
  s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  s.phi = es.eigenvectors() / std::sqrt(T.h);
  for (std::size_t i = 0; i < n; ++i) s.nodes.push_back(T.node(i));
  return s;
}

double pointwise_counting(const DenseSpectrum& spectrum, double lambda, std::size_t node) {
  if (node >= spectrum.nodes.size()) throw PreconditionError("pointwise_counting: bad node");
  double e = 0.0;
  for (std::size_t j = 0; j < spectrum.size() && spectrum.eigenvalues[j] < lambda; ++j) {
    const double p = spectrum.phi(Eigen::Index(node), Eigen::Index(j));
    e += p * p;
  }
  return e;
}

namespace {

// Agmon distance (energy λ) from the allowed set {v <= λ} to every node,
// by trapezoid sweeps in both directions.
std::vector<double> agmon_on_nodes(const std::vector<double>& v, double h, double lambda) {
  const std::size_t n = v.size();
  auto w = [&](std::size_t i) { return v[i] > lambda ? std::sqrt(v[i] - lambda) : 0.0; };
  std::vector<double> fwd(n, kInf), bwd(n, kInf), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] <= lambda) fwd[i] = 0.0;
    else if (i > 0 && std::isfinite(fwd[i - 1])) fwd[i] = fwd[i - 1] + 0.5 * h * (w(i - 1) + w(i));
  }
  for (std::size_t k = n; k-- > 0;) {
    if (v[k] <= lambda) bwd[k] = 0.0;
    else if (k + 1 < n && std::isfinite(bwd[k + 1])) bwd[k] = bwd[k + 1] + 0.5 * h * (w(k + 1) + w(k));
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(fwd[i], bwd[i]);
  return out;
}

AgmonTail tail_for_buffer(const DenseSpectrum& s, std::size_t j, const std::vector<double>& v,
                          const std::vector<double>& rho, double lambda, double buffer,
                          double c_exponent, double beta) {
  AgmonTail t;
  t.buffer = buffer;
  double total = 0.0, tail = 0.0;
  t.rho_min = kInf;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double p = s.phi(Eigen::Index(i), Eigen::Index(j));
    const double m = s.h * p * p;
    total += m;
    if (v[i] > lambda + buffer) {
      tail += m;
      t.rho_min = std::min(t.rho_min, rho[i]);
    }
  }
  t.tail_mass = tail / total;
  t.shape = std::pow(lambda, 1.0 + c_exponent) * std::exp(-2.0 * beta * t.rho_min);
  return t;
}

}  // namespace

AgmonTail agmon_tail_mass(const DenseSpectrum& spectrum, std::size_t j,
                          const std::function<double(double)>& v_eff, double lambda,
                          double c_exponent, double beta) {
  if (j >= spectrum.size()) throw PreconditionError("agmon_tail_mass: bad eigenpair index");
  if (!(spectrum.eigenvalues[j] < lambda))
    throw PreconditionError("agmon_tail_mass: eigenvalue must lie below lambda");
  std::vector<double> v;
  for (double x : spectrum.nodes) v.push_back(v_eff(x));
  const auto rho = agmon_on_nodes(v, spectrum.h, lambda);
  return tail_for_buffer(spectrum, j, v, rho, lambda, std::pow(lambda, -c_exponent), c_exponent,
                         beta);
}

AgmonSweep agmon_decay_sweep(const DenseSpectrum& spectrum, std::size_t j,
                             const std::function<double(double)>& v_eff, double lambda,
                             std::span<const double> buffers, double c_exponent, double beta) {
  if (j >= spectrum.size()) throw PreconditionError("agmon_decay_sweep: bad eigenpair index");
  if (!(spectrum.eigenvalues[j] < lambda))
    throw PreconditionError("agmon_decay_sweep: eigenvalue must lie below lambda");
  if (buffers.size() < 2) throw PreconditionError("agmon_decay_sweep: need two buffers");
  std::vector<double> v;
  for (double x : spectrum.nodes) v.push_back(v_eff(x));
  const auto rho = agmon_on_nodes(v, spectrum.h, lambda);
  AgmonSweep out;
  for (double b : buffers)
    out.rows.push_back(tail_for_buffer(spectrum, j, v, rho, lambda, b, c_exponent, beta));
  out.C = out.rows.front().tail_mass / out.rows.front().shape;
  out.bound_holds = true;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& r : out.rows) {
    if (r.tail_mass > out.C * r.shape * (1.0 + 1e-9)) out.bound_holds = false;
    if (r.tail_mass > 0.0 && std::isfinite(r.rho_min)) {
      const double y = std::log(r.tail_mass);
      sx += r.rho_min, sy += y, sxx += r.rho_min * r.rho_min, sxy += r.rho_min * y;
      ++m;
    }
  }
  out.slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx)
                     : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace weylab
