#include "weylab/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace weylab {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

// ln(sinh x) without overflow.
double log_sinh(double x) {
  if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
  return std::log(std::sinh(x));
}

// ln(sinh x - x), accurate for small and very large x.
double log_sinh_minus_x(double x) {
  if (x <= 0.0) return -kInf;
  if (x < 0.5) {
    // x^3/3! + x^5/5! + ...
    const double x2 = x * x;
    double term = x * x2 / 6.0;
    double sum = term;
    for (int k = 2; k < 30; ++k) {
      term *= x2 / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return std::log(sum);
  }
  if (x < 30.0) return std::log(std::sinh(x) - x);
  return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x) - 2.0 * x * std::exp(-x));
}

// exp applied k times to x.
double exp_tower(int k, double x) {
  for (int i = 0; i < k; ++i) x = std::exp(x);
  return x;
}

}  // namespace

double CurvatureBounds::combined() const {
  return R + std::cbrt(S * S) + std::sqrt(T);
}

double unit_ball_volume(int n) {
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

GeometryModel GeometryModel::line() { return {GeometryKind::Line, 1}; }

GeometryModel GeometryModel::euclidean(int n) {
  if (n < 1) throw PreconditionError("euclidean geometry needs dimension n >= 1");
  return {GeometryKind::EuclideanRadial, n};
}

GeometryModel GeometryModel::cylinder() { return {GeometryKind::Cylinder, 2}; }

GeometryModel GeometryModel::hyperbolic3() { return {GeometryKind::Hyperbolic3, 3}; }

double GeometryModel::spectral_floor() const {
  if (kind_ == GeometryKind::Hyperbolic3) return 0.25 * (dim_ - 1) * (dim_ - 1);
  return 0.0;
}

double GeometryModel::volume_weight(double r) const {
  if (!(r > 0.0)) throw PreconditionError("volume_weight: radius must be positive");
  switch (kind_) {
    case GeometryKind::Line:
      return 2.0;
    case GeometryKind::Cylinder:
      return 4.0 * kPi;
    case GeometryKind::EuclideanRadial:
      return dim_ * unit_ball_volume(dim_) * std::pow(r, dim_ - 1);
    case GeometryKind::Hyperbolic3: {
      const double s = std::sinh(r);
      return 4.0 * kPi * s * s;
    }
  }
  return 0.0;
}

double GeometryModel::log_volume_weight(double r) const {
  if (!(r > 0.0)) throw PreconditionError("log_volume_weight: radius must be positive");
  switch (kind_) {
    case GeometryKind::Line:
      return std::log(2.0);
    case GeometryKind::Cylinder:
      return std::log(4.0 * kPi);
    case GeometryKind::EuclideanRadial:
      return std::log(dim_ * unit_ball_volume(dim_)) + (dim_ - 1) * std::log(r);
    case GeometryKind::Hyperbolic3:
      return std::log(4.0 * kPi) + 2.0 * log_sinh(r);
  }
  return -kInf;
}

double GeometryModel::log_volume_weight_at_log_radius(double u) const {
  switch (kind_) {
    case GeometryKind::Line:
      return std::log(2.0);
    case GeometryKind::Cylinder:
      return std::log(4.0 * kPi);
    case GeometryKind::EuclideanRadial:
      return std::log(dim_ * unit_ball_volume(dim_)) + (dim_ - 1) * u;
    case GeometryKind::Hyperbolic3:
      return log_volume_weight(std::exp(u));
  }
  return -kInf;
}

double GeometryModel::ball_volume(double rho) const {
  return std::exp(log_ball_volume(rho));
}

double GeometryModel::log_ball_volume(double rho) const {
  if (rho < 0.0) throw PreconditionError("log_ball_volume: negative radius");
  if (rho == 0.0) return -kInf;
  if (kind_ == GeometryKind::Hyperbolic3) return std::log(kPi) + log_sinh_minus_x(2.0 * rho);
  return log_ball_volume_at_log_radius(std::log(rho));
}

double GeometryModel::log_ball_volume_at_log_radius(double u) const {
  switch (kind_) {
    case GeometryKind::Line:
      return std::log(2.0) + u;
    case GeometryKind::Cylinder:
      return std::log(4.0 * kPi) + u;
    case GeometryKind::EuclideanRadial:
      return std::log(unit_ball_volume(dim_)) + dim_ * u;
    case GeometryKind::Hyperbolic3:
      return log_ball_volume(std::exp(u));
  }
  return -kInf;
}

double GeometryModel::injectivity_radius() const {
  return kind_ == GeometryKind::Cylinder ? kPi : kInf;
}

CurvatureBounds GeometryModel::curvature_bounds(RadialInterval region) const {
  if (region.hi < region.lo) throw PreconditionError("curvature_bounds: empty region");
  if (kind_ == GeometryKind::Hyperbolic3) return {1.0, 0.0, 0.0};
  return {};
}

std::string GeometryModel::name() const {
  switch (kind_) {
    case GeometryKind::Line:
      return "line";
    case GeometryKind::EuclideanRadial:
      return "euclidean:" + std::to_string(dim_);
    case GeometryKind::Cylinder:
      return "cylinder";
    case GeometryKind::Hyperbolic3:
      return "hyperbolic3";
  }
  return "?";
}

// ---------------------------------------------------------------------------

PotentialModel PotentialModel::power(double alpha, double floor) {
  if (!(alpha > 0.0)) throw PreconditionError("power potential needs alpha > 0");
  PotentialModel v;
  v.family_ = PotentialFamily::Power;
  v.alpha_ = alpha;
  v.floor_ = floor;
  return v;
}

PotentialModel PotentialModel::log_power(double c, double alpha, double floor) {
  if (!(c > 0.0) || !(alpha > 0.0))
    throw PreconditionError("log-power potential needs c > 0 and alpha > 0");
  PotentialModel v;
  v.family_ = PotentialFamily::LogPower;
  v.c_ = c;
  v.alpha_ = alpha;
  v.floor_ = floor;
  return v;
}

PotentialModel PotentialModel::iterated_log(int depth, double floor) {
  if (depth < 1 || depth > 3) throw PreconditionError("iterated-log depth must be in [1, 3]");
  PotentialModel v;
  v.family_ = PotentialFamily::IteratedLog;
  v.depth_ = depth;
  v.floor_ = floor;
  return v;
}

PotentialModel PotentialModel::piecewise(std::vector<PiecewiseNode> table, double floor) {
  if (table.size() < 2) throw PreconditionError("piecewise potential needs at least two nodes");
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].r > table[i - 1].r))
      throw PreconditionError("piecewise potential radii must be strictly increasing");
  }
  if (table.front().r < 0.0) throw PreconditionError("piecewise potential radii must be >= 0");
  const auto& a = table[table.size() - 2];
  const auto& b = table.back();
  if (!(b.value > a.value))
    throw PreconditionError("piecewise potential must increase on its last segment (confinement)");
  PotentialModel v;
  v.family_ = PotentialFamily::Piecewise;
  v.floor_ = floor;
  v.monotone_ = std::is_sorted(table.begin(), table.end(),
                               [](const auto& x, const auto& y) { return x.value < y.value; });
  v.table_ = std::move(table);
  return v;
}

PotentialModel PotentialModel::piecewise_from_file(const std::filesystem::path& path,
                                                   double floor) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open piecewise potential table " + path.string());
  std::vector<PiecewiseNode> nodes;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    PiecewiseNode node;
    if (row >> node.r >> node.value) nodes.push_back(node);
  }
  return piecewise(std::move(nodes), floor);
}

double PotentialModel::piecewise_raw(double r) const {
  const auto& t = table_;
  if (r <= t.front().r) return t.front().value;
  if (r >= t.back().r) {
    const auto& a = t[t.size() - 2];
    const auto& b = t.back();
    return b.value + (b.value - a.value) / (b.r - a.r) * (r - b.r);
  }
  auto it = std::upper_bound(t.begin(), t.end(), r,
                             [](double x, const PiecewiseNode& n) { return x < n.r; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  return a.value + (b.value - a.value) * (r - a.r) / (b.r - a.r);
}

double PotentialModel::closed_form(double r) const {
  switch (family_) {
    case PotentialFamily::Power:
      return std::pow(r, alpha_);
    case PotentialFamily::LogPower:
      return c_ * std::pow(std::log(std::max(r, kE)), alpha_);
    case PotentialFamily::IteratedLog: {
      double x = std::max(r, exp_tower(depth_, 1.0));
      for (int i = 0; i < depth_; ++i) x = std::log(x);
      return x;
    }
    case PotentialFamily::Piecewise:
      return piecewise_raw(r);
  }
  return 0.0;
}

double PotentialModel::operator()(double r) const {
  return std::max(floor_, closed_form(r));
}

double PotentialModel::at_log_radius_unclamped(double u) const {
  switch (family_) {
    case PotentialFamily::Power:
      return std::exp(alpha_ * u);
    case PotentialFamily::LogPower:
      return c_ * std::pow(std::max(u, 1.0), alpha_);
    case PotentialFamily::IteratedLog: {
      double x = std::max(u, exp_tower(depth_ - 1, 1.0));
      for (int i = 1; i < depth_; ++i) x = std::log(x);
      return x;
    }
    case PotentialFamily::Piecewise:
      return piecewise_raw(std::exp(u));
  }
  return 0.0;
}

double PotentialModel::at_log_radius(double u) const {
  return std::max(floor_, at_log_radius_unclamped(u));
}

double PotentialModel::minimum() const {
  switch (family_) {
    case PotentialFamily::Power:
      return std::max(floor_, 0.0);
    case PotentialFamily::LogPower:
      return std::max(floor_, c_);
    case PotentialFamily::IteratedLog:
      return std::max(floor_, 1.0);
    case PotentialFamily::Piecewise: {
      double m = kInf;
      for (const auto& n : table_) m = std::min(m, n.value);
      return std::max(floor_, m);
    }
  }
  return floor_;
}

double PotentialModel::smoothing_radius() const {
  switch (family_) {
    case PotentialFamily::Power:
      return floor_ > 0.0 ? std::pow(floor_, 1.0 / alpha_) : 0.0;
    case PotentialFamily::LogPower:
      return std::max(kE, floor_ > c_ ? std::exp(std::pow(floor_ / c_, 1.0 / alpha_)) : kE);
    case PotentialFamily::IteratedLog:
      return std::max(exp_tower(depth_, 1.0), floor_ > 1.0 ? exp_tower(depth_, floor_) : 0.0);
    case PotentialFamily::Piecewise:
      return 0.0;
  }
  return 0.0;
}

std::vector<double> PotentialModel::breakpoints() const {
  std::vector<double> out;
  switch (family_) {
    case PotentialFamily::Power:
      if (floor_ > 0.0) out.push_back(std::pow(floor_, 1.0 / alpha_));
      break;
    case PotentialFamily::LogPower:
      out.push_back(kE);
      if (floor_ > c_) out.push_back(std::exp(std::pow(floor_ / c_, 1.0 / alpha_)));
      break;
    case PotentialFamily::IteratedLog:
      out.push_back(exp_tower(depth_, 1.0));
      if (floor_ > 1.0) out.push_back(exp_tower(depth_, floor_));
      break;
    case PotentialFamily::Piecewise:
      for (const auto& n : table_) out.push_back(n.r);
      break;
  }
  std::erase_if(out, [](double r) { return !(r > 0.0) || !std::isfinite(r); });
  std::sort(out.begin(), out.end());
  return out;
}

double PotentialModel::log_level_radius(double level) const {
  if (level <= minimum()) return -kInf;
  switch (family_) {
    case PotentialFamily::Power:
      return std::log(level) / alpha_;
    case PotentialFamily::LogPower:
      return std::pow(level / c_, 1.0 / alpha_);
    case PotentialFamily::IteratedLog:
      return exp_tower(depth_ - 1, level);
    case PotentialFamily::Piecewise: {
      auto spans = sublevel(level);
      return spans.empty() ? -kInf : spans.back().log_hi;
    }
  }
  return -kInf;
}

double PotentialModel::level_radius(double level) const {
  return std::exp(log_level_radius(level));
}

std::vector<RadialSpan> PotentialModel::sublevel(double level) const {
  std::vector<RadialSpan> spans;
  if (level <= floor_ || level <= minimum()) return spans;
  if (family_ != PotentialFamily::Piecewise) {
    const double u = log_level_radius(level);
    spans.push_back({0.0, std::exp(u), u});
    return spans;
  }
  // Walk the linear pieces of the table and collect {raw < level}.
  auto push = [&](double lo, double hi) {
    if (!(hi > lo)) return;
    if (!spans.empty() && spans.back().hi >= lo) {
      spans.back().hi = std::max(spans.back().hi, hi);
    } else {
      spans.push_back({lo, hi, 0.0});
    }
  };
  const auto& t = table_;
  if (t.front().value < level) push(0.0, t.front().r);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double a = t[i].value;
    const double b = t[i + 1].value;
    const double ra = t[i].r;
    const double rb = t[i + 1].r;
    if (a < level && b < level) {
      push(ra, rb);
    } else if (a < level) {
      push(ra, ra + (level - a) / (b - a) * (rb - ra));
    } else if (b < level) {
      push(ra + (level - a) / (b - a) * (rb - ra), rb);
    }
  }
  {
    const auto& a = t[t.size() - 2];
    const auto& b = t.back();
    if (b.value < level) push(b.r, b.r + (level - b.value) / ((b.value - a.value) / (b.r - a.r)));
  }
  for (auto& s : spans) s.log_hi = std::log(s.hi);
  return spans;
}

std::string PotentialModel::name() const {
  std::ostringstream os;
  os.precision(12);
  switch (family_) {
    case PotentialFamily::Power:
      os << "power:" << alpha_;
      break;
    case PotentialFamily::LogPower:
      os << "logpow:" << c_ << ":" << alpha_;
      break;
    case PotentialFamily::IteratedLog:
      os << "iterlog:" << depth_;
      break;
    case PotentialFamily::Piecewise:
      os << "piecewise[" << table_.size() << "]";
      break;
  }
  if (floor_ != 1.0) os << "@floor=" << floor_;
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

void check_ball(const GeometryModel& geometry, double ball_radius) {
  if (ball_radius < 0.0) throw PreconditionError("oscillation: negative ball radius");
  if (ball_radius >= geometry.injectivity_radius())
    throw PreconditionError("oscillation: ball radius must be below the injectivity radius");
}

// Extremes of V over the radius range [lo, hi].
double range_oscillation(const PotentialModel& V, double lo, double hi) {
  if (V.monotone()) return V(hi) - V(lo);
  double vmax = std::max(V(lo), V(hi));
  double vmin = std::min(V(lo), V(hi));
  for (double r : V.breakpoints()) {
    if (r > lo && r < hi) {
      vmax = std::max(vmax, V(r));
      vmin = std::min(vmin, V(r));
    }
  }
  return vmax - vmin;
}

}  // namespace

double oscillation(const PotentialModel& V, const GeometryModel& geometry, double center,
                   double ball_radius) {
  check_ball(geometry, ball_radius);
  if (center < 0.0) throw PreconditionError("oscillation: negative centre radius");
  if (ball_radius == 0.0) return 0.0;
  return range_oscillation(V, std::max(0.0, center - ball_radius), center + ball_radius);
}

double oscillation_at_log_center(const PotentialModel& V, const GeometryModel& geometry,
                                 double log_center, double ball_radius) {
  check_ball(geometry, ball_radius);
  if (ball_radius == 0.0) return 0.0;
  if (!V.monotone() || log_center < 30.0)
    return oscillation(V, geometry, std::exp(log_center), ball_radius);
  // Centre far out: step in log-radius so nothing overflows.
  const double x = ball_radius * std::exp(-log_center);
  return V.at_log_radius(log_center + std::log1p(x)) - V.at_log_radius(log_center + std::log1p(-x));
}

}  // namespace weylab
