#include "weylab/heatkernel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace weylab {

namespace {

// log sinh(d) for d > 0.
double log_sinh(double d) {
  if (d > 20.0) return d - std::log(2.0) + std::log1p(-std::exp(-2.0 * d));
  return std::log(std::sinh(d));
}

// d / sinh d
double d_over_sinh(double d) {
  if (d < 1e-4) {
    const double d2 = d * d;
    return 1.0 - d2 / 6.0 + 7.0 * d2 * d2 / 360.0;
  }
  if (d > 700.0) return std::exp(std::log(d) - log_sinh(d));
  return d / std::sinh(d);
}

}  // namespace

double parametrix_diagonal(double v, int n, double t) {
  if (!(t > 0.0)) throw PreconditionError("parametrix: t must be positive");
  if (n < 1) throw PreconditionError("parametrix: dimension must be >= 1");
  return std::pow(4.0 * kPi * t, -0.5 * n) * std::exp(-t * v);
}

double parametrix_diagonal(const PotentialModel& V, int n, double t, double x) {
  return parametrix_diagonal(V(x), n, t);
}

double exact_h3_kernel(double t, double d) {
  if (!(t > 0.0) || !(d >= 0.0)) throw PreconditionError("h3 kernel: need t > 0, d >= 0");
  if (d > 50.0) return std::exp(log_exact_h3_kernel(t, d));
  return std::exp(-t) * std::pow(4.0 * kPi * t, -1.5) * d_over_sinh(d) * std::exp(-d * d / (4.0 * t));
}

double log_exact_h3_kernel(double t, double d) {
  if (!(t > 0.0) || !(d >= 0.0)) throw PreconditionError("h3 kernel: need t > 0, d >= 0");
  const double ratio = d < 1e-4 ? std::log(d_over_sinh(d)) : std::log(d) - log_sinh(d);
  return -t - 1.5 * std::log(4.0 * kPi * t) + ratio - d * d / (4.0 * t);
}

QuadratureResult h3_kernel_mass(double t, const QuadratureSettings& settings) {
  if (!(t > 0.0)) throw PreconditionError("h3 kernel mass: t must be positive");
  // The radial density peaks near d = 2t and has Gaussian width ~ sqrt(t).
  const double top = 2.0 * t + 40.0 * std::sqrt(t) + 40.0;
  auto f = [t](double d) {
    if (d <= 0.0) return 0.0;
    const double log_area = std::log(4.0 * kPi) + 2.0 * log_sinh(d);
    return std::exp(log_exact_h3_kernel(t, d) + log_area);
  };
  const double peak = 2.0 * t;
  std::vector<double> pts{0.0};
  if (peak > 0.0 && peak < top) pts.push_back(peak);
  pts.push_back(top);
  return integrate_pieces(f, pts, settings);
}

double spectral_kernel_diagonal(const DenseSpectrum& spectrum, double t, std::size_t node) {
  if (!(t > 0.0)) throw PreconditionError("spectral kernel: t must be positive");
  if (node >= spectrum.nodes.size()) throw PreconditionError("spectral kernel: bad node");
  if (spectrum.size() == 0) return 0.0;
  const double lead = spectrum.eigenvalues.front();
  double sum = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double w = std::exp(-t * (spectrum.eigenvalues[j] - lead));
    if (w < 1e-16) break;
    const double p = spectrum.phi(Eigen::Index(node), Eigen::Index(j));
    sum += w * p * p;
  }
  return sum * std::exp(-t * lead);
}

double heat_trace(const DenseSpectrum& spectrum, double t) {
  double sum = 0.0;
  for (double l : spectrum.eigenvalues) sum += std::exp(-t * l);
  return sum;
}

std::vector<Lemma21Row> lemma21_check(const DenseSpectrum& spectrum,
                                      std::span<const double> lambdas, std::size_t node) {
  std::vector<Lemma21Row> rows;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw PreconditionError("lemma21: lambda must be positive");
    Lemma21Row r;
    r.lambda = lambda;
    r.node = node;
    r.counting = pointwise_counting(spectrum, lambda, node);
    r.bound = std::exp(1.0) * spectral_kernel_diagonal(spectrum, 1.0 / lambda, node);
    rows.push_back(r);
  }
  return rows;
}

std::vector<Lemma21Row> lemma21_check(const DenseSpectrum& spectrum,
                                      std::span<const double> lambdas) {
  std::vector<Lemma21Row> rows;
  for (std::size_t i = 0; i < spectrum.nodes.size(); ++i) {
    auto part = lemma21_check(spectrum, lambdas, i);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

SineGalerkin::SineGalerkin(const std::function<double(double)>& V, double a, double b, int modes)
    : a_(a), b_(b), modes_(modes) {
  if (!(b > a)) throw PreconditionError("sine basis: need a < b");
  if (modes < 2) throw PreconditionError("sine basis: need at least two modes");
  const double len = b - a;
  // c_m = (1/len) ∫_a^b V(x) cos(mπ(x-a)/len) dx for m = 0..2 modes.
  const int top = 2 * modes;
  std::vector<double> c(top + 1, 0.0);
  const int panels = 8 * top + 64;
  using rule = boost::math::quadrature::gauss<double, 20>;
  for (int p = 0; p < panels; ++p) {
    const double lo = double(p) / panels;
    const double hi = double(p + 1) / panels;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    const auto& abscissa = rule::abscissa();
    const auto& weights = rule::weights();
    for (std::size_t q = 0; q < abscissa.size(); ++q) {
      for (int sign : {-1, 1}) {
        if (abscissa[q] == 0.0 && sign < 0) continue;
        const double s = mid + sign * half * abscissa[q];
        const double w = half * weights[q] * V(a + s * len);
        for (int m = 0; m <= top; ++m) c[m] += w * std::cos(m * kPi * s);
      }
    }
  }
  // 2 sin(jπs) sin(kπs) = cos((j-k)πs) - cos((j+k)πs)
  Eigen::MatrixXd H(modes, modes);
  for (int j = 1; j <= modes; ++j) {
    for (int k = 1; k <= modes; ++k) {
      H(j - 1, k - 1) = c[std::abs(j - k)] - c[j + k];
      if (j == k) H(j - 1, k - 1) += (j * kPi / len) * (j * kPi / len);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw std::runtime_error("sine basis: eigensolver failed");
  eigenvalues_.assign(es.eigenvalues().data(), es.eigenvalues().data() + modes);
  vectors_ = es.eigenvectors();
}

double SineGalerkin::kernel_diagonal(double t, double x) const {
  if (!(t > 0.0)) throw PreconditionError("kernel: t must be positive");
  const double len = b_ - a_;
  const double s = (x - a_) / len;
  Eigen::VectorXd basis(modes_);
  for (int k = 1; k <= modes_; ++k) basis[k - 1] = std::sqrt(2.0 / len) * std::sin(k * kPi * s);
  const Eigen::VectorXd values = vectors_.transpose() * basis;
  double sum = 0.0;
  const double lead = eigenvalues_.front();
  for (int j = 0; j < modes_; ++j) {
    const double w = std::exp(-t * (eigenvalues_[j] - lead));
    if (w < 1e-18) break;
    sum += w * values[j] * values[j];
  }
  return sum * std::exp(-t * lead);
}

std::vector<RemainderPoint> parametrix_defects(const SineGalerkin& reference,
                                               const std::function<double(double)>& V, double x,
                                               std::span<const double> t_grid) {
  std::vector<RemainderPoint> out;
  const double vx = V(x);
  for (double t : t_grid) {
    RemainderPoint p;
    p.t = t;
    p.kernel = reference.kernel_diagonal(t, x);
    p.parametrix = parametrix_diagonal(vx, 1, t);
    p.defect = std::abs(p.kernel - p.parametrix);
    // Below ~100 ulp of the kernel the difference is rounding noise.
    p.dropped = !(p.defect > 100.0 * std::numeric_limits<double>::epsilon() * p.kernel);
    out.push_back(p);
  }
  return out;
}

RemainderFit remainder_scaling_fit(const std::function<double(double)>& V, double a, double b,
                                   double x, std::span<const double> t_grid,
                                   const RemainderOptions& options) {
  const double eps0 = options.eps0;
  if (!(eps0 > 0.0)) throw PreconditionError("remainder: eps0 must be positive");
  if (x - a < eps0 || b - x < eps0)
    throw PreconditionError("remainder: x must lie at distance >= eps0 from the boundary");
  const double t_max = std::min(1.0, eps0 * eps0 * eps0);
  for (double t : t_grid)
    if (!(t > 0.0 && t < t_max))
      throw PreconditionError("remainder: every t must lie in (0, min(1, eps0^3))");
  const SineGalerkin reference(V, a, b, options.modes);
  RemainderFit fit;
  fit.points = parametrix_defects(reference, V, x, t_grid);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  const double scale = std::max(1.0, options.sup_v);
  for (const auto& p : fit.points) {
    if (p.dropped) continue;
    const double lx = std::log(p.t), ly = std::log(p.defect);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    ++m;
    fit.bound_constant = std::max(fit.bound_constant, p.defect / (std::sqrt(p.t) * scale));
  }
  if (m < 5) throw PreconditionError("remainder: fewer than 5 points above rounding level");
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

}  // namespace weylab
