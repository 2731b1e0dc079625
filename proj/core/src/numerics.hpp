#pragma once

// Small numerical helpers shared by the implementation files.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "weylab/models.hpp"

namespace weylab::detail {

inline double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

// log(e^a - e^b), -inf when b >= a.
inline double log_sub(double a, double b) {
  if (b == -kInf) return a;
  if (b >= a) return -kInf;
  return a + std::log1p(-std::exp(b - a));
}

// Maximum of f on [lo, hi]: uniform grid, then golden-section search in the
// cell pair around the best sample. Endpoints are always sampled.
inline double grid_golden_max(const std::function<double(double)>& f, double lo, double hi,
                              int grid = 64) {
  if (!(hi > lo)) return f(lo);
  std::vector<double> xs(grid + 1);
  double best = -kInf;
  int arg = 0;
  for (int i = 0; i <= grid; ++i) {
    xs[i] = i == grid ? hi : lo + (hi - lo) * i / grid;
    const double v = f(xs[i]);
    if (v > best) best = v, arg = i;
  }
  double a = xs[std::max(arg - 1, 0)];
  double b = xs[std::min(arg + 1, grid)];
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return std::max({best, fc, fd});
}

inline double grid_golden_min(const std::function<double(double)>& f, double lo, double hi,
                              int grid = 64) {
  return -grid_golden_max([&](double x) { return -f(x); }, lo, hi, grid);
}

}  // namespace weylab::detail
