#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace weylab::detail {

inline double pivmin_for(std::span<const double> offdiag) {
  double m = 1.0;
  for (double b : offdiag) m = std::max(m, b * b);
  return std::numeric_limits<double>::min() * m;
}

// Running LDL^T factorisation of T - lambda I, one row at a time.
struct SturmState {
  double lambda;
  double pivmin;
  double pivot = 1.0;
  std::int64_t negatives = 0;
  bool first = true;

  SturmState(double l, double pm) : lambda(l), pivmin(pm) {}

  // Appends a row with diagonal a and squared coupling b2 to the previous row.
  void push(double a, double b2) {
    double d = first ? a - lambda : (a - lambda) - b2 / pivot;
    first = false;
    if (std::abs(d) < pivmin) d = pivmin;
    negatives += d < 0.0;
    pivot = d;
  }
};

}  // namespace weylab::detail
