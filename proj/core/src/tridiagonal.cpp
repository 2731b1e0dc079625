#include "weylab/tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sturm.hpp"
#include "weylab/models.hpp"

namespace weylab {

double TridiagonalOperator::node(std::size_t i) const {
  const double offset = bc == BoundaryCondition::Dirichlet ? 1.0 : 0.0;
  return x_lo + (static_cast<double>(i) + offset) * h;
}

TridiagonalOperator discretize_1d(const std::function<double(double)>& v_eff, double x_lo,
                                  double x_hi, double h, BoundaryCondition bc,
                                  std::string description) {
  if (!(h > 0.0)) throw PreconditionError("discretize_1d: h must be positive");
  const double length = x_hi - x_lo;
  if (!(length > 0.0)) throw PreconditionError("discretize_1d: degenerate interval");
  const auto cells = static_cast<std::size_t>(std::ceil(length / h - 1e-9));
  if (cells < 2) throw PreconditionError("discretize_1d: interval shorter than 2 h");
  TridiagonalOperator T;
  T.h = length / static_cast<double>(cells);
  T.bc = bc;
  T.x_lo = x_lo;
  T.x_hi = x_hi;
  T.effective_potential = std::move(description);
  const double inv_h2 = 1.0 / (T.h * T.h);
  const std::size_t first = bc == BoundaryCondition::Dirichlet ? 1 : 0;
  const std::size_t last = bc == BoundaryCondition::Dirichlet ? cells - 1 : cells;
  for (std::size_t i = first; i <= last; ++i) {
    const double x = i == cells ? x_hi : x_lo + static_cast<double>(i) * T.h;
    const bool edge = bc == BoundaryCondition::Neumann && (i == 0 || i == cells);
    T.diag.push_back((edge ? 1.0 : 2.0) * inv_h2 + v_eff(x));
  }
  T.offdiag.assign(T.diag.size() - 1, -inv_h2);
  return T;
}

std::int64_t sturm_count(std::span<const double> diag, std::span<const double> offdiag,
                         double lambda) {
  if (diag.empty()) return 0;
  if (offdiag.size() + 1 != diag.size())
    throw PreconditionError("sturm_count: offdiag must have size n - 1");
  detail::SturmState s(lambda, detail::pivmin_for(offdiag));
  s.push(diag[0], 0.0);
  for (std::size_t i = 1; i < diag.size(); ++i) s.push(diag[i], offdiag[i - 1] * offdiag[i - 1]);
  return s.negatives;
}

std::int64_t sturm_count(const TridiagonalOperator& T, double lambda) {
  return sturm_count(T.diag, T.offdiag, lambda);
}

std::vector<std::int64_t> sturm_counts(const TridiagonalOperator& T,
                                       std::span<const double> lambdas) {
  std::vector<std::int64_t> out(lambdas.size(), 0);
  if (T.diag.empty()) return out;
  const double pivmin = detail::pivmin_for(T.offdiag);
  std::vector<detail::SturmState> states;
  states.reserve(lambdas.size());
  for (double l : lambdas) states.emplace_back(l, pivmin);
  for (std::size_t i = 0; i < T.diag.size(); ++i) {
    const double b2 = i == 0 ? 0.0 : T.offdiag[i - 1] * T.offdiag[i - 1];
    for (auto& s : states) s.push(T.diag[i], b2);
  }
  for (std::size_t k = 0; k < states.size(); ++k) out[k] = states[k].negatives;
  return out;
}

}  // namespace weylab
