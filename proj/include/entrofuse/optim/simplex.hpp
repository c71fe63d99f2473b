#ifndef ENTROFUSE_OPTIM_SIMPLEX_HPP
#define ENTROFUSE_OPTIM_SIMPLEX_HPP

#include <cstddef>
#include <vector>

namespace entrofuse::optim {

/// maximize  objective . x
/// s.t.      equalities * x = rhs,  x >= lower_bounds
/// Columns flagged in `fixed` are pinned to their lower bound.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> equalities;
  std::vector<double> rhs;
  std::vector<double> lower_bounds;  // empty means all zero
  std::vector<bool> fixed;           // empty means none

  std::size_t columns() const { return objective.size(); }
  std::size_t rows() const { return rhs.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOptions {
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-11;
  double cost_tol = 1e-12;
  std::size_t max_pivots = 1'000'000;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> point;
  double value = 0.0;
  /// Row prices y with reduced costs c_j - y . A_j <= 0 at optimality.
  std::vector<double> duals;
  /// Sum of artificial variables left after phase I; the infeasibility witness.
  double phase1_objective = 0.0;
  std::size_t pivots = 0;
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
LpResult lp_solve(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace entrofuse::optim

#endif  // ENTROFUSE_OPTIM_SIMPLEX_HPP
