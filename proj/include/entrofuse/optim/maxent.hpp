#ifndef ENTROFUSE_OPTIM_MAXENT_HPP
#define ENTROFUSE_OPTIM_MAXENT_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "entrofuse/optim/simplex.hpp"

namespace entrofuse::optim {

struct SolverConfig {
  std::size_t max_iterations = 10'000;
  double improvement_tol = 1e-12;
  double certificate_tol = 1e-7;
  double feasibility_tol = 1e-9;
  double ln_floor = 1e-12;
  std::size_t max_halvings = 60;
};

/// Nonnegative weights on the allowed cells of an N-way table whose axis
/// sums must match `marginals`. Forbidden cells are simply not listed.
struct MarginalProblem {
  std::vector<std::vector<double>> marginals;  // [axis][value]
  std::vector<std::vector<std::size_t>> cells; // [cell][axis] -> value index

  std::size_t axes() const { return marginals.size(); }
  /// Row r of the constraint system is (axis, value) in axis-major order.
  std::size_t constraint_rows() const;
  /// The equality system A f = b shared by every LP of the problem.
  LinearProgram constraints() const;
  /// Largest |A f - b| over all axis sums.
  double max_residual(std::span<const double> f) const;
};

struct SolverDiagnostics {
  bool feasible = false;
  bool certified = false;
  std::size_t iterations = 0;
  double phase1_objective = 0.0;
  double objective = 0.0;
  /// Best LP improvement of the linearized objective at the returned point;
  /// an upper bound on the remaining optimality gap.
  double certificate = 0.0;
  double max_marginal_residual = 0.0;
  /// Worst equality residual seen over every accepted iterate.
  double max_iterate_residual = 0.0;
  std::vector<double> objective_trace;
};

struct SolverResult {
  std::vector<double> point;
  SolverDiagnostics diagnostics;
};

/// Phase I only: a feasible vertex, or the phase-I residual as witness.
SolverResult find_feasible_point(const MarginalProblem& problem, const SolverConfig& config = {});

/// Maximizes -sum f ln f by LP-directed gradient projection with step halving.
SolverResult maxent_projected_gradient(const MarginalProblem& problem, const SolverConfig& config = {});

/// Same loop for the quadratic surrogate -sum f^2.
SolverResult quadratic_projected_gradient(const MarginalProblem& problem, const SolverConfig& config = {});

/// -sum f ln f with 0 ln 0 = 0.
double entropy(std::span<const double> f);

}  // namespace entrofuse::optim

#endif  // ENTROFUSE_OPTIM_MAXENT_HPP
