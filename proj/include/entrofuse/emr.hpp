#ifndef ENTROFUSE_EMR_HPP
#define ENTROFUSE_EMR_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "entrofuse/belief.hpp"
#include "entrofuse/optim/maxent.hpp"
#include "entrofuse/rules.hpp"

namespace entrofuse {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Joint weights over tuples of focal elements, one axis per source.
struct JointAssignment {
  std::vector<std::vector<Proposition>> sources;  // focal elements per axis
  std::vector<std::vector<double>> marginals;     // their masses
  std::vector<std::vector<std::size_t>> cells;    // allowed tuples (meet is not bot)
  std::vector<double> values;                     // weight per allowed tuple
  std::vector<std::vector<std::size_t>> forbidden;

  /// Weight of an arbitrary tuple; zero when it is forbidden or absent.
  double value(std::span<const std::size_t> tuple) const;
  std::vector<double> axis_sums(std::size_t axis) const;
  double max_marginal_residual() const;
  Proposition meet_of(std::size_t cell) const;

  optim::MarginalProblem problem() const;
};

struct FusionDiagnostics {
  double entropy = 0.0;
  double objective = 0.0;
  std::size_t iterations = 0;
  double max_marginal_residual = 0.0;
  double optimality_certificate = 0.0;
  bool certified = false;
  double phase1_objective = 0.0;
};

struct Rejection {
  double phase1_residual = 0.0;
  std::optional<EnhancementViolation> violation;
};

struct FusionOutcome {
  std::variant<Bba, Rejection> result;
  FusionDiagnostics diagnostics;
  std::optional<JointAssignment> joint;

  bool fused() const { return std::holds_alternative<Bba>(result); }
  const Bba& bba() const { return std::get<Bba>(result); }
  const Rejection& rejection() const { return std::get<Rejection>(result); }
};

struct EmrOptions {
  optim::SolverConfig solver;
  std::size_t max_cells = 10'000'000;
};

struct FeasibilityReport {
  bool feasible = false;
  double phase1_residual = 0.0;
  std::optional<EnhancementViolation> violation;
};

/// Allowed and forbidden cells for the given sources. Throws ResourceError
/// when the full tuple count exceeds `max_cells`.
JointAssignment build_joint(std::span<const Bba> sources, std::size_t max_cells = 10'000'000);

/// Conflict-free fusion by maximum-entropy joint assignment. Rejects when no
/// joint assignment reproduces the marginals without touching conflicting
/// tuples.
FusionOutcome emr_fuse(const Bba& b1, const Bba& b2, const EmrOptions& options = {});
FusionOutcome emr_fuse_n(std::span<const Bba> sources, const EmrOptions& options = {});
/// Quadratic surrogate -sum f^2 in place of the entropy.
FusionOutcome emr_fuse_approx(const Bba& b1, const Bba& b2, const EmrOptions& options = {});

FeasibilityReport emr_feasible(std::span<const Bba> sources, const EmrOptions& options = {});

/// Fused masses m(phi) = sum of joint weights over tuples meeting at phi.
Bba fused_masses(const AlgebraPtr& algebra, const JointAssignment& joint);

// --- independent oracles -------------------------------------------------

/// Two-source family over the powerset of {a,b,c}: m1 on a, c, top and
/// m2 on b, c, top.
struct ZadehFamily {
  double alpha1 = 0.0;
  double gamma1 = 0.0;
  double beta2 = 0.0;
  double gamma2 = 0.0;
};

/// Powerset algebra of {a,b,c} as a constrained pre-Boolean algebra.
AlgebraPtr powerset_abc();
std::pair<Bba, Bba> zadeh_family_sources(const AlgebraPtr& powerset, const ZadehFamily& params);

struct ZadehSolution {
  bool feasible = false;
  double theta = 0.0;  // weight on the (c, c) tuple
  double a = 0.0, b = 0.0, c = 0.0, top = 0.0;
};

/// Closed form solution for the family, no optimization involved.
ZadehSolution zadeh_family_solution(const ZadehFamily& params);
FusionOutcome zadeh_family_oracle(const AlgebraPtr& powerset, const ZadehFamily& params);

struct IpfResult {
  JointAssignment joint;
  bool converged = false;
  std::size_t sweeps = 0;
  double max_residual = 0.0;
};

/// Iterative proportional fitting from the uniform table on allowed cells.
IpfResult ipf_oracle(std::span<const Bba> sources, double tolerance = 1e-10, std::size_t max_sweeps = 100'000);

}  // namespace entrofuse

#endif  // ENTROFUSE_EMR_HPP
