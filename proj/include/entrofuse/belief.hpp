#ifndef ENTROFUSE_BELIEF_HPP
#define ENTROFUSE_BELIEF_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entrofuse/algebra.hpp"

namespace entrofuse {

inline constexpr double kMassTolerance = 1e-9;

struct Focal {
  Proposition prop;
  double mass = 0.0;
};

/// A basic belief assignment: sparse masses over propositions of one algebra.
/// Coherent assignments (DSmT/DST mode) forbid mass on bottom; TBM-like ones
/// allow it. Construction does not validate, see `validate`.
class Bba {
 public:
  Bba(AlgebraPtr algebra, std::vector<Focal> focals, bool coherent = true);

  const AlgebraPtr& algebra() const { return algebra_; }
  const PreBooleanAlgebra& space() const { return *algebra_; }
  bool coherent() const { return coherent_; }

  /// Focal elements (nonzero masses) ordered like the lattice.
  std::span<const Focal> focals() const { return focals_; }
  double mass(const Proposition& p) const;
  double total() const;

 private:
  AlgebraPtr algebra_;
  std::vector<Focal> focals_;
  bool coherent_;
};

struct BbaIssue {
  enum class Kind { NotNormalized, NegativeMass, BottomMass, UnknownProposition };
  Kind kind;
  std::string message;
};

struct BbaDiagnostics {
  std::vector<BbaIssue> errors;
  std::vector<std::string> warnings;

  bool valid() const { return errors.empty(); }
  bool has(BbaIssue::Kind kind) const;
  std::string summary() const;
};

BbaDiagnostics validate(const Bba& b, double tolerance = kMassTolerance);
/// Throws std::invalid_argument carrying the diagnostics summary when invalid.
void require_valid(const Bba& b, double tolerance = kMassTolerance);

/// Rescales masses to sum to one. Never applied implicitly.
Bba renormalized(const Bba& b);

/// Sum of masses of every sub-proposition of `phi`, bottom included.
double belief(const Bba& b, const Proposition& phi);
/// Same as `belief` but ignores the mass on bottom.
double smets_belief(const Bba& b, const Proposition& phi);

/// The neutral assignment: all mass on top.
Bba total_ignorance(const AlgebraPtr& algebra);

/// Checks sum_i max_k Bel_k(phi_i) <= 1 over a pairwise disjoint family.
/// A false result proves that no conflict-free joint assignment exists.
bool enhancement_bound_check(std::span<const Bba> sources, std::span<const Proposition> family);
bool enhancement_bound_check(const Bba& b1, const Bba& b2, std::span<const Proposition> family);

struct EnhancementViolation {
  std::vector<Proposition> family;
  double bound = 0.0;  // sum of the per-member maxima; exceeds 1
};

/// Searches pairwise disjoint families drawn from the sources' focal
/// elements for the largest enhancement sum. Returns it when it exceeds 1.
std::optional<EnhancementViolation> find_enhancement_violation(std::span<const Bba> sources);

}  // namespace entrofuse

#endif  // ENTROFUSE_BELIEF_HPP
