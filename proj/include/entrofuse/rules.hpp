#ifndef ENTROFUSE_RULES_HPP
#define ENTROFUSE_RULES_HPP

#include <stdexcept>
#include <vector>

#include "entrofuse/belief.hpp"

namespace entrofuse {

class FusionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Product of two bbas pushed forward through meet. `mu` keeps the mass that
/// lands on bottom; `conflict` is that mass.
struct ConjunctiveImage {
  Bba mu;
  double conflict = 0.0;
};

/// A nonnegative, normalized reallocation of the conflict over non-bottom
/// propositions.
class Redistribution {
 public:
  Redistribution(AlgebraPtr algebra, std::vector<Focal> rho);

  /// All conflict goes to top.
  static Redistribution to_top(const AlgebraPtr& algebra);
  /// Conflict shared in proportion to the conjunctive masses off bottom.
  static Redistribution proportional(const ConjunctiveImage& image);

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<Focal>& weights() const { return rho_; }

 private:
  AlgebraPtr algebra_;
  std::vector<Focal> rho_;
};

ConjunctiveImage conjunctive(const Bba& b1, const Bba& b2);

/// TBM combination: the conjunctive image kept as a (possibly incoherent) bba.
Bba tbm_fuse(const Bba& b1, const Bba& b2);

/// Conjunctive fusion on algebras with the insulation property. Throws
/// FusionError when the algebra can generate bottom from non-bottom members.
Bba free_dsmt_fuse(const Bba& b1, const Bba& b2);

Bba redistribute(const ConjunctiveImage& image, const Redistribution& rho);

/// Dempster's rule: mu / (1 - conflict) off bottom. Throws on total conflict.
Bba dempster_fuse(const Bba& b1, const Bba& b2);

}  // namespace entrofuse

#endif  // ENTROFUSE_RULES_HPP
