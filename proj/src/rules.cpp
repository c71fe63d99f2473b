#include "entrofuse/rules.hpp"

#include <cmath>
#include <map>

namespace entrofuse {

namespace {

void require_same_space(const Bba& b1, const Bba& b2) {
  if (b1.algebra() != b2.algebra()) throw AlgebraError("bbas are defined over different algebras");
}

std::vector<Focal> to_focals(const std::map<Proposition, double>& acc) {
  std::vector<Focal> out;
  out.reserve(acc.size());
  for (const auto& [p, m] : acc) out.push_back({p, m});
  return out;
}

}  // namespace

Redistribution::Redistribution(AlgebraPtr algebra, std::vector<Focal> rho)
    : algebra_(std::move(algebra)), rho_(std::move(rho)) {
  double total = 0.0;
  for (const auto& r : rho_) {
    if (!algebra_->contains(r.prop)) throw std::invalid_argument("redistribution target is not in the lattice");
    if (r.prop.none() && r.mass != 0.0) throw std::invalid_argument("redistribution must not target bot");
    if (r.mass < 0.0) throw std::invalid_argument("negative redistribution weights are not supported");
    total += r.mass;
  }
  if (std::abs(total - 1.0) > kMassTolerance) throw std::invalid_argument("redistribution weights must sum to 1");
}

Redistribution Redistribution::to_top(const AlgebraPtr& algebra) {
  return Redistribution(algebra, {Focal{algebra->top(), 1.0}});
}

Redistribution Redistribution::proportional(const ConjunctiveImage& image) {
  const double kept = 1.0 - image.conflict;
  if (!(kept > 0.0)) throw FusionError("total conflict: nothing to redistribute proportionally");
  std::vector<Focal> rho;
  for (const auto& f : image.mu.focals())
    if (!f.prop.none()) rho.push_back({f.prop, f.mass / kept});
  return Redistribution(image.mu.algebra(), std::move(rho));
}

ConjunctiveImage conjunctive(const Bba& b1, const Bba& b2) {
  require_same_space(b1, b2);
  std::map<Proposition, double> acc;
  for (const auto& f1 : b1.focals())
    for (const auto& f2 : b2.focals()) acc[meet(f1.prop, f2.prop)] += f1.mass * f2.mass;
  const Proposition bot = b1.space().bottom();
  auto it = acc.find(bot);
  const double conflict = it == acc.end() ? 0.0 : it->second;
  return {Bba(b1.algebra(), to_focals(acc), false), conflict};
}

Bba tbm_fuse(const Bba& b1, const Bba& b2) { return conjunctive(b1, b2).mu; }

Bba free_dsmt_fuse(const Bba& b1, const Bba& b2) {
  require_same_space(b1, b2);
  if (!b1.space().insulated())
    throw FusionError("algebra lacks the insulation property; use the emr, tbm or dempster rule instead");
  if (!b1.coherent() || !b2.coherent()) throw FusionError("free DSmT fusion needs coherent bbas");
  auto image = conjunctive(b1, b2);
  std::vector<Focal> focals(image.mu.focals().begin(), image.mu.focals().end());
  return Bba(b1.algebra(), std::move(focals), true);
}

Bba redistribute(const ConjunctiveImage& image, const Redistribution& rho) {
  if (image.mu.algebra() != rho.algebra()) throw AlgebraError("redistribution uses a different algebra");
  std::map<Proposition, double> acc;
  for (const auto& f : image.mu.focals())
    if (!f.prop.none()) acc[f.prop] += f.mass;
  for (const auto& r : rho.weights())
    if (r.mass != 0.0) acc[r.prop] += r.mass * image.conflict;
  Bba out(image.mu.algebra(), to_focals(acc), true);
  if (std::abs(out.total() - 1.0) > kMassTolerance)
    throw std::logic_error("redistributed masses do not sum to 1");
  return out;
}

Bba dempster_fuse(const Bba& b1, const Bba& b2) {
  auto image = conjunctive(b1, b2);
  const double kept = 1.0 - image.conflict;
  if (!(kept > 0.0)) throw FusionError("total conflict: Dempster's rule is undefined");
  std::vector<Focal> focals;
  for (const auto& f : image.mu.focals())
    if (!f.prop.none()) focals.push_back({f.prop, f.mass / kept});
  return Bba(b1.algebra(), std::move(focals), true);
}

}  // namespace entrofuse
