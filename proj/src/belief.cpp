#include "entrofuse/belief.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace entrofuse {

Bba::Bba(AlgebraPtr algebra, std::vector<Focal> focals, bool coherent)
    : algebra_(std::move(algebra)), coherent_(coherent) {
  if (!algebra_) throw std::invalid_argument("bba needs an algebra");
  std::erase_if(focals, [](const Focal& f) { return f.mass == 0.0; });
  std::sort(focals.begin(), focals.end(), [](const Focal& a, const Focal& b) { return a.prop < b.prop; });
  for (std::size_t i = 1; i < focals.size(); ++i)
    if (focals[i].prop == focals[i - 1].prop)
      throw std::invalid_argument("proposition '" + algebra_->label(focals[i].prop) +
                                  "' is assigned mass twice");
  focals_ = std::move(focals);
}

double Bba::mass(const Proposition& p) const {
  auto it = std::lower_bound(focals_.begin(), focals_.end(), p,
                             [](const Focal& f, const Proposition& q) { return f.prop < q; });
  return it != focals_.end() && it->prop == p ? it->mass : 0.0;
}

double Bba::total() const {
  double s = 0.0;
  for (const auto& f : focals_) s += f.mass;
  return s;
}

bool BbaDiagnostics::has(BbaIssue::Kind kind) const {
  return std::any_of(errors.begin(), errors.end(), [&](const BbaIssue& i) { return i.kind == kind; });
}

std::string BbaDiagnostics::summary() const {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += "; ";
    out += e.message;
  }
  return out;
}

BbaDiagnostics validate(const Bba& b, double tolerance) {
  BbaDiagnostics d;
  const auto& alg = b.space();
  for (const auto& f : b.focals()) {
    const bool member = alg.contains(f.prop);
    const std::string name = f.prop.algebra() == alg.id() ? alg.label(f.prop) : "<foreign>";
    if (!member)
      d.errors.push_back({BbaIssue::Kind::UnknownProposition, "proposition " + name + " is not in the lattice"});
    if (f.mass < 0.0 || !std::isfinite(f.mass))
      d.errors.push_back({BbaIssue::Kind::NegativeMass, "mass of " + name + " is negative or not finite"});
    if (b.coherent() && member && f.prop.none())
      d.errors.push_back({BbaIssue::Kind::BottomMass, "coherent bba puts mass on bot"});
  }
  const double total = b.total();
  if (!(std::abs(total - 1.0) <= tolerance)) {
    std::ostringstream os;
    os.precision(12);
    os << "masses sum to " << total << ", expected 1";
    d.errors.push_back({BbaIssue::Kind::NotNormalized, os.str()});
  }
  if (d.errors.empty() && !alg.atoms().empty()) {
    Proposition all = alg.bottom();
    for (std::size_t i = 0; i < alg.atoms().size(); ++i) all |= alg.atom(i);
    if (all != alg.top() && belief(b, all) < 1.0 - tolerance)
      d.warnings.push_back("belief of the join of all atoms is below 1; the atoms are not assumed exhaustive");
  }
  return d;
}

void require_valid(const Bba& b, double tolerance) {
  auto d = validate(b, tolerance);
  if (!d.valid()) throw std::invalid_argument("invalid bba: " + d.summary());
}

Bba renormalized(const Bba& b) {
  const double total = b.total();
  if (!(total > 0.0)) throw std::invalid_argument("cannot renormalize a bba with zero total mass");
  std::vector<Focal> focals(b.focals().begin(), b.focals().end());
  for (auto& f : focals) f.mass /= total;
  return Bba(b.algebra(), std::move(focals), b.coherent());
}

namespace {

void require_member(const Bba& b, const Proposition& phi) {
  if (!b.space().contains(phi)) throw AlgebraError("proposition is not a member of the lattice");
}

}  // namespace

double belief(const Bba& b, const Proposition& phi) {
  require_member(b, phi);
  double s = 0.0;
  for (const auto& f : b.focals())
    if (is_sub(f.prop, phi)) s += f.mass;
  return s;
}

double smets_belief(const Bba& b, const Proposition& phi) {
  require_member(b, phi);
  double s = 0.0;
  for (const auto& f : b.focals())
    if (!f.prop.none() && is_sub(f.prop, phi)) s += f.mass;
  return s;
}

Bba total_ignorance(const AlgebraPtr& algebra) {
  return Bba(algebra, {Focal{algebra->top(), 1.0}}, true);
}

namespace {

double max_belief(std::span<const Bba> sources, const Proposition& phi) {
  double m = 0.0;
  for (const auto& b : sources) m = std::max(m, belief(b, phi));
  return m;
}

}  // namespace

bool enhancement_bound_check(std::span<const Bba> sources, std::span<const Proposition> family) {
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!meet(family[i], family[j]).none())
        throw std::invalid_argument("family members must be pairwise disjoint");
  double sum = 0.0;
  for (const auto& phi : family) sum += max_belief(sources, phi);
  return sum <= 1.0 + 1e-12;
}

bool enhancement_bound_check(const Bba& b1, const Bba& b2, std::span<const Proposition> family) {
  const Bba pair[] = {b1, b2};
  return enhancement_bound_check(pair, family);
}

std::optional<EnhancementViolation> find_enhancement_violation(std::span<const Bba> sources) {
  std::vector<Proposition> cands;
  for (const auto& b : sources)
    for (const auto& f : b.focals())
      if (!f.prop.none()) cands.push_back(f.prop);
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  std::vector<double> weight;
  for (const auto& c : cands) weight.push_back(max_belief(sources, c));

  // Branch and bound for the heaviest pairwise disjoint subfamily.
  std::vector<double> suffix(cands.size() + 1, 0.0);
  for (std::size_t i = cands.size(); i-- > 0;) suffix[i] = suffix[i + 1] + weight[i];

  std::vector<std::size_t> current, best;
  double best_sum = 0.0;
  auto search = [&](auto&& self, std::size_t i, double sum) -> void {
    if (sum > best_sum) {
      best_sum = sum;
      best = current;
    }
    if (i == cands.size() || sum + suffix[i] <= best_sum) return;
    bool disjoint = true;
    for (auto k : current)
      if (!meet(cands[k], cands[i]).none()) {
        disjoint = false;
        break;
      }
    if (disjoint) {
      current.push_back(i);
      self(self, i + 1, sum + weight[i]);
      current.pop_back();
    }
    self(self, i + 1, sum);
  };
  search(search, 0, 0.0);

  if (best_sum <= 1.0 + 1e-12) return std::nullopt;
  EnhancementViolation v;
  for (auto k : best) v.family.push_back(cands[k]);
  v.bound = best_sum;
  return v;
}

}  // namespace entrofuse
