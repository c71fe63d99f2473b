#include "entrofuse/algebra.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <numeric>
#include <unordered_set>

namespace entrofuse {

namespace {

std::atomic<AlgebraId> next_algebra_id{1};

void require_same_algebra(const Proposition& a, const Proposition& b) {
  if (a.algebra() != b.algebra() || a.size() != b.size())
    throw AlgebraError("propositions belong to different algebras");
}

}  // namespace

// --- Proposition -----------------------------------------------------------

Proposition::Proposition(AlgebraId algebra, std::size_t bits)
    : algebra_(algebra), bits_(bits), words_((bits + 63) / 64, 0) {}

std::size_t Proposition::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Proposition::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::string Proposition::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  const std::size_t nibbles = std::max<std::size_t>(1, (bits_ + 3) / 4);
  std::string out;
  out.reserve(nibbles);
  for (std::size_t k = nibbles; k-- > 0;) {
    const std::size_t bit = 4 * k;
    unsigned v = bit / 64 < words_.size() ? (words_[bit / 64] >> (bit % 64)) & 0xfu : 0u;
    out.push_back(digits[v]);
  }
  return out;
}

Proposition& Proposition::operator&=(const Proposition& other) {
  require_same_algebra(*this, other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

Proposition& Proposition::operator|=(const Proposition& other) {
  require_same_algebra(*this, other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

std::strong_ordering operator<=>(const Proposition& a, const Proposition& b) {
  if (auto c = a.algebra_ <=> b.algebra_; c != 0) return c;
  if (auto c = a.count() <=> b.count(); c != 0) return c;
  if (auto c = a.words_.size() <=> b.words_.size(); c != 0) return c;
  for (std::size_t w = a.words_.size(); w-- > 0;)
    if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::size_t PropositionHash::operator()(const Proposition& p) const noexcept {
  std::size_t h = std::hash<AlgebraId>{}(p.algebra_);
  for (auto w : p.words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

Proposition meet(const Proposition& lhs, const Proposition& rhs) {
  Proposition out = lhs;
  out &= rhs;
  return out;
}

Proposition join(const Proposition& lhs, const Proposition& rhs) {
  Proposition out = lhs;
  out |= rhs;
  return out;
}

bool is_sub(const Proposition& lhs, const Proposition& rhs) {
  require_same_algebra(lhs, rhs);
  auto a = lhs.words();
  auto b = rhs.words();
  for (std::size_t w = 0; w < a.size(); ++w)
    if ((a[w] & ~b[w]) != 0) return false;
  return true;
}

Constraint parse_constraint(std::string_view text, std::span<const std::string> atoms) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ParseError("constraint needs '='", text.size());
  if (text.find('=', eq + 1) != std::string_view::npos)
    throw ParseError("constraint has more than one '='", text.find('=', eq + 1));
  Constraint c;
  c.lhs = parse_expression(text.substr(0, eq), atoms);
  try {
    c.rhs = parse_expression(text.substr(eq + 1), atoms);
  } catch (const ParseError& e) {
    // Shift the reported offset back into the caller's string.
    std::string msg = e.what();
    msg = msg.substr(0, msg.rfind(" at position "));
    throw ParseError(msg, e.position() + eq + 1);
  }
  return c;
}

// --- PreBooleanAlgebra -----------------------------------------------------

std::shared_ptr<const PreBooleanAlgebra> PreBooleanAlgebra::build(std::vector<std::string> atoms,
                                                                  const ConstraintSet& constraints,
                                                                  BuildOptions options) {
  if (atoms.size() > kMaxAtoms)
    throw AlgebraError("at most " + std::to_string(kMaxAtoms) + " atoms are supported, got " +
                       std::to_string(atoms.size()));
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!is_valid_atom_name(atoms[i])) throw AlgebraError("invalid atom name '" + atoms[i] + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (atoms[i] == atoms[j]) throw AlgebraError("duplicate atom '" + atoms[i] + "'");
  }

  std::shared_ptr<PreBooleanAlgebra> alg(new PreBooleanAlgebra());
  alg->id_ = next_algebra_id.fetch_add(1);
  alg->atoms_ = std::move(atoms);
  const std::size_t n = alg->atoms_.size();
  const std::size_t ambient = std::size_t{1} << n;

  // phi = psi holds exactly on the minterms outside their symmetric difference.
  std::vector<std::uint64_t> keep = evaluate_ambient(Expression::top(), n);
  for (const auto& c : constraints) {
    auto l = evaluate_ambient(c.lhs, n);
    auto r = evaluate_ambient(c.rhs, n);
    for (std::size_t w = 0; w < keep.size(); ++w) keep[w] &= ~(l[w] ^ r[w]);
  }
  for (std::size_t k = 0; k < ambient; ++k)
    if ((keep[k / 64] >> (k % 64)) & 1u) alg->surviving_.push_back(static_cast<std::uint32_t>(k));

  const std::size_t bits = alg->surviving_.size();
  if (bits == 0) alg->warnings_.push_back("constraints are contradictory: top collapses to bot");

  for (std::size_t i = 0; i < n; ++i) {
    Proposition p(alg->id_, bits);
    for (std::size_t j = 0; j < bits; ++j)
      if ((alg->surviving_[j] >> i) & 1u) p.set(j);
    if (p.none() && bits != 0)
      alg->warnings_.push_back("constraints force atom '" + alg->atoms_[i] + "' to bot");
    alg->atom_props_.push_back(std::move(p));
  }

  // Closure of {bot, top, atoms} under meet and join.
  std::vector<Proposition> elems;
  std::unordered_set<Proposition, PropositionHash> seen;
  auto add = [&](Proposition p) {
    if (seen.insert(p).second) {
      if (elems.size() >= options.max_lattice_size)
        throw AlgebraError("lattice exceeds " + std::to_string(options.max_lattice_size) +
                           " elements; reduce the number of atoms or add constraints");
      elems.push_back(std::move(p));
    }
  };
  add(alg->bottom());
  add(alg->top());
  for (const auto& a : alg->atom_props_) add(a);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      add(meet(elems[i], elems[j]));
      add(join(elems[i], elems[j]));
    }
  }
  std::sort(elems.begin(), elems.end());
  alg->lattice_ = std::move(elems);
  for (std::size_t i = 0; i < alg->lattice_.size(); ++i) alg->index_.emplace(alg->lattice_[i], i);

  Proposition common = alg->top();
  bool any = false;
  for (const auto& p : alg->lattice_) {
    if (p.none()) continue;
    common &= p;
    any = true;
  }
  alg->insulated_ = !any || !common.none();
  return alg;
}

std::optional<std::size_t> PreBooleanAlgebra::index_of(const Proposition& p) const {
  if (p.algebra() != id_) return std::nullopt;
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Proposition PreBooleanAlgebra::bottom() const { return Proposition(id_, surviving_.size()); }

Proposition PreBooleanAlgebra::top() const {
  Proposition p(id_, surviving_.size());
  for (std::size_t j = 0; j < surviving_.size(); ++j) p.set(j);
  return p;
}

Proposition PreBooleanAlgebra::atom(std::size_t i) const {
  if (i >= atom_props_.size()) throw AlgebraError("atom index out of range");
  return atom_props_[i];
}

void PreBooleanAlgebra::check_owner(const Proposition& p) const {
  if (p.algebra() != id_ || p.size() != surviving_.size())
    throw AlgebraError("proposition does not belong to this algebra");
}

Proposition PreBooleanAlgebra::evaluate(const Expression& expr) const {
  auto amb = evaluate_ambient(expr, atoms_.size());
  Proposition p(id_, surviving_.size());
  for (std::size_t j = 0; j < surviving_.size(); ++j) {
    const auto k = surviving_[j];
    if ((amb[k / 64] >> (k % 64)) & 1u) p.set(j);
  }
  return p;
}

Proposition PreBooleanAlgebra::parse(std::string_view text) const {
  return evaluate(parse_expression(text, atoms_));
}

Proposition PreBooleanAlgebra::term(std::uint32_t atom_mask) const {
  Proposition p = top();
  for (std::size_t i = 0; i < atom_props_.size(); ++i)
    if ((atom_mask >> i) & 1u) p &= atom_props_[i];
  return p;
}

std::string PreBooleanAlgebra::label(const Proposition& p) const {
  check_owner(p);
  if (p.none()) return "bot";
  if (p == top()) return "top";

  const std::uint32_t masks = std::uint32_t{1} << atoms_.size();
  std::vector<char> fits(masks, 0);
  for (std::uint32_t m = 1; m < masks; ++m) {
    Proposition t = term(m);
    fits[m] = !t.none() && is_sub(t, p);
  }

  struct Term {
    std::uint32_t mask;
    Proposition bits;
    std::string text;
  };
  std::vector<Term> terms;
  for (std::uint32_t m = 1; m < masks; ++m) {
    if (!fits[m]) continue;
    bool minimal = true;
    for (std::uint32_t s = (m - 1) & m; s != 0 && minimal; s = (s - 1) & m)
      if (fits[s]) minimal = false;
    if (!minimal) continue;
    Term t{m, term(m), {}};
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!((m >> i) & 1u)) continue;
      if (!t.text.empty()) t.text += '&';
      t.text += atoms_[i];
    }
    terms.push_back(std::move(t));
  }

  Proposition covered = bottom();
  for (const auto& t : terms) covered |= t.bits;
  if (covered != p) {
    std::string out;
    for (std::size_t j = 0; j < surviving_.size(); ++j) {
      if (!p.test(j)) continue;
      if (!out.empty()) out += '|';
      out += "m" + std::to_string(surviving_[j]);
    }
    return out;
  }

  // Prefer short terms; drop any term already covered by the others.
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    auto pa = std::popcount(a.mask), pb = std::popcount(b.mask);
    return pa != pb ? pa < pb : a.text < b.text;
  });
  for (std::size_t k = terms.size(); k-- > 0;) {
    Proposition rest = bottom();
    for (std::size_t j = 0; j < terms.size(); ++j)
      if (j != k) rest |= terms[j].bits;
    if (rest == p) terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(k));
  }

  std::vector<std::string> parts;
  for (const auto& t : terms)
    parts.push_back(terms.size() > 1 && std::popcount(t.mask) > 1 ? "(" + t.text + ")" : t.text);
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& s : parts) {
    if (!out.empty()) out += '|';
    out += s;
  }
  return out;
}

Proposition PreBooleanAlgebra::from_hex(std::string_view hex) const {
  Proposition p = bottom();
  const std::size_t bits = surviving_.size();
  std::size_t nib = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, ++nib) {
    const char c = *it;
    unsigned v;
    if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A' + 10);
    else throw AlgebraError("invalid hex digit in proposition key");
    for (unsigned b = 0; b < 4; ++b) {
      if (!((v >> b) & 1u)) continue;
      const std::size_t bit = 4 * nib + b;
      if (bit >= bits) throw AlgebraError("proposition key has bits beyond the minterm universe");
      p.set(bit);
    }
  }
  return p;
}

}  // namespace entrofuse
