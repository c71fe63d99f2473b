#ifndef ENTROFUSE_ALGEBRA_HPP
#define ENTROFUSE_ALGEBRA_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entrofuse/expression.hpp"

namespace entrofuse {

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Identifies the algebra a proposition belongs to. Zero means "detached".
using AlgebraId = std::uint64_t;

/// An element of a constrained Boolean algebra, stored as the set of
/// surviving minterms it covers. Bit i refers to the i-th surviving minterm
/// of the owning algebra, not to the ambient minterm numbering.
class Proposition {
 public:
  Proposition() = default;
  Proposition(AlgebraId algebra, std::size_t bits);

  AlgebraId algebra() const { return algebra_; }
  std::size_t size() const { return bits_; }

  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

  std::size_t count() const;
  bool none() const;
  std::span<const std::uint64_t> words() const { return words_; }

  /// Hex dump of the bitset, most significant word first.
  std::string hex() const;

  Proposition& operator&=(const Proposition& other);
  Proposition& operator|=(const Proposition& other);

  friend bool operator==(const Proposition&, const Proposition&) = default;
  /// Orders by cardinality first, then by bit pattern. Bottom sorts first.
  friend std::strong_ordering operator<=>(const Proposition& a, const Proposition& b);

 private:
  friend struct PropositionHash;
  AlgebraId algebra_ = 0;
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct PropositionHash {
  std::size_t operator()(const Proposition& p) const noexcept;
};

Proposition meet(const Proposition& lhs, const Proposition& rhs);
Proposition join(const Proposition& lhs, const Proposition& rhs);
/// lhs is a sub-proposition of rhs (lhs ∧ rhs = lhs).
bool is_sub(const Proposition& lhs, const Proposition& rhs);

struct Constraint {
  Expression lhs;
  Expression rhs;
};
using ConstraintSet = std::vector<Constraint>;

/// Parses "expr = expr" against the given atom names.
Constraint parse_constraint(std::string_view text, std::span<const std::string> atoms);

struct BuildOptions {
  std::size_t max_lattice_size = 100'000;
};

inline constexpr std::size_t kMaxAtoms = 12;

/// The pre-Boolean algebra generated by a set of atoms under a set of
/// equational constraints. Immutable once built; share it through
/// `std::shared_ptr<const PreBooleanAlgebra>`.
class PreBooleanAlgebra {
 public:
  static std::shared_ptr<const PreBooleanAlgebra> build(std::vector<std::string> atoms,
                                                        const ConstraintSet& constraints,
                                                        BuildOptions options = {});

  AlgebraId id() const { return id_; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  /// Ambient minterm ids kept after constraint propagation; bit k of an id
  /// is the truth value of atom k.
  const std::vector<std::uint32_t>& surviving() const { return surviving_; }
  /// Lattice members, sorted by (cardinality, bit pattern). Bottom is first
  /// and top is last.
  const std::vector<Proposition>& lattice() const { return lattice_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::optional<std::size_t> index_of(const Proposition& p) const;
  bool contains(const Proposition& p) const { return index_of(p).has_value(); }

  Proposition bottom() const;
  Proposition top() const;
  Proposition atom(std::size_t i) const;

  /// No two non-bottom members meet to bottom.
  bool insulated() const { return insulated_; }

  Proposition parse(std::string_view text) const;
  Proposition evaluate(const Expression& expr) const;

  /// Negation-free disjunctive normal form of `p`, terms sorted
  /// lexicographically, `bot`/`top` for the bounds. Falls back to minterm
  /// names (m<ambient id>) for bitsets that no negation-free formula reaches.
  std::string label(const Proposition& p) const;

  /// Rebuilds a proposition from the hex form produced by Proposition::hex.
  Proposition from_hex(std::string_view hex) const;

 private:
  PreBooleanAlgebra() = default;
  void check_owner(const Proposition& p) const;
  Proposition term(std::uint32_t atom_mask) const;

  AlgebraId id_ = 0;
  std::vector<std::string> atoms_;
  std::vector<std::uint32_t> surviving_;
  std::vector<Proposition> lattice_;
  std::unordered_map<Proposition, std::size_t, PropositionHash> index_;
  std::vector<Proposition> atom_props_;
  std::vector<std::string> warnings_;
  bool insulated_ = false;
};

using AlgebraPtr = std::shared_ptr<const PreBooleanAlgebra>;

}  // namespace entrofuse

#endif  // ENTROFUSE_ALGEBRA_HPP
