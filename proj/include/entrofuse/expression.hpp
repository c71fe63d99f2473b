#ifndef ENTROFUSE_EXPRESSION_HPP
#define ENTROFUSE_EXPRESSION_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace entrofuse {

/// Syntax or name-resolution failure. `position()` is a 0-based byte offset
/// into the parsed text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Negation-free formula over atoms:
///   expr := term ('|' term)* ; term := factor ('&' factor)* ;
///   factor := atom | 'bot' | 'top' | '(' expr ')'
struct Expression {
  enum class Kind { Atom, Bottom, Top, Meet, Join };

  Kind kind = Kind::Bottom;
  std::size_t atom = 0;
  std::vector<Expression> operands;

  static Expression make_atom(std::size_t index) { return {Kind::Atom, index, {}}; }
  static Expression bottom() { return {Kind::Bottom, 0, {}}; }
  static Expression top() { return {Kind::Top, 0, {}}; }
};

bool is_valid_atom_name(std::string_view name);

Expression parse_expression(std::string_view text, std::span<const std::string> atoms);

/// Evaluates over the 2^n ambient minterms; bit k is set when the formula is
/// true under the assignment encoded by k.
std::vector<std::uint64_t> evaluate_ambient(const Expression& expr, std::size_t atom_count);

}  // namespace entrofuse

#endif  // ENTROFUSE_EXPRESSION_HPP
