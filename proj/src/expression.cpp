#include "entrofuse/expression.hpp"

#include <algorithm>
#include <cctype>

namespace entrofuse {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)),
      position_(position) {}

bool is_valid_atom_name(std::string_view name) {
  if (name.empty() || name == "bot" || name == "top") return false;
  auto head = static_cast<unsigned char>(name.front());
  if (!std::isalpha(head) && head != '_') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> atoms) : text_(text), atoms_(atoms) {}

  Expression run() {
    Expression e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression expr() {
    Expression first = term();
    if (!accept('|')) return first;
    Expression node{Expression::Kind::Join, 0, {}};
    node.operands.push_back(std::move(first));
    do {
      node.operands.push_back(term());
    } while (accept('|'));
    return node;
  }

  Expression term() {
    Expression first = factor();
    if (!accept('&')) return first;
    Expression node{Expression::Kind::Meet, 0, {}};
    node.operands.push_back(std::move(first));
    do {
      node.operands.push_back(factor());
    } while (accept('&'));
    return node;
  }

  Expression factor() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      Expression inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    std::string_view word = text_.substr(start, pos_ - start);
    if (word == "bot") return Expression::bottom();
    if (word == "top") return Expression::top();
    auto it = std::find(atoms_.begin(), atoms_.end(), word);
    if (it == atoms_.end()) {
      pos_ = start;
      fail("unknown atom '" + std::string(word) + "'");
    }
    return Expression::make_atom(static_cast<std::size_t>(it - atoms_.begin()));
  }

  std::string_view text_;
  std::span<const std::string> atoms_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text, std::span<const std::string> atoms) {
  return Parser(text, atoms).run();
}

std::vector<std::uint64_t> evaluate_ambient(const Expression& expr, std::size_t atom_count) {
  const std::size_t bits = std::size_t{1} << atom_count;
  const std::size_t words = (bits + 63) / 64;
  const std::uint64_t tail_mask = bits % 64 == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << (bits % 64)) - 1;

  std::vector<std::uint64_t> out(words, 0);
  switch (expr.kind) {
    case Expression::Kind::Bottom:
      break;
    case Expression::Kind::Top:
      std::fill(out.begin(), out.end(), ~std::uint64_t{0});
      out.back() &= tail_mask;
      break;
    case Expression::Kind::Atom:
      if (expr.atom >= atom_count) throw std::out_of_range("atom index out of range");
      for (std::size_t k = 0; k < bits; ++k)
        if ((k >> expr.atom) & 1u) out[k / 64] |= std::uint64_t{1} << (k % 64);
      break;
    case Expression::Kind::Meet:
      std::fill(out.begin(), out.end(), ~std::uint64_t{0});
      out.back() &= tail_mask;
      for (const auto& op : expr.operands) {
        auto v = evaluate_ambient(op, atom_count);
        for (std::size_t w = 0; w < words; ++w) out[w] &= v[w];
      }
      break;
    case Expression::Kind::Join:
      for (const auto& op : expr.operands) {
        auto v = evaluate_ambient(op, atom_count);
        for (std::size_t w = 0; w < words; ++w) out[w] |= v[w];
      }
      break;
  }
  return out;
}

}  // namespace entrofuse
