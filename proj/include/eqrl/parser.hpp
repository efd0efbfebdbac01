#pragma once

#include "eqrl/expr.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eqrl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        message_(what),
        position_(position) {}
  const std::string& message() const { return message_; }
  // 1-based character offset; input length + 1 means end of input.
  std::size_t position() const { return position_; }

 private:
  std::string message_;
  std::size_t position_;
};

// Grammar: integers, "p/q" literals, I, x, c, binary + - * / ^, unary minus,
// parentheses. '-' and '/' become Add/Mul with negated/inverted operands and
// subtrees made only of numbers are folded to a single Number.
Expr parse_expression(std::string_view text);
Equation parse_equation(std::string_view text);

}  // namespace eqrl
