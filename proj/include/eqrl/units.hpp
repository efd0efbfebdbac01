#pragma once

#include "eqrl/expr.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace eqrl {

enum class UnitKind { Operator, LParen, RParen, Unknown, SymConst, Number };

// One infix token of a rendered term.
//
// `text` is exactly what the renderer prints for this token, so joining the
// texts of a sequence reproduces render_infix(). For the '+' of a sum whose
// next operand carries a negative sign, the text is " - " and the following
// number unit prints its magnitude while `value` keeps the signed number.
struct Unit {
  UnitKind kind;
  char op = 0;        // '+', '*', '^' for operators
  Number value;       // number units
  std::string text;
  Expr anchor;        // leaf for atoms, whole node for operators and parens
};

using UnitSequence = std::vector<Unit>;

UnitSequence enumerate_units(const Expr& e);
std::string render_infix(const Expr& e);
std::string render_units(const UnitSequence& units);
std::string render_equation(const Equation& eq);

// 1-based index into enumerate_units(e). Throws std::out_of_range.
Expr subterm_at(const Expr& e, std::size_t n);

}  // namespace eqrl
