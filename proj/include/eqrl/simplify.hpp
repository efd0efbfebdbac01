#pragma once

#include "eqrl/expr.hpp"
#include "eqrl/poly.hpp"

#include <cstddef>
#include <optional>
#include <random>
#include <string>

namespace eqrl {

using Rng = std::mt19937_64;

struct NormalizeOptions {
  std::string unknown = "x";
  bool expand = false;   // complex or symbolic configurations
  bool cancel = false;   // symbolic configurations
  bool shuffle = true;
  std::size_t budget = 10000;
};

// Automatic evaluation applied whenever a term is rebuilt: flattening,
// numeric folding, like-term and like-base combination, numeric
// coefficients distributed over a single sum, integer powers of products
// and of powers. Operands come out in canonical order.
Expr auto_eval(const Expr& e, Budget& budget);
Expr expand(const Expr& e, Budget& budget);
// Rational normal form over (x, c); terms with non-integer powers are
// returned unchanged.
Expr cancel(const Expr& e, Budget& budget);
Expr collect(const Expr& e, const std::string& var, Budget& budget);
Expr shuffle_operands(const Expr& e, Rng& rng);
// Recursively sorts commutative operands; used for order-insensitive
// comparison.
Expr canonical_sort(const Expr& e);

// Runs the five-stage pipeline. Throws BudgetExceeded or DomainError.
Expr normalize(const Expr& e, const NormalizeOptions& opts, Rng& rng);

struct RationalFunction {
  Poly num;
  Poly den;
};
// nullopt when e is not a rational function of x and c.
std::optional<RationalFunction> to_rational_function(const Expr& e, Budget& budget);
Expr poly_to_expr(const Poly& p, Budget& budget);

enum class SolvedKind { Solved, UnknownEliminated, Unsolved };

struct SolvedStatus {
  SolvedKind kind = SolvedKind::Unsolved;
  Expr solution;  // set for Solved
};

SolvedStatus classify(const Equation& eq, const std::string& unknown = "x");
bool is_linear_in(const Equation& eq, const std::string& var = "x");

// Exact evaluation at x = xv, c = cv; nullopt on division by zero or a
// non-integer power.
std::optional<Number> evaluate(const Expr& e, const Number& xv, const Number& cv);

}  // namespace eqrl
