#pragma once

#include "eqrl/number.hpp"

#include <compare>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace eqrl {

enum class Kind { Number = 0, Unknown = 1, SymConst = 2, Add = 3, Mul = 4, Pow = 5 };

class Node;

// Immutable, shared expression tree. Copies are cheap handles.
class Expr {
 public:
  Expr() = default;

  static Expr number(Number n);
  static Expr unknown(std::string name = "x");
  static Expr symconst(std::string name = "c");
  // Add/Mul flatten nested nodes of the same kind and keep operand order.
  // A single operand is returned unchanged; zero operands are rejected.
  static Expr add(std::vector<Expr> operands);
  static Expr mul(std::vector<Expr> operands);
  static Expr pow(Expr base, Expr exponent);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  const Number& value() const;         // Number nodes only
  const std::string& name() const;     // Unknown/SymConst nodes only
  std::span<const Expr> children() const;
  const Expr& base() const { return children()[0]; }
  const Expr& exponent() const { return children()[1]; }

  bool is_number() const { return kind() == Kind::Number; }
  bool is_number(long v) const { return is_number() && value() == Number(v); }
  bool is_symbol(std::string_view name) const;
  bool contains_symbol(std::string_view name) const;
  // True if the tree contains any Unknown or SymConst.
  bool has_symbols() const;
  std::size_t node_count() const;

  const Node* identity() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Kind kind, std::vector<Expr> children);
  static Expr flatten_nary(Kind kind, std::vector<Expr> operands);

  std::shared_ptr<const Node> node_;
};

class Node {
 public:
  Kind kind;
  Number value;
  std::string name;
  std::vector<Expr> children;
};

// Structural order: node kind, then payload, then children lexicographically.
std::strong_ordering canonical_compare(const Expr& a, const Expr& b);

struct CanonicalLess {
  bool operator()(const Expr& a, const Expr& b) const { return canonical_compare(a, b) < 0; }
};

struct Equation {
  Expr lhs;
  Expr rhs;

  friend bool operator==(const Equation& a, const Equation& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

// Negation and inversion as used by the parser for '-' and '/'.
Expr negate(const Expr& e);
Expr invert(const Expr& e);

}  // namespace eqrl
