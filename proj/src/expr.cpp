#include "eqrl/expr.hpp"

#include <algorithm>
#include <stdexcept>

namespace eqrl {

Expr Expr::number(Number n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Number;
  node->value = std::move(n);
  return Expr(std::move(node));
}

Expr Expr::unknown(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Unknown;
  node->name = std::move(name);
  return Expr(std::move(node));
}

Expr Expr::symconst(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::SymConst;
  node->name = std::move(name);
  return Expr(std::move(node));
}

Expr Expr::make(Kind kind, std::vector<Expr> children) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->children = std::move(children);
  return Expr(std::move(node));
}

Expr Expr::flatten_nary(Kind kind, std::vector<Expr> operands) {
  if (operands.empty()) throw std::invalid_argument("n-ary node needs operands");
  std::vector<Expr> flat;
  flat.reserve(operands.size());
  for (auto& op : operands) {
    if (!op.valid()) throw std::invalid_argument("null operand");
    if (op.kind() == kind) {
      for (const auto& c : op.children()) flat.push_back(c);
    } else {
      flat.push_back(std::move(op));
    }
  }
  if (flat.size() == 1) return flat.front();
  return make(kind, std::move(flat));
}

Expr Expr::add(std::vector<Expr> operands) { return flatten_nary(Kind::Add, std::move(operands)); }
Expr Expr::mul(std::vector<Expr> operands) { return flatten_nary(Kind::Mul, std::move(operands)); }

Expr Expr::pow(Expr base, Expr exponent) {
  if (!base.valid() || !exponent.valid()) throw std::invalid_argument("null operand");
  return make(Kind::Pow, {std::move(base), std::move(exponent)});
}

Kind Expr::kind() const { return node_->kind; }

const Number& Expr::value() const {
  if (node_->kind != Kind::Number) throw std::logic_error("value() on non-number");
  return node_->value;
}

const std::string& Expr::name() const { return node_->name; }

std::span<const Expr> Expr::children() const { return node_->children; }

bool Expr::is_symbol(std::string_view name) const {
  auto k = kind();
  return (k == Kind::Unknown || k == Kind::SymConst) && node_->name == name;
}

bool Expr::contains_symbol(std::string_view name) const {
  if (is_symbol(name)) return true;
  for (const auto& c : node_->children) {
    if (c.contains_symbol(name)) return true;
  }
  return false;
}

bool Expr::has_symbols() const {
  auto k = kind();
  if (k == Kind::Unknown || k == Kind::SymConst) return true;
  for (const auto& c : node_->children) {
    if (c.has_symbols()) return true;
  }
  return false;
}

std::size_t Expr::node_count() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.node_count();
  return n;
}

std::strong_ordering canonical_compare(const Expr& a, const Expr& b) {
  if (a.identity() == b.identity()) return std::strong_ordering::equal;
  if (auto c = static_cast<int>(a.kind()) <=> static_cast<int>(b.kind()); c != 0) return c;
  switch (a.kind()) {
    case Kind::Number:
      return a.value() <=> b.value();
    case Kind::Unknown:
    case Kind::SymConst:
      return a.name() <=> b.name();
    default:
      break;
  }
  auto ac = a.children();
  auto bc = b.children();
  std::size_t n = std::min(ac.size(), bc.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = canonical_compare(ac[i], bc[i]); c != 0) return c;
  }
  return ac.size() <=> bc.size();
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.identity() == b.identity()) return true;
  if (!a.valid() || !b.valid()) return false;
  return canonical_compare(a, b) == 0;
}

Expr negate(const Expr& e) {
  if (e.is_number()) return Expr::number(-e.value());
  if (e.kind() == Kind::Mul && e.children()[0].is_number()) {
    std::vector<Expr> ops(e.children().begin(), e.children().end());
    ops[0] = Expr::number(-ops[0].value());
    return Expr::mul(std::move(ops));
  }
  return Expr::mul({Expr::number(-1), e});
}

Expr invert(const Expr& e) {
  if (e.is_number()) return Expr::number(e.value().reciprocal());
  return Expr::pow(e, Expr::number(-1));
}

}  // namespace eqrl
