#include "eqrl/units.hpp"

#include <stdexcept>

namespace eqrl {

namespace {

bool text_is_negative(const Number& n) {
  auto s = n.to_string();
  return !s.empty() && s.front() == '-';
}

// Leading sign that a sum can print as " - " instead of " + ".
bool leads_with_minus(const Expr& e) {
  if (e.is_number()) return text_is_negative(e.value());
  if (e.kind() == Kind::Mul) {
    const auto& first = e.children()[0];
    return first.is_number() && text_is_negative(first.value());
  }
  return false;
}

class Emitter {
 public:
  UnitSequence units;

  void emit(const Expr& e, bool strip_sign = false) {
    switch (e.kind()) {
      case Kind::Number: {
        const Number& v = e.value();
        push({UnitKind::Number, 0, v, strip_sign ? (-v).to_string() : v.to_string(), e});
        return;
      }
      case Kind::Unknown:
        push({UnitKind::Unknown, 0, Number(), e.name(), e});
        return;
      case Kind::SymConst:
        push({UnitKind::SymConst, 0, Number(), e.name(), e});
        return;
      case Kind::Add:
        emit_add(e);
        return;
      case Kind::Mul:
        emit_mul(e, strip_sign);
        return;
      case Kind::Pow:
        emit_pow(e);
        return;
    }
  }

 private:
  void push(Unit u) { units.push_back(std::move(u)); }

  void op(char c, const Expr& anchor, std::string text) {
    push({UnitKind::Operator, c, Number(), std::move(text), anchor});
  }

  void parenthesized(const Expr& e) {
    push({UnitKind::LParen, 0, Number(), "(", e});
    emit(e);
    push({UnitKind::RParen, 0, Number(), ")", e});
  }

  void emit_add(const Expr& e) {
    auto ch = e.children();
    emit(ch[0]);
    for (std::size_t i = 1; i < ch.size(); ++i) {
      bool minus = leads_with_minus(ch[i]);
      op('+', e, minus ? " - " : " + ");
      emit(ch[i], minus);
    }
  }

  void emit_mul(const Expr& e, bool strip_sign) {
    auto ch = e.children();
    // "a - 1*y" prints as "a - y"; the parser reads it back as Mul(-1, y).
    std::size_t start = strip_sign && ch[0].is_number(-1) ? 1 : 0;
    for (std::size_t i = start; i < ch.size(); ++i) {
      if (i > start) op('*', e, "*");
      const auto& f = ch[i];
      if (f.kind() == Kind::Add) {
        parenthesized(f);
      } else {
        emit(f, strip_sign && i == 0);
      }
    }
  }

  void emit_pow(const Expr& e) {
    const auto& b = e.base();
    const auto& x = e.exponent();
    bool base_parens = b.kind() == Kind::Add || b.kind() == Kind::Mul || b.kind() == Kind::Pow ||
                       (b.is_number() && text_is_negative(b.value()));
    if (base_parens) {
      parenthesized(b);
    } else {
      emit(b);
    }
    op('^', e, "^");
    bool exp_parens = x.kind() == Kind::Add || x.kind() == Kind::Mul || x.kind() == Kind::Pow ||
                      (x.is_number() && x.value().is_real() && !x.value().is_integer());
    if (exp_parens) {
      parenthesized(x);
    } else {
      emit(x);
    }
  }
};

}  // namespace

UnitSequence enumerate_units(const Expr& e) {
  Emitter em;
  em.emit(e);
  return std::move(em.units);
}

std::string render_units(const UnitSequence& units) {
  std::string out;
  for (const auto& u : units) out += u.text;
  return out;
}

std::string render_infix(const Expr& e) { return render_units(enumerate_units(e)); }

std::string render_equation(const Equation& eq) {
  return render_infix(eq.lhs) + " = " + render_infix(eq.rhs);
}

Expr subterm_at(const Expr& e, std::size_t n) {
  auto units = enumerate_units(e);
  if (n < 1 || n > units.size()) {
    throw std::out_of_range("unit index " + std::to_string(n) + " outside 1.." +
                            std::to_string(units.size()));
  }
  return units[n - 1].anchor;
}

}  // namespace eqrl
