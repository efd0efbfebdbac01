#include "eqrl/simplify.hpp"

#include <algorithm>
#include <map>

namespace eqrl {

namespace {

Expr num(const Number& n) { return Expr::number(n); }
Expr num(long v) { return Expr::number(Number(v)); }

bool is_gaussian_unit(const Number& n) {
  if (n.is_real()) return n.re() == 1 || n.re() == -1;
  return sgn(n.re()) == 0 && (n.im() == 1 || n.im() == -1);
}

Number pow_number(const Number& base, const Number& exponent, Budget& budget) {
  const mpz_class& e = exponent.re().get_num();
  if (base.is_zero()) {
    if (sgn(e) < 0) throw DomainError("zero to a negative power");
    return Number(sgn(e) == 0 ? 1 : 0);
  }
  if (is_gaussian_unit(base)) {
    mpz_class r = e % 4;
    if (r < 0) r += 4;
    return base.pow(r.get_si());
  }
  if (!e.fits_slong_p()) throw BudgetExceeded();
  long n = e.get_si();
  unsigned long mag = n < 0 ? 0UL - static_cast<unsigned long>(n) : static_cast<unsigned long>(n);
  budget.charge(mag * std::max<std::size_t>(1, base.bit_size()) / 64 + 1);
  return base.pow(n);
}

void sort_canonical(std::vector<Expr>& v) { std::stable_sort(v.begin(), v.end(), CanonicalLess{}); }

Expr s_add(std::vector<Expr> ops, Budget& budget);
Expr s_mul(std::vector<Expr> ops, Budget& budget);
Expr s_pow(const Expr& base, const Expr& exponent, Budget& budget);

// Splits a product into its numeric coefficient and the remaining factors
// in canonical order.
std::pair<Number, Expr> split_coefficient(const Expr& t) {
  if (t.kind() != Kind::Mul) return {Number(1), t};
  Number coeff(1);
  std::vector<Expr> rest;
  for (const auto& f : t.children()) {
    if (f.is_number()) {
      coeff = coeff * f.value();
    } else {
      rest.push_back(f);
    }
  }
  if (rest.empty()) return {coeff, num(1)};
  sort_canonical(rest);
  return {coeff, rest.size() == 1 ? rest.front() : Expr::mul(std::move(rest))};
}

Expr s_add(std::vector<Expr> ops, Budget& budget) {
  budget.charge(ops.size());
  std::vector<Expr> flat;
  for (auto& op : ops) {
    if (op.kind() == Kind::Add) {
      for (const auto& c : op.children()) flat.push_back(c);
    } else {
      flat.push_back(std::move(op));
    }
  }
  Number constant(0);
  std::vector<std::pair<Expr, Number>> terms;
  for (const auto& t : flat) {
    if (t.is_number()) {
      constant = constant + t.value();
      continue;
    }
    auto [coeff, rest] = split_coefficient(t);
    auto it = std::find_if(terms.begin(), terms.end(), [&](const auto& p) { return p.first == rest; });
    if (it == terms.end()) {
      terms.emplace_back(rest, coeff);
    } else {
      it->second = it->second + coeff;
    }
  }
  std::vector<Expr> out;
  if (!constant.is_zero()) out.push_back(num(constant));
  for (auto& [rest, coeff] : terms) {
    if (coeff.is_zero()) continue;
    out.push_back(coeff.is_one() ? rest : Expr::mul({num(coeff), rest}));
  }
  if (out.empty()) return num(0);
  if (out.size() == 1) return out.front();
  sort_canonical(out);
  return Expr::add(std::move(out));
}

bool is_integer_number(const Expr& e) { return e.is_number() && e.value().is_integer(); }

Expr s_mul(std::vector<Expr> ops, Budget& budget) {
  budget.charge(ops.size());
  std::vector<Expr> flat;
  auto push_flat = [&](const Expr& f, auto& self) -> void {
    if (f.kind() == Kind::Mul) {
      for (const auto& c : f.children()) self(c, self);
    } else if (f.kind() == Kind::Pow && f.base().kind() == Kind::Mul && is_integer_number(f.exponent())) {
      self(s_pow(f.base(), f.exponent(), budget), self);
    } else {
      flat.push_back(f);
    }
  };
  for (const auto& op : ops) push_flat(op, push_flat);

  Number coeff(1);
  std::vector<std::pair<Expr, Expr>> factors;
  for (const auto& f : flat) {
    if (f.is_number()) {
      coeff = coeff * f.value();
      continue;
    }
    Expr base = f.kind() == Kind::Pow ? f.base() : f;
    Expr exp = f.kind() == Kind::Pow ? f.exponent() : num(1);
    auto it = std::find_if(factors.begin(), factors.end(), [&](const auto& p) { return p.first == base; });
    if (it == factors.end()) {
      factors.emplace_back(base, exp);
    } else if (it->second.is_number() && exp.is_number()) {
      it->second = num(it->second.value() + exp.value());
    } else {
      it->second = s_add({it->second, exp}, budget);
    }
  }
  if (coeff.is_zero()) return num(0);
  std::vector<Expr> out;
  for (const auto& [base, exp] : factors) {
    Expr f = s_pow(base, exp, budget);
    if (f.is_number()) {
      coeff = coeff * f.value();
    } else if (f.kind() == Kind::Mul) {
      for (const auto& c : f.children()) {
        if (c.is_number()) {
          coeff = coeff * c.value();
        } else {
          out.push_back(c);
        }
      }
    } else {
      out.push_back(f);
    }
  }
  if (coeff.is_zero()) return num(0);
  sort_canonical(out);
  if (out.empty()) return num(coeff);
  if (coeff.is_one()) {
    if (out.size() == 1) return out.front();
    return Expr::mul(std::move(out));
  }
  if (out.size() == 1 && out.front().kind() == Kind::Add) {
    std::vector<Expr> terms;
    for (const auto& t : out.front().children()) terms.push_back(s_mul({num(coeff), t}, budget));
    return s_add(std::move(terms), budget);
  }
  out.insert(out.begin(), num(coeff));
  return Expr::mul(std::move(out));
}

Expr s_pow(const Expr& base, const Expr& exponent, Budget& budget) {
  budget.charge();
  if (exponent.is_number()) {
    const Number& e = exponent.value();
    if (e.is_zero()) return num(1);
    if (e.is_one()) return base;
    if (e.is_integer()) {
      if (base.is_number()) return num(pow_number(base.value(), e, budget));
      if (base.kind() == Kind::Pow && base.exponent().is_number()) {
        return s_pow(base.base(), num(base.exponent().value() * e), budget);
      }
      if (base.kind() == Kind::Mul) {
        std::vector<Expr> fs;
        for (const auto& f : base.children()) fs.push_back(s_pow(f, exponent, budget));
        return s_mul(std::move(fs), budget);
      }
    }
    if (base.is_number() && base.value().is_zero() && e.is_real() && sgn(e.re()) > 0) return num(0);
  }
  if (base.is_number() && base.value().is_one()) return num(1);
  return Expr::pow(base, exponent);
}

// Multiplies two sums given as term lists.
std::vector<Expr> distribute(const std::vector<Expr>& a, const std::vector<Expr>& b, Budget& budget) {
  budget.charge(a.size() * b.size());
  std::vector<Expr> out;
  for (const auto& ta : a) {
    for (const auto& tb : b) {
      Expr p = s_mul({ta, tb}, budget);
      if (p.kind() == Kind::Add) {
        for (const auto& c : p.children()) out.push_back(c);
      } else {
        out.push_back(p);
      }
    }
  }
  return out;
}

std::vector<Expr> terms_of(const Expr& e) {
  if (e.kind() == Kind::Add) return {e.children().begin(), e.children().end()};
  return {e};
}

Expr expand_power(const Expr& sum, unsigned long n, Budget& budget) {
  budget.charge(n);
  std::vector<Expr> base = terms_of(sum);
  std::vector<Expr> acc = base;
  for (unsigned long i = 1; i < n; ++i) {
    acc = terms_of(s_add(distribute(acc, base, budget), budget));
  }
  return s_add(std::move(acc), budget);
}

Expr xpow(const std::string& var, long k) {
  Expr x = Expr::unknown(var);
  return k == 1 ? x : Expr::pow(x, num(k));
}

// Writes t as coeff * var^k with coeff free of var; nullopt if impossible.
std::optional<std::pair<long, Expr>> power_split(const Expr& t, const std::string& var, Budget& budget) {
  auto pure_power = [&](const Expr& f) -> long {
    if (f.is_symbol(var)) return 1;
    if (f.kind() == Kind::Pow && f.base().is_symbol(var) && is_integer_number(f.exponent()) &&
        sgn(f.exponent().value().re()) > 0 && f.exponent().value().re().get_num().fits_slong_p()) {
      return f.exponent().value().re().get_num().get_si();
    }
    return 0;
  };
  if (!t.contains_symbol(var)) return std::make_pair(0L, t);
  if (long k = pure_power(t); k > 0) return std::make_pair(k, num(1));
  if (t.kind() != Kind::Mul) return std::nullopt;
  long k = 0;
  std::vector<Expr> coeff;
  for (const auto& f : t.children()) {
    if (long kf = pure_power(f); kf > 0) {
      k += kf;
    } else if (f.contains_symbol(var)) {
      return std::nullopt;
    } else {
      coeff.push_back(f);
    }
  }
  return std::make_pair(k, coeff.empty() ? num(1) : s_mul(std::move(coeff), budget));
}

void reduce(RationalFunction& rf, Budget& budget) {
  if (rf.num.is_zero()) {
    rf.den = Poly::constant(Number(1));
    return;
  }
  if (!rf.den.is_constant()) {
    Poly g = poly_gcd(rf.num, rf.den, budget);
    if (!g.is_constant()) {
      rf.num = poly_exact_div(rf.num, g, budget);
      rf.den = poly_exact_div(rf.den, g, budget);
    }
  }
  Number lc = rf.den.leading_coefficient();
  if (!lc.is_one()) {
    Number inv = lc.reciprocal();
    rf.num = rf.num.scaled(inv);
    rf.den = rf.den.scaled(inv);
  }
}

}  // namespace

Expr auto_eval(const Expr& e, Budget& budget) {
  budget.charge();
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Unknown:
    case Kind::SymConst:
      return e;
    case Kind::Add: {
      std::vector<Expr> ch;
      for (const auto& c : e.children()) ch.push_back(auto_eval(c, budget));
      return s_add(std::move(ch), budget);
    }
    case Kind::Mul: {
      std::vector<Expr> ch;
      for (const auto& c : e.children()) ch.push_back(auto_eval(c, budget));
      return s_mul(std::move(ch), budget);
    }
    case Kind::Pow:
      return s_pow(auto_eval(e.base(), budget), auto_eval(e.exponent(), budget), budget);
  }
  return e;
}

Expr expand(const Expr& e, Budget& budget) {
  budget.charge();
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Unknown:
    case Kind::SymConst:
      return e;
    case Kind::Add: {
      std::vector<Expr> ch;
      for (const auto& c : e.children()) ch.push_back(expand(c, budget));
      return s_add(std::move(ch), budget);
    }
    case Kind::Mul: {
      std::vector<Expr> acc{num(1)};
      for (const auto& c : e.children()) acc = distribute(acc, terms_of(expand(c, budget)), budget);
      return s_add(std::move(acc), budget);
    }
    case Kind::Pow: {
      Expr b = expand(e.base(), budget);
      Expr x = expand(e.exponent(), budget);
      if (b.kind() == Kind::Add && is_integer_number(x)) {
        const mpz_class& n = x.value().re().get_num();
        if (!n.fits_slong_p()) throw BudgetExceeded();
        long k = n.get_si();
        unsigned long mag = k < 0 ? 0UL - static_cast<unsigned long>(k) : static_cast<unsigned long>(k);
        Expr expanded = expand_power(b, mag, budget);
        return k > 0 ? expanded : s_pow(expanded, num(-1), budget);
      }
      return s_pow(b, x, budget);
    }
  }
  return e;
}

std::optional<RationalFunction> to_rational_function(const Expr& e, Budget& budget) {
  budget.charge();
  switch (e.kind()) {
    case Kind::Number:
      return RationalFunction{Poly::constant(e.value()), Poly::constant(Number(1))};
    case Kind::Unknown:
    case Kind::SymConst:
      if (e.name() == "x") return RationalFunction{Poly::var_x(), Poly::constant(Number(1))};
      if (e.name() == "c") return RationalFunction{Poly::var_c(), Poly::constant(Number(1))};
      return std::nullopt;
    case Kind::Add: {
      RationalFunction acc{Poly(), Poly::constant(Number(1))};
      for (const auto& c : e.children()) {
        auto rf = to_rational_function(c, budget);
        if (!rf) return std::nullopt;
        if (rf->den == acc.den) {
          acc.num = acc.num + rf->num;
        } else {
          acc.num = acc.num.mul(rf->den, budget) + rf->num.mul(acc.den, budget);
          acc.den = acc.den.mul(rf->den, budget);
        }
        reduce(acc, budget);
      }
      return acc;
    }
    case Kind::Mul: {
      RationalFunction acc{Poly::constant(Number(1)), Poly::constant(Number(1))};
      for (const auto& c : e.children()) {
        auto rf = to_rational_function(c, budget);
        if (!rf) return std::nullopt;
        acc.num = acc.num.mul(rf->num, budget);
        acc.den = acc.den.mul(rf->den, budget);
        reduce(acc, budget);
      }
      return acc;
    }
    case Kind::Pow: {
      if (!is_integer_number(e.exponent())) return std::nullopt;
      auto rf = to_rational_function(e.base(), budget);
      if (!rf) return std::nullopt;
      const mpz_class& n = e.exponent().value().re().get_num();
      if (!n.fits_slong_p()) throw BudgetExceeded();
      long k = n.get_si();
      unsigned long mag = k < 0 ? 0UL - static_cast<unsigned long>(k) : static_cast<unsigned long>(k);
      budget.charge(mag);
      RationalFunction out{rf->num.pow(mag, budget), rf->den.pow(mag, budget)};
      if (k < 0) {
        if (out.num.is_zero()) throw DomainError("division by zero");
        std::swap(out.num, out.den);
      }
      reduce(out, budget);
      return out;
    }
  }
  return std::nullopt;
}

Expr poly_to_expr(const Poly& p, Budget& budget) {
  std::vector<Expr> terms;
  for (const auto& [key, coeff] : p.terms()) {
    std::vector<Expr> fs{num(coeff)};
    if (key.first > 0) fs.push_back(key.first == 1 ? Expr::unknown("x") : Expr::pow(Expr::unknown("x"), num(key.first)));
    if (key.second > 0) {
      fs.push_back(key.second == 1 ? Expr::symconst("c") : Expr::pow(Expr::symconst("c"), num(key.second)));
    }
    terms.push_back(s_mul(std::move(fs), budget));
  }
  if (terms.empty()) return num(0);
  return s_add(std::move(terms), budget);
}

Expr cancel(const Expr& e, Budget& budget) {
  auto rf = to_rational_function(e, budget);
  if (!rf) return e;
  reduce(*rf, budget);
  Expr numerator = poly_to_expr(rf->num, budget);
  if (rf->den.is_constant()) return numerator;
  return s_mul({numerator, s_pow(poly_to_expr(rf->den, budget), num(-1), budget)}, budget);
}

Expr collect(const Expr& e, const std::string& var, Budget& budget) {
  budget.charge();
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Unknown:
    case Kind::SymConst:
      return e;
    case Kind::Mul: {
      std::vector<Expr> ch;
      for (const auto& c : e.children()) ch.push_back(collect(c, var, budget));
      return s_mul(std::move(ch), budget);
    }
    case Kind::Pow:
      return s_pow(collect(e.base(), var, budget), collect(e.exponent(), var, budget), budget);
    case Kind::Add:
      break;
  }
  std::vector<Expr> others;
  std::map<long, std::vector<Expr>> buckets;
  for (const auto& c : e.children()) {
    Expr t = collect(c, var, budget);
    auto split = power_split(t, var, budget);
    if (!split || split->first == 0) {
      others.push_back(t);
    } else {
      buckets[split->first].push_back(split->second);
    }
  }
  for (auto& [k, coeffs] : buckets) {
    Expr coeff = coeffs.size() == 1 ? coeffs.front() : s_add(std::move(coeffs), budget);
    others.push_back(s_mul({coeff, xpow(var, k)}, budget));
  }
  return s_add(std::move(others), budget);
}

Expr shuffle_operands(const Expr& e, Rng& rng) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Unknown:
    case Kind::SymConst:
      return e;
    case Kind::Pow:
      return Expr::pow(shuffle_operands(e.base(), rng), shuffle_operands(e.exponent(), rng));
    case Kind::Add:
    case Kind::Mul: {
      std::vector<Expr> ch;
      for (const auto& c : e.children()) ch.push_back(shuffle_operands(c, rng));
      for (std::size_t i = ch.size() - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(ch[i], ch[pick(rng)]);
      }
      return e.kind() == Kind::Add ? Expr::add(std::move(ch)) : Expr::mul(std::move(ch));
    }
  }
  return e;
}

Expr canonical_sort(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Unknown:
    case Kind::SymConst:
      return e;
    case Kind::Pow:
      return Expr::pow(canonical_sort(e.base()), canonical_sort(e.exponent()));
    case Kind::Add:
    case Kind::Mul: {
      std::vector<Expr> ch;
      for (const auto& c : e.children()) ch.push_back(canonical_sort(c));
      sort_canonical(ch);
      return e.kind() == Kind::Add ? Expr::add(std::move(ch)) : Expr::mul(std::move(ch));
    }
  }
  return e;
}

Expr normalize(const Expr& e, const NormalizeOptions& opts, Rng& rng) {
  Budget budget(opts.budget);
  Expr r = auto_eval(e, budget);
  if (opts.expand) r = expand(r, budget);
  if (opts.cancel) r = cancel(r, budget);
  r = collect(r, opts.unknown, budget);
  r = auto_eval(r, budget);
  if (opts.shuffle) r = shuffle_operands(r, rng);
  return r;
}

SolvedStatus classify(const Equation& eq, const std::string& unknown) {
  bool lhs_has = eq.lhs.contains_symbol(unknown);
  bool rhs_has = eq.rhs.contains_symbol(unknown);
  if (eq.lhs.is_symbol(unknown) && !rhs_has) return {SolvedKind::Solved, eq.rhs};
  if (eq.rhs.is_symbol(unknown) && !lhs_has) return {SolvedKind::Solved, eq.lhs};
  if (!lhs_has && !rhs_has) return {SolvedKind::UnknownEliminated, Expr()};
  return {SolvedKind::Unsolved, Expr()};
}

bool is_linear_in(const Equation& eq, const std::string& var) {
  auto side_linear = [&](const Expr& side) {
    if (!side.contains_symbol(var)) return true;
    if (var != "x" && var != "c") return false;
    try {
      Budget budget(200000);
      auto rf = to_rational_function(side, budget);
      if (!rf) return false;
      reduce(*rf, budget);
      int num_deg = var == "x" ? rf->num.degree_x() : rf->num.degree_c();
      int den_deg = var == "x" ? rf->den.degree_x() : rf->den.degree_c();
      return num_deg <= 1 && den_deg <= 0;
    } catch (const BudgetExceeded&) {
      return false;
    } catch (const DomainError&) {
      return false;
    }
  };
  return side_linear(eq.lhs) && side_linear(eq.rhs);
}

std::optional<Number> evaluate(const Expr& e, const Number& xv, const Number& cv) {
  switch (e.kind()) {
    case Kind::Number:
      return e.value();
    case Kind::Unknown:
      return xv;
    case Kind::SymConst:
      return cv;
    case Kind::Add: {
      Number acc(0);
      for (const auto& c : e.children()) {
        auto v = evaluate(c, xv, cv);
        if (!v) return std::nullopt;
        acc = acc + *v;
      }
      return acc;
    }
    case Kind::Mul: {
      Number acc(1);
      for (const auto& c : e.children()) {
        auto v = evaluate(c, xv, cv);
        if (!v) return std::nullopt;
        acc = acc * *v;
      }
      return acc;
    }
    case Kind::Pow: {
      auto b = evaluate(e.base(), xv, cv);
      auto x = evaluate(e.exponent(), xv, cv);
      if (!b || !x || !x->is_integer()) return std::nullopt;
      const mpz_class& n = x->re().get_num();
      if (b->is_zero() && sgn(n) < 0) return std::nullopt;
      if (!n.fits_slong_p() || (abs(n) > 4096 && !is_gaussian_unit(*b) && !b->is_zero())) return std::nullopt;
      Budget unlimited(static_cast<std::size_t>(-1));
      return pow_number(*b, *x, unlimited);
    }
  }
  return std::nullopt;
}

}  // namespace eqrl
