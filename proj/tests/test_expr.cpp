#include "doctest.h"

#include "eqrl/parser.hpp"
#include "eqrl/units.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <random>

using namespace eqrl;
using BigQ = boost::multiprecision::cpp_rational;

namespace {

BigQ to_big(const mpq_class& q) { return BigQ(q.get_str()); }

// Complex rational oracle on top of boost cpp_rational.
struct Cq {
  BigQ re, im;
};

Cq oracle(const Cq& a, const Cq& b, char op) {
  if (op == '+') return {a.re + b.re, a.im + b.im};
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// Trees in the shape auto-evaluation leaves behind: no subtree made only of
// numbers (the parser folds those).
Expr random_expr(std::mt19937_64& rng, int depth);

Expr random_symbolic(std::mt19937_64& rng, int depth) {
  for (;;) {
    Expr e = random_expr(rng, depth);
    if (e.has_symbols()) return e;
  }
}

Expr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 5);
  std::uniform_int_distribution<long> small(-9, 9);
  std::uniform_int_distribution<long> den(1, 6);
  switch (pick(rng)) {
    case 0: {
      Number n = Number::rational(small(rng), den(rng));
      if (rng() % 4 == 0) n = n + Number(mpq_class(0), mpq_class(small(rng)));
      return Expr::number(n);
    }
    case 1:
      return Expr::unknown();
    case 2:
      return Expr::symconst();
    case 3:
    case 4: {
      std::vector<Expr> ch;
      int k = 2 + static_cast<int>(rng() % 2);
      ch.push_back(random_symbolic(rng, depth - 1));
      for (int i = 1; i < k; ++i) ch.push_back(random_expr(rng, depth - 1));
      return pick(rng) % 2 == 0 ? Expr::add(ch) : Expr::mul(ch);
    }
    default: {
      long e = small(rng);
      if (e == 0) e = 2;
      return Expr::pow(random_symbolic(rng, depth - 1), Expr::number(Number(e)));
    }
  }
}

}  // namespace

TEST_CASE("parse examples") {
  Expr x = parse_expression("x");
  CHECK(x.kind() == Kind::Unknown);

  Expr e = parse_expression("-1/5 + 3/4*x");
  REQUIRE(e.kind() == Kind::Add);
  CHECK(e.children()[0] == Expr::number(Number::rational(-1, 5)));
  CHECK(e.children()[1] == Expr::mul({Expr::number(Number::rational(3, 4)), Expr::unknown()}));
  CHECK(render_infix(e) == "-1/5 + 3/4*x");

  try {
    parse_expression("2*x + (");
    FAIL("expected a parse error");
  } catch (const ParseError& err) {
    CHECK(err.position() == 8);
  }
}

TEST_CASE("render examples") {
  CHECK(render_infix(Expr::number(Number(5))) == "5");
  CHECK(render_infix(Expr::mul({Expr::number(Number::rational(3, 4)), Expr::unknown()})) == "3/4*x");
  CHECK(render_infix(Expr::add({Expr::unknown(), Expr::symconst(), Expr::number(Number(1))})) == "x + c + 1");
}

TEST_CASE("units and subterms") {
  Expr e = parse_expression("2+4*x");
  auto units = enumerate_units(e);
  REQUIRE(units.size() == 5);
  CHECK(units[0].kind == UnitKind::Number);
  CHECK(units[1].op == '+');
  CHECK(units[3].op == '*');
  CHECK(units[4].kind == UnitKind::Unknown);
  CHECK(subterm_at(e, 1) == Expr::number(Number(2)));
  CHECK(subterm_at(e, 2) == e);
  CHECK(render_infix(subterm_at(e, 4)) == render_infix(parse_expression("4*x")));
  CHECK_THROWS_AS(subterm_at(e, 6), std::out_of_range);

  CHECK(enumerate_units(parse_expression("x")).size() == 1);

  auto nested = enumerate_units(parse_expression("5*x*(x+(2-1*I)*c)"));
  int lp = 0, rp = 0;
  for (const auto& u : nested) {
    lp += u.kind == UnitKind::LParen;
    rp += u.kind == UnitKind::RParen;
  }
  CHECK(lp >= 1);
  CHECK(lp == rp);
}

TEST_CASE("combine_numbers examples") {
  CHECK(combine_numbers(Number::rational(-1, 5), Number::rational(-5, 8), NumberOp::Add) == Number::rational(-33, 40));
  Number a(mpq_class(2), mpq_class(-1));
  CHECK(combine_numbers(a, Number::imaginary_unit(), NumberOp::Mul) == Number(mpq_class(1), mpq_class(2)));
  CHECK(combine_numbers(a, Number(1), NumberOp::Pow) == a);
  CHECK_THROWS_AS(combine_numbers(Number(0), Number(-1), NumberOp::Pow), DomainError);
  CHECK_THROWS_AS(combine_numbers(Number(2), Number::rational(1, 2), NumberOp::Pow), DomainError);
}

TEST_CASE("arithmetic agrees with the boost rational oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000000, 1000000);
  std::uniform_int_distribution<long> den(1, 100000);
  for (int i = 0; i < 10000; ++i) {
    long ar = num(rng), ad = den(rng), ai = num(rng) % 50, br = num(rng), bd = den(rng), bi = num(rng) % 50;
    Number a(mpq_class(ar, ad), mpq_class(ai));
    Number b(mpq_class(br, bd), mpq_class(bi));
    Cq oa{BigQ(ar, ad), BigQ(ai)};
    Cq ob{BigQ(br, bd), BigQ(bi)};
    char op = i % 2 == 0 ? '+' : '*';
    Number got = combine_numbers(a, b, op == '+' ? NumberOp::Add : NumberOp::Mul);
    Cq want = oracle(oa, ob, op);
    REQUIRE(to_big(got.re()) == want.re);
    REQUIRE(to_big(got.im()) == want.im);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), got.re().get_num_mpz_t(), got.re().get_den_mpz_t());
    REQUIRE((g == 1 || got.re() == 0));
    REQUIRE(got.re().get_den() > 0);
  }
}

TEST_CASE("render/parse round trip on random trees") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    Expr e = random_symbolic(rng, 3);
    std::string text = render_infix(e);
    Expr back = parse_expression(text);
    INFO(text);
    REQUIRE(render_infix(back) == text);
  }
}

TEST_CASE("subterm renderings are contiguous substrings") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 2000; ++i) {
    Expr e = random_symbolic(rng, 3);
    std::string text = render_infix(e);
    auto units = enumerate_units(e);
    for (std::size_t n = 1; n <= units.size(); ++n) {
      std::string sub = render_infix(subterm_at(e, n));
      bool found = text.find(sub) != std::string::npos;
      if (!found && !sub.empty() && sub[0] == '-') found = text.find(sub.substr(1)) != std::string::npos;
      INFO(text, " unit ", n, " -> ", sub);
      REQUIRE(found);
    }
  }
}
