#include "doctest.h"

#include "eqrl/parser.hpp"
#include "eqrl/taskgen.hpp"
#include "eqrl/units.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

using namespace eqrl;

namespace {

// Coefficients recovered by evaluation: side(x, c) = a + b c + (a' + b' c) x.
struct SideCoeffs {
  Number a, b, a1, b1;
};

SideCoeffs coeffs(const Expr& side) {
  auto at = [&](long x, long c) { return *evaluate(side, Number(x), Number(c)); };
  SideCoeffs s;
  s.a = at(0, 0);
  s.b = at(0, 1) - s.a;
  s.a1 = at(1, 0) - s.a;
  s.b1 = at(1, 1) - s.a - s.b - s.a1;
  return s;
}

double three_sigma(double p, int n) { return 3.0 * std::sqrt(n * p * (1 - p)); }

std::string tmp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("integer coefficients stay in [-10, 10] and are uniform") {
  SamplerConfig cfg;
  Rng rng(1);
  const int n = 10000;
  std::map<long, int> hist;
  for (int i = 0; i < n; ++i) {
    Equation eq = sample_equation(cfg, rng);
    CHECK(is_linear_in(eq));
    auto l = coeffs(eq.lhs), r = coeffs(eq.rhs);
    for (const Number& v : {l.a, l.a1, r.a, r.a1}) {
      REQUIRE(v.is_integer());
      long k = v.re().get_num().get_si();
      CHECK(std::abs(k) <= 10);
      ++hist[k];
    }
  }
  CHECK(hist.size() == 21);
  const double p = 1.0 / 21;
  for (const auto& [k, c] : hist) CHECK(std::abs(c - 4 * n * p) < 3.0 * std::sqrt(4 * n * p * (1 - p)));
}

TEST_CASE("rational coefficients are p/q with |p| <= 50, 1 <= q <= 10") {
  SamplerConfig cfg;
  cfg.field = Field::Q;
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    Number v = sample_coefficient(cfg, rng);
    CHECK(v.is_real());
    // Some p/q with the bounds reduces to v: check the reduced form fits.
    mpz_class num = v.re().get_num(), den = v.re().get_den();
    CHECK(den <= 10);
    CHECK(abs(num) <= 50);
  }
}

TEST_CASE("complex fields draw independent parts") {
  SamplerConfig cfg;
  cfg.field = Field::ZI;
  Rng rng(3);
  int nonreal = 0;
  for (int i = 0; i < 2000; ++i) {
    Number v = sample_coefficient(cfg, rng);
    CHECK(v.re().get_den() == 1);
    CHECK(v.im().get_den() == 1);
    CHECK(abs(v.re()) <= 10);
    CHECK(abs(v.im()) <= 10);
    nonreal += !v.is_real();
  }
  CHECK(nonreal > 1800);
  cfg.field = Field::QI;
  Number q = sample_coefficient(cfg, rng);
  CHECK(q.im().get_den() <= 10);
}

TEST_CASE("symbolic zero pattern follows p0") {
  SamplerConfig cfg;
  cfg.type = EqType::Symbolic;
  cfg.p0 = 0.5;
  Rng rng(4);
  const int n = 10000;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    Equation eq = sample_equation(cfg, rng);
    CHECK(is_linear_in(eq));
    zeros += coeffs(eq.lhs).b.is_zero();
  }
  // Forced zero with probability p0, or a drawn zero (1 in 21).
  const double p = 0.5 + 0.5 / 21;
  CHECK(std::abs(zeros - n * p) < three_sigma(p, n));

  cfg.p0 = 1.0;
  for (int i = 0; i < 200; ++i) {
    Equation eq = sample_equation(cfg, rng);
    auto l = coeffs(eq.lhs), r = coeffs(eq.rhs);
    CHECK(l.b.is_zero());
    CHECK(l.b1.is_zero());
    CHECK(r.b.is_zero());
    CHECK(r.b1.is_zero());
  }
}

TEST_CASE("restricted class zeroes a0,b0,a3,b3 or a1,b1,a2,b2") {
  SamplerConfig cfg;
  cfg.type = EqType::Restricted;
  cfg.p0 = 0.0;
  Rng rng(5);
  int first = 0;
  for (int i = 0; i < 2000; ++i) {
    Equation eq = sample_equation(cfg, rng);
    auto l = coeffs(eq.lhs), r = coeffs(eq.rhs);
    bool outer = l.a.is_zero() && l.b.is_zero() && r.a1.is_zero() && r.b1.is_zero();
    bool inner = l.a1.is_zero() && l.b1.is_zero() && r.a.is_zero() && r.b.is_zero();
    CHECK((outer || inner));
    first += outer;
  }
  CHECK(std::abs(first - 1000) < three_sigma(0.5, 2000) + 40);  // drawn zeros can satisfy both
}

TEST_CASE("shift class") {
  SamplerConfig cfg;
  cfg.type = EqType::Shift;
  cfg.int_bound = 3;
  Rng rng(6);
  for (int i = 0; i < 500; ++i) {
    Equation eq = sample_equation(cfg, rng);
    auto l = coeffs(eq.lhs), r = coeffs(eq.rhs);
    CHECK(l.a1 == Number(1));
    CHECK(r.a1.is_zero());
    CHECK(abs(l.a.re()) <= 3);
    CHECK(abs(r.a.re()) <= 3);
  }
}

TEST_CASE("dataset parsing") {
  auto eqs = parse_dataset("# comment\n\n-1/5 + 3/4*x = 5/8 + 2*x\n");
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0].lhs == parse_expression("-1/5 + 3/4*x"));
  CHECK(eqs[0].rhs == parse_expression("5/8 + 2*x"));
  CHECK(parse_dataset("").empty());
  try {
    parse_dataset("x = 1\nx + = 2\n");
    FAIL("expected a parse error");
  } catch (const DatasetError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_dataset("/nonexistent/eqrl.txt"), std::runtime_error);
}

TEST_CASE("save then load is structurally identical") {
  Rng rng(7);
  for (Field f : {Field::Z, Field::Q, Field::ZI, Field::QI}) {
    for (EqType t : {EqType::Numeric, EqType::Symbolic, EqType::Restricted, EqType::Shift}) {
      SamplerConfig cfg;
      cfg.field = f;
      cfg.type = t;
      std::vector<Equation> eqs;
      for (int i = 0; i < 1000; ++i) eqs.push_back(sample_equation(cfg, rng));
      auto path = tmp_path("eqrl_dataset_test.txt");
      save_dataset(eqs, path, "round trip");
      auto back = load_dataset(path);
      REQUIRE(back.size() == eqs.size());
      int mismatches = 0;
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (!(back[i].lhs == eqs[i].lhs && back[i].rhs == eqs[i].rhs)) {
          if (mismatches++ == 0) MESSAGE(render_equation(eqs[i]) << " came back as " << render_equation(back[i]));
        }
      }
      CHECK(mismatches == 0);
      std::filesystem::remove(path);
    }
  }
}
