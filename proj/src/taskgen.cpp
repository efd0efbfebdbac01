#include "eqrl/taskgen.hpp"

#include "eqrl/parser.hpp"
#include "eqrl/units.hpp"

#include <fstream>
#include <sstream>

namespace eqrl {

Field parse_field(const std::string& s) {
  if (s == "Z") return Field::Z;
  if (s == "Q") return Field::Q;
  if (s == "Z+iZ" || s == "ZI") return Field::ZI;
  if (s == "Q+iQ" || s == "QI") return Field::QI;
  throw std::invalid_argument("unknown field '" + s + "' (expected Z, Q, Z+iZ or Q+iQ)");
}

std::string field_name(Field f) {
  switch (f) {
    case Field::Z: return "Z";
    case Field::Q: return "Q";
    case Field::ZI: return "Z+iZ";
    case Field::QI: return "Q+iQ";
  }
  return "?";
}

EqType parse_eq_type(const std::string& s) {
  if (s == "numeric") return EqType::Numeric;
  if (s == "symbolic") return EqType::Symbolic;
  if (s == "restricted") return EqType::Restricted;
  if (s == "shift") return EqType::Shift;
  throw std::invalid_argument("unknown equation type '" + s + "' (expected numeric, symbolic, restricted or shift)");
}

std::string eq_type_name(EqType t) {
  switch (t) {
    case EqType::Numeric: return "numeric";
    case EqType::Symbolic: return "symbolic";
    case EqType::Restricted: return "restricted";
    case EqType::Shift: return "shift";
  }
  return "?";
}

namespace {

mpq_class sample_part(const SamplerConfig& cfg, bool rational, Rng& rng) {
  if (!rational) {
    std::uniform_int_distribution<long> u(-cfg.int_bound, cfg.int_bound);
    return mpq_class(u(rng));
  }
  std::uniform_int_distribution<long> p(-cfg.p_bound, cfg.p_bound);
  std::uniform_int_distribution<long> q(1, cfg.q_bound);
  long num = p(rng);
  long den = q(rng);
  mpq_class v(num, den);
  v.canonicalize();
  return v;
}

Expr num(const Number& n) { return Expr::number(n); }

Expr linear_side(const Expr& constant, const Expr& slope) {
  return Expr::add({constant, Expr::mul({slope, Expr::unknown()})});
}

}  // namespace

Number sample_coefficient(const SamplerConfig& cfg, Rng& rng) {
  bool rational = cfg.field == Field::Q || cfg.field == Field::QI;
  bool complex = cfg.field == Field::ZI || cfg.field == Field::QI;
  mpq_class re = sample_part(cfg, rational, rng);
  mpq_class im = complex ? sample_part(cfg, rational, rng) : mpq_class(0);
  return Number(re, im);
}

Equation sample_equation(const SamplerConfig& cfg, Rng& rng) {
  if (cfg.type == EqType::Shift) {
    Number a = sample_coefficient(cfg, rng);
    Number b = sample_coefficient(cfg, rng);
    return {Expr::add({Expr::unknown(), num(a)}), num(b)};
  }
  Number a[4];
  for (auto& v : a) v = sample_coefficient(cfg, rng);
  if (cfg.type == EqType::Numeric) {
    return {linear_side(num(a[0]), num(a[1])), linear_side(num(a[2]), num(a[3]))};
  }
  Number b[4];
  std::bernoulli_distribution zero(cfg.p0);
  for (auto& v : b) v = zero(rng) ? Number(0) : sample_coefficient(cfg, rng);
  if (cfg.type == EqType::Restricted) {
    std::bernoulli_distribution which(0.5);
    int k0 = 0, k1 = 3;
    if (which(rng)) k0 = 1, k1 = 2;
    a[k0] = b[k0] = a[k1] = b[k1] = Number(0);
  }
  auto with_c = [&](int i) { return Expr::add({num(a[i]), Expr::mul({num(b[i]), Expr::symconst()})}); };
  return {linear_side(with_c(0), with_c(1)), linear_side(with_c(2), with_c(3))};
}

std::vector<Equation> parse_dataset(const std::string& text) {
  std::vector<Equation> out;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.back() == '\r') line.pop_back();
    try {
      out.push_back(parse_equation(line));
    } catch (const ParseError& e) {
      throw DatasetError(e.what(), lineno);
    }
  }
  return out;
}

std::vector<Equation> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read dataset " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str());
}

void save_dataset(const std::vector<Equation>& eqs, const std::string& path, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset " + path);
  if (!comment.empty()) out << "# " << comment << "\n";
  for (const auto& eq : eqs) out << render_equation(eq) << "\n";
}

}  // namespace eqrl
