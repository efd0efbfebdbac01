#include "eqrl/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace eqrl {

namespace {

enum class Tok { Number, Unknown, SymConst, Imag, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos;  // 1-based
  Number value;
  std::string text;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto skip_ws = [&](std::size_t j) {
    while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    return j;
  };
  auto read_digits = [&](std::size_t j) {
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    return j;
  };
  while (true) {
    i = skip_ws(i);
    if (i >= s.size()) break;
    char ch = s[i];
    std::size_t pos = i + 1;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t end = read_digits(i);
      std::string lit(s.substr(i, end - i));
      // "p/q" is one literal unless it continues a '/' or '^' chain.
      bool may_merge = out.empty() || (out.back().kind != Tok::Slash && out.back().kind != Tok::Caret);
      std::size_t j = skip_ws(end);
      if (may_merge && j < s.size() && s[j] == '/') {
        std::size_t k = skip_ws(j + 1);
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          std::size_t kend = read_digits(k);
          std::string den(s.substr(k, kend - k));
          if (den.find_first_not_of('0') == std::string::npos) {
            throw ParseError("division by zero", k + 1);
          }
          lit += "/" + den;
          end = kend;
        }
      }
      out.push_back({Tok::Number, pos, Number::from_string(lit), lit});
      i = end;
      continue;
    }
    Tok kind;
    switch (ch) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case 'x': kind = Tok::Unknown; break;
      case 'c': kind = Tok::SymConst; break;
      case 'I': kind = Tok::Imag; break;
      default:
        throw ParseError(std::string("unexpected character '") + ch + "'", pos);
    }
    out.push_back({kind, pos, Number(), std::string(1, ch)});
    ++i;
  }
  out.push_back({Tok::End, s.size() + 1, Number(), ""});
  return out;
}

bool all_numbers(const std::vector<Expr>& ops) {
  for (const auto& o : ops) {
    if (!o.is_number()) return false;
  }
  return true;
}

Expr fold_add(std::vector<Expr> ops) {
  if (all_numbers(ops)) {
    Number sum(0);
    for (const auto& o : ops) sum = sum + o.value();
    return Expr::number(sum);
  }
  return Expr::add(std::move(ops));
}

Expr fold_mul(std::vector<Expr> ops) {
  if (all_numbers(ops)) {
    Number prod(1);
    for (const auto& o : ops) prod = prod * o.value();
    return Expr::number(prod);
  }
  return Expr::mul(std::move(ops));
}

Expr fold_pow(Expr base, Expr exponent, std::size_t pos) {
  if (base.is_number() && exponent.is_number() && exponent.value().is_integer()) {
    const auto& e = exponent.value().re().get_num();
    if (e.fits_slong_p() && (abs(e) <= 4096 || base.value().is_zero() || base.value().is_one())) {
      try {
        return Expr::number(base.value().pow(e.get_si()));
      } catch (const DomainError& err) {
        throw ParseError(err.what(), pos);
      }
    }
  }
  return Expr::pow(std::move(base), std::move(exponent));
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().kind != Tok::End) fail("unexpected token '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  Token take() { return toks_[i_++]; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, peek().pos); }

  Expr expr() {
    std::vector<Expr> terms{term()};
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = take().kind == Tok::Minus;
      Expr t = term();
      terms.push_back(minus ? negate(t) : t);
    }
    return terms.size() == 1 ? terms.front() : fold_add(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      Token op = take();
      Expr f = unary();
      if (op.kind == Tok::Slash) {
        if (f.is_number() && f.value().is_zero()) throw ParseError("division by zero", op.pos);
        f = invert(f);
      }
      factors.push_back(f);
    }
    return factors.size() == 1 ? factors.front() : fold_mul(std::move(factors));
  }

  Expr unary() {
    if (peek().kind == Tok::Minus) {
      take();
      return negate(unary());
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (peek().kind == Tok::Caret) {
      std::size_t pos = take().pos;
      Expr exponent = unary();
      return fold_pow(std::move(base), std::move(exponent), pos);
    }
    return base;
  }

  Expr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        Number v = t.value;
        take();
        return Expr::number(v);
      }
      case Tok::Unknown:
        take();
        return Expr::unknown("x");
      case Tok::SymConst:
        take();
        return Expr::symconst("c");
      case Tok::Imag:
        take();
        return Expr::number(Number::imaginary_unit());
      case Tok::LParen: {
        take();
        Expr inner = expr();
        if (peek().kind != Tok::RParen) fail("expected ')'");
        take();
        return inner;
      }
      case Tok::End:
        fail("unexpected end of input");
      default:
        fail("unexpected token '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text) { return Parser(lex(text)).parse_all(); }

Equation parse_equation(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ParseError("missing '='", text.size() + 1);
  if (text.find('=', eq + 1) != std::string_view::npos) {
    throw ParseError("more than one '='", text.find('=', eq + 1) + 1);
  }
  Equation out;
  out.lhs = parse_expression(text.substr(0, eq));
  try {
    out.rhs = parse_expression(text.substr(eq + 1));
  } catch (const ParseError& err) {
    throw ParseError(err.message(), err.position() + eq + 1);
  }
  return out;
}

}  // namespace eqrl
