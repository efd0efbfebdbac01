#include "eqrl/poly.hpp"

#include <algorithm>

namespace eqrl {

Poly Poly::constant(const Number& n) {
  Poly p;
  p.add_term({0, 0}, n);
  return p;
}

Poly Poly::var_x() {
  Poly p;
  p.add_term({1, 0}, Number(1));
  return p;
}

Poly Poly::var_c() {
  Poly p;
  p.add_term({0, 1}, Number(1));
  return p;
}

void Poly::add_term(Key k, const Number& v) {
  if (v.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, v);
    return;
  }
  it->second = it->second + v;
  if (it->second.is_zero()) terms_.erase(it);
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

int Poly::degree_x() const {
  int d = -1;
  for (const auto& [k, v] : terms_) d = std::max(d, k.first);
  return d;
}

int Poly::degree_c() const {
  int d = -1;
  for (const auto& [k, v] : terms_) d = std::max(d, k.second);
  return d;
}

const Number& Poly::leading_coefficient() const {
  if (terms_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
  return terms_.rbegin()->second;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& [k, v] : o.terms_) r.add_term(k, v);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  for (const auto& [k, v] : o.terms_) r.add_term(k, -v);
  return r;
}

Poly Poly::mul(const Poly& o, Budget& budget) const {
  budget.charge(terms_.size() * o.terms_.size() + 1);
  Poly r;
  for (const auto& [ka, va] : terms_) {
    for (const auto& [kb, vb] : o.terms_) {
      r.add_term({ka.first + kb.first, ka.second + kb.second}, va * vb);
    }
  }
  return r;
}

Poly Poly::scaled(const Number& k) const {
  Poly r;
  for (const auto& [key, v] : terms_) r.add_term(key, v * k);
  return r;
}

Poly Poly::pow(unsigned long n, Budget& budget) const {
  Poly result = constant(Number(1));
  Poly base = *this;
  while (n != 0) {
    if (n & 1UL) result = result.mul(base, budget);
    n >>= 1;
    if (n != 0) base = base.mul(base, budget);
  }
  return result;
}

namespace {

// Univariate polynomial in c; coefficients indexed by degree, no trailing zeros.
using UPoly = std::vector<Number>;
// Polynomial in x whose coefficients are UPolys.
using XPoly = std::vector<UPoly>;

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

void trim(XPoly& p) {
  while (!p.empty() && p.back().empty()) p.pop_back();
}

UPoly u_sub(const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()), Number(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] - b[i];
  trim(r);
  return r;
}

UPoly u_mul(const UPoly& a, const UPoly& b, Budget& budget) {
  if (a.empty() || b.empty()) return {};
  budget.charge(a.size() * b.size());
  UPoly r(a.size() + b.size() - 1, Number(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  }
  trim(r);
  return r;
}

UPoly u_scale(const UPoly& a, const Number& k) {
  UPoly r;
  r.reserve(a.size());
  for (const auto& v : a) r.push_back(v * k);
  trim(r);
  return r;
}

// Field division with remainder.
std::pair<UPoly, UPoly> u_divmod(const UPoly& a, const UPoly& b, Budget& budget) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  UPoly rem = a;
  if (rem.size() < b.size()) return {{}, rem};
  UPoly quo(rem.size() - b.size() + 1, Number(0));
  Number inv_lead = b.back().reciprocal();
  while (!rem.empty() && rem.size() >= b.size()) {
    budget.charge(b.size());
    std::size_t shift = rem.size() - b.size();
    Number f = rem.back() * inv_lead;
    quo[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) rem[i + shift] = rem[i + shift] - f * b[i];
    rem.back() = Number(0);
    trim(rem);
  }
  trim(quo);
  return {quo, rem};
}

UPoly u_monic(const UPoly& a) {
  if (a.empty()) return a;
  return u_scale(a, a.back().reciprocal());
}

UPoly u_gcd(UPoly a, UPoly b, Budget& budget) {
  while (!b.empty()) {
    auto r = u_divmod(a, b, budget).second;
    a = std::move(b);
    b = std::move(r);
  }
  return u_monic(a);
}

UPoly u_exact_div(const UPoly& a, const UPoly& b, Budget& budget) {
  auto [q, r] = u_divmod(a, b, budget);
  if (!r.empty()) throw std::logic_error("inexact univariate division");
  return q;
}

XPoly to_x(const Poly& p) {
  XPoly r;
  for (const auto& [k, v] : p.terms()) {
    auto dx = static_cast<std::size_t>(k.first);
    auto dc = static_cast<std::size_t>(k.second);
    if (r.size() <= dx) r.resize(dx + 1);
    if (r[dx].size() <= dc) r[dx].resize(dc + 1, Number(0));
    r[dx][dc] = v;
  }
  for (auto& u : r) trim(u);
  trim(r);
  return r;
}

Poly from_x(const XPoly& p) {
  Poly r;
  for (std::size_t dx = 0; dx < p.size(); ++dx) {
    for (std::size_t dc = 0; dc < p[dx].size(); ++dc) {
      r.add_term({static_cast<int>(dx), static_cast<int>(dc)}, p[dx][dc]);
    }
  }
  return r;
}

UPoly x_content(const XPoly& p, Budget& budget) {
  UPoly g;
  for (const auto& coeff : p) {
    if (coeff.empty()) continue;
    g = g.empty() ? u_monic(coeff) : u_gcd(g, coeff, budget);
    if (g.size() == 1) break;
  }
  return g;
}

XPoly x_div_content(const XPoly& p, const UPoly& content, Budget& budget) {
  XPoly r;
  r.reserve(p.size());
  for (const auto& coeff : p) r.push_back(coeff.empty() ? UPoly{} : u_exact_div(coeff, content, budget));
  trim(r);
  return r;
}

XPoly x_primitive(const XPoly& p, Budget& budget) {
  if (p.empty()) return p;
  return x_div_content(p, x_content(p, budget), budget);
}

// Pseudo-remainder of a by b as polynomials in x.
XPoly x_prem(XPoly a, const XPoly& b, Budget& budget) {
  const UPoly& lc = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    std::size_t shift = a.size() - b.size();
    UPoly lead = a.back();
    for (auto& coeff : a) coeff = u_mul(coeff, lc, budget);
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[i + shift] = u_sub(a[i + shift], u_mul(lead, b[i], budget));
    }
    trim(a);
  }
  return a;
}

Poly normalized(const Poly& p) {
  if (p.is_zero()) return p;
  return p.scaled(p.leading_coefficient().reciprocal());
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b, Budget& budget) {
  if (a.is_zero()) return normalized(b);
  if (b.is_zero()) return normalized(a);
  XPoly xa = to_x(a);
  XPoly xb = to_x(b);
  UPoly ca = x_content(xa, budget);
  UPoly cb = x_content(xb, budget);
  UPoly content = u_gcd(ca, cb, budget);
  XPoly pa = x_div_content(xa, ca, budget);
  XPoly pb = x_div_content(xb, cb, budget);
  if (pa.size() < pb.size()) std::swap(pa, pb);
  XPoly g;
  while (true) {
    if (pb.empty()) {
      g = pa;
      break;
    }
    if (pb.size() == 1) {
      // Degree 0 in x: the primitive parts are coprime.
      g = XPoly{UPoly{Number(1)}};
      break;
    }
    XPoly r = x_prem(pa, pb, budget);
    pa = std::move(pb);
    pb = x_primitive(r, budget);
  }
  g = x_primitive(g, budget);
  for (auto& coeff : g) coeff = u_mul(coeff, content, budget);
  trim(g);
  return normalized(from_x(g));
}

Poly poly_exact_div(const Poly& a, const Poly& b, Budget& budget) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  XPoly rem = to_x(a);
  XPoly div = to_x(b);
  if (rem.size() < div.size()) {
    if (rem.empty()) return Poly();
    throw std::logic_error("inexact polynomial division");
  }
  XPoly quo(rem.size() - div.size() + 1);
  while (!rem.empty() && rem.size() >= div.size()) {
    std::size_t shift = rem.size() - div.size();
    UPoly f = u_exact_div(rem.back(), div.back(), budget);
    quo[shift] = f;
    for (std::size_t i = 0; i < div.size(); ++i) {
      rem[i + shift] = u_sub(rem[i + shift], u_mul(f, div[i], budget));
    }
    if (!rem.back().empty()) throw std::logic_error("inexact polynomial division");
    trim(rem);
  }
  if (!rem.empty()) throw std::logic_error("inexact polynomial division");
  trim(quo);
  return from_x(quo);
}

}  // namespace eqrl
