#pragma once

#include "eqrl/number.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace eqrl {

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded() : std::runtime_error("simplification budget exceeded") {}
};

// Deterministic work counter standing in for a wall-clock timeout.
class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  void charge(std::size_t n = 1) {
    used_ += n;
    if (used_ > limit_) throw BudgetExceeded();
  }
  std::size_t used() const { return used_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

// Polynomial in the unknown x and the symbolic constant c over Q(i).
class Poly {
 public:
  using Key = std::pair<int, int>;  // (degree in x, degree in c)

  Poly() = default;
  static Poly constant(const Number& n);
  static Poly var_x();
  static Poly var_c();

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  int degree_x() const;
  int degree_c() const;
  const std::map<Key, Number>& terms() const { return terms_; }
  // Coefficient of the highest term in (deg_x, deg_c) lexicographic order.
  const Number& leading_coefficient() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly mul(const Poly& o, Budget& budget) const;
  Poly scaled(const Number& k) const;
  Poly pow(unsigned long n, Budget& budget) const;

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  void add_term(Key k, const Number& v);

 private:
  std::map<Key, Number> terms_;
};

// gcd over Q(i)[x, c], normalized to leading coefficient 1.
Poly poly_gcd(const Poly& a, const Poly& b, Budget& budget);
// Exact division; throws std::logic_error when the divisor does not divide.
Poly poly_exact_div(const Poly& a, const Poly& b, Budget& budget);

}  // namespace eqrl
