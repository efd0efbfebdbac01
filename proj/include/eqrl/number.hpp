#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eqrl {

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact complex rational a + b*i with both parts kept in lowest terms.
class Number {
 public:
  Number() = default;
  Number(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  Number(mpq_class re, mpq_class im = 0);

  static Number rational(long num, long den);
  static Number imaginary_unit() { return Number(mpq_class(0), mpq_class(1)); }
  // Accepts "p" or "p/q" with an optional leading '-'.
  static Number from_string(std::string_view text);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_integer() const { return is_real() && re_.get_den() == 1; }
  bool is_negative_real() const { return is_real() && sgn(re_) < 0; }

  Number operator-() const { return Number(-re_, -im_); }
  Number operator+(const Number& o) const;
  Number operator-(const Number& o) const;
  Number operator*(const Number& o) const;
  Number operator/(const Number& o) const;
  Number reciprocal() const;
  // Integer power by repeated squaring; throws DomainError for 0^negative.
  Number pow(long exponent) const;

  bool operator==(const Number& o) const { return re_ == o.re_ && im_ == o.im_; }
  // Total order: real part first, then imaginary part.
  std::strong_ordering operator<=>(const Number& o) const;

  // Bits needed to store both parts; used for cost estimates.
  std::size_t bit_size() const;
  bool fits_within(long bound) const;

  // Canonical text: "3", "-3/4", "I", "-I", "(2*I)", "(2-I)", "(1/2+3/4*I)".
  std::string to_string() const;
  double re_double() const { return re_.get_d(); }
  double im_double() const { return im_.get_d(); }

 private:
  void canonicalize();

  mpq_class re_{0};
  mpq_class im_{0};
};

enum class NumberOp { Add, Mul, Pow };

// Arithmetic used by stack operations; Pow requires a != 0 and b a nonzero
// real integer.
Number combine_numbers(const Number& a, const Number& b, NumberOp op);

std::string rational_to_string(const mpq_class& q);

}  // namespace eqrl
