#include "eqrl/number.hpp"

#include <cstdlib>

namespace eqrl {

Number::Number(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  canonicalize();
}

void Number::canonicalize() {
  re_.canonicalize();
  im_.canonicalize();
}

Number Number::rational(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  return Number(mpq_class(num, den));
}

Number Number::from_string(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad number literal: " + s);
  if (q.get_den() == 0) throw DomainError("zero denominator in " + s);
  return Number(q);
}

Number Number::operator+(const Number& o) const { return Number(re_ + o.re_, im_ + o.im_); }
Number Number::operator-(const Number& o) const { return Number(re_ - o.re_, im_ - o.im_); }

Number Number::operator*(const Number& o) const {
  if (is_real() && o.is_real()) return Number(mpq_class(re_ * o.re_));
  return Number(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
}

Number Number::reciprocal() const {
  if (is_zero()) throw DomainError("division by zero");
  if (is_real()) return Number(mpq_class(1 / re_));
  mpq_class norm = re_ * re_ + im_ * im_;
  return Number(re_ / norm, -im_ / norm);
}

Number Number::operator/(const Number& o) const { return *this * o.reciprocal(); }

Number Number::pow(long exponent) const {
  if (exponent == 0) return Number(1);
  if (is_zero()) {
    if (exponent < 0) throw DomainError("zero to a negative power");
    return Number(0);
  }
  Number base = exponent < 0 ? reciprocal() : *this;
  unsigned long e = exponent < 0 ? 0UL - static_cast<unsigned long>(exponent)
                                 : static_cast<unsigned long>(exponent);
  Number result(1);
  while (e != 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

std::strong_ordering Number::operator<=>(const Number& o) const {
  int c = cmp(re_, o.re_);
  if (c == 0) c = cmp(im_, o.im_);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::size_t Number::bit_size() const {
  auto bits = [](const mpz_class& z) { return mpz_sizeinbase(z.get_mpz_t(), 2); };
  return bits(re_.get_num()) + bits(re_.get_den()) + bits(im_.get_num()) + bits(im_.get_den());
}

bool Number::fits_within(long bound) const {
  mpq_class b(bound);
  return abs(re_) <= b && abs(im_) <= b;
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(10); }

std::string Number::to_string() const {
  if (is_real()) return rational_to_string(re_);
  std::string imag;
  mpq_class mag = abs(im_);
  if (mag == 1) {
    imag = "I";
  } else {
    imag = rational_to_string(mag) + "*I";
  }
  if (sgn(re_) == 0) {
    if (mag == 1) return sgn(im_) < 0 ? "-I" : "I";
    return std::string("(") + (sgn(im_) < 0 ? "-" : "") + imag + ")";
  }
  return "(" + rational_to_string(re_) + (sgn(im_) < 0 ? "-" : "+") + imag + ")";
}

Number combine_numbers(const Number& a, const Number& b, NumberOp op) {
  switch (op) {
    case NumberOp::Add:
      return a + b;
    case NumberOp::Mul:
      return a * b;
    case NumberOp::Pow: {
      if (a.is_zero()) throw DomainError("zero base in power");
      if (!b.is_integer() || b.is_zero()) throw DomainError("exponent must be a nonzero integer");
      if (!b.re().get_num().fits_slong_p()) throw DomainError("exponent too large");
      return a.pow(b.re().get_num().get_si());
    }
  }
  throw std::logic_error("unknown number op");
}

}  // namespace eqrl
