#pragma once

// Scalar types shared by every module: multiprecision reals, a small complex
// type over them, and exact integers/rationals.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace pcred {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Base of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputFormatError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Iterative or floating-point procedure failed to reach its target.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Working precision in bits. Every Real constructed while a scope is active
// carries (at least) this precision.
unsigned working_bits();
// Decimal digits corresponding to working_bits().
unsigned working_digits();

// Requested default; MPFR rounds a request up to whole decimal digits.
inline constexpr unsigned kDefaultBits = 212;
inline constexpr unsigned kHighBits = 424;

class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits_;
};

// 10^(-digits/2): the default numerical-rank and point-equality tolerance.
Real half_precision_tolerance();
// 2^(-bits * fraction)
Real precision_epsilon(double fraction = 1.0);

Real to_real(const Integer& v);
Real to_real(const Rational& v);
// Parses a decimal ("-1.25e3"), integer or rational ("3/7") literal.
Real parse_real(std::string_view text);
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);
// Round to nearest integer, ties to even.
Integer round_half_even(const Real& v);
std::string format_real(const Real& v, int digits = 0);

class Complex {
 public:
  Complex() : re_(0), im_(0) {}
  Complex(Real re) : re_(std::move(re)), im_(0) {}  // NOLINT(implicit)
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  template <class T>
    requires std::is_arithmetic_v<T>
  Complex(T re) : re_(re), im_(0) {}  // NOLINT(implicit)

  const Real& real() const { return re_; }
  const Real& imag() const { return im_; }

  Complex conj() const { return {re_, -im_}; }
  // |z|^2
  Real norm() const { return re_ * re_ + im_ * im_; }
  Real abs() const { return boost::multiprecision::hypot(re_, im_); }

  Complex& operator+=(const Complex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    return *this;
  }
  Complex& operator*=(const Real& s) {
    re_ *= s;
    im_ *= s;
    return *this;
  }
  Complex& operator/=(const Complex& o);
  Complex& operator/=(const Real& s) {
    re_ /= s;
    im_ /= s;
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator*(Complex a, const Real& s) { return a *= s; }
  friend Complex operator*(const Real& s, Complex a) { return a *= s; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator/(Complex a, const Real& s) { return a /= s; }
  friend Complex operator-(const Complex& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const Complex& a, const Complex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Real re_;
  Real im_;
};

Complex polar(const Real& r, const Real& angle);
Complex sqrt(const Complex& z);
std::string format_complex(const Complex& z, int digits = 0);

}  // namespace pcred
