#include "pcred/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pcred {

namespace {

constexpr double kLog10Of2 = 0.30102999566398119521;

unsigned digits_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * kLog10Of2));
}

std::string trim(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(begin, end - begin + 1));
}

bool is_integer_literal(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

// Library-wide default of 212 bits, set before main runs.
const bool kDefaultPrecisionSet = [] {
  Real::default_precision(digits_for_bits(kDefaultBits));
  return true;
}();

}  // namespace

unsigned working_digits() { return Real::default_precision(); }

// What MPFR actually allocates for a fresh value; at least the requested bits.
unsigned working_bits() {
  const Real probe;
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits_(Real::default_precision()) {
  if (bits < 16) throw DomainError("precision must be at least 16 bits");
  Real::default_precision(digits_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits_); }

Real half_precision_tolerance() {
  return boost::multiprecision::pow(Real(10), -static_cast<int>(working_digits() / 2));
}

Real precision_epsilon(double fraction) {
  return boost::multiprecision::ldexp(Real(1),
                                      -static_cast<int>(std::floor(working_bits() * fraction)));
}

Real to_real(const Integer& v) {
  Real r;
  mpfr_set_z(r.backend().data(), v.backend().data(), MPFR_RNDN);
  return r;
}

Real to_real(const Rational& v) {
  Real r;
  mpfr_set_q(r.backend().data(), v.backend().data(), MPFR_RNDN);
  return r;
}

Integer parse_integer(std::string_view text) {
  std::string s = trim(text);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  if (!is_integer_literal(s)) throw InputFormatError("not an integer literal: '" + s + "'");
  return Integer(s);
}

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer num = parse_integer(s.substr(0, slash));
    Integer den = parse_integer(s.substr(slash + 1));
    if (den == 0) throw InputFormatError("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  if (is_integer_literal(s)) return Rational(parse_integer(s));
  // Exact decimal: mantissa * 10^exponent.
  std::string mantissa = s;
  long exponent = 0;
  auto e = s.find_first_of("eE");
  if (e != std::string::npos) {
    mantissa = s.substr(0, e);
    try {
      exponent = std::stol(s.substr(e + 1));
    } catch (const std::exception&) {
      throw InputFormatError("bad exponent in '" + s + "'");
    }
  }
  auto dot = mantissa.find('.');
  if (dot != std::string::npos) {
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
    mantissa.erase(dot, 1);
  }
  if (mantissa == "-" || mantissa == "+" || mantissa.empty())
    throw InputFormatError("not a number: '" + s + "'");
  Integer m = parse_integer(mantissa);
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::labs(exponent)));
  return exponent >= 0 ? Rational(m * scale) : Rational(m, scale);
}

Real parse_real(std::string_view text) {
  std::string s = trim(text);
  if (s.find('/') != std::string::npos || is_integer_literal(s)) return to_real(parse_rational(s));
  Real r;
  if (s.empty() || mpfr_set_str(r.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0)
    throw InputFormatError("not a number: '" + s + "'");
  return r;
}

Integer round_half_even(const Real& v) {
  Real r;
  mpfr_rint(r.backend().data(), v.backend().data(), MPFR_RNDN);
  Integer out;
  mpfr_get_z(out.backend().data(), r.backend().data(), MPFR_RNDN);
  return out;
}

std::string format_real(const Real& v, int digits) {
  std::ostringstream os;
  os.precision(digits > 0 ? digits : static_cast<int>(working_digits()));
  os << v;
  return os.str();
}

Complex& Complex::operator/=(const Complex& o) {
  // Smith's algorithm avoids overflow in |o|^2 for extreme exponents.
  if (boost::multiprecision::abs(o.re_) >= boost::multiprecision::abs(o.im_)) {
    if (o.re_ == 0) throw DomainError("complex division by zero");
    Real ratio = o.im_ / o.re_;
    Real den = o.re_ + o.im_ * ratio;
    Real re = (re_ + im_ * ratio) / den;
    im_ = (im_ - re_ * ratio) / den;
    re_ = std::move(re);
  } else {
    Real ratio = o.re_ / o.im_;
    Real den = o.re_ * ratio + o.im_;
    Real re = (re_ * ratio + im_) / den;
    im_ = (im_ * ratio - re_) / den;
    re_ = std::move(re);
  }
  return *this;
}

Complex polar(const Real& r, const Real& angle) {
  return {r * boost::multiprecision::cos(angle), r * boost::multiprecision::sin(angle)};
}

Complex sqrt(const Complex& z) {
  Real modulus = z.abs();
  if (modulus == 0) return {};
  Real re = boost::multiprecision::sqrt((modulus + z.real()) / 2);
  Real im = boost::multiprecision::sqrt((modulus - z.real()) / 2);
  if (z.imag() < 0) im = -im;
  return {re, im};
}

std::string format_complex(const Complex& z, int digits) {
  std::string out = format_real(z.real(), digits);
  if (z.imag() != 0) {
    std::string im = format_real(boost::multiprecision::abs(z.imag()), digits);
    out += (z.imag() < 0 ? " - " : " + ") + im + "i";
  }
  return out;
}

}  // namespace pcred
