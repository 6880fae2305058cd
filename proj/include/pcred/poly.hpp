#pragma once

// Exact multivariate polynomials over the integers, plus the univariate
// helpers (gcd, square-free decomposition) that root finding relies on.

#include "pcred/matrix.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace pcred {

class EliminationError : public Error {
 public:
  using Error::Error;
};

using Exponent = std::vector<int>;

class MultiPoly {
 public:
  // Terms are kept in descending lexicographic order of exponents, so the
  // first term is the lex-leading one.
  using TermMap = std::map<Exponent, Integer, std::greater<>>;

  MultiPoly() = default;
  explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const Integer& c);
  static MultiPoly variable(std::size_t nvars, std::size_t index);
  static MultiPoly monomial(const Exponent& exp, const Integer& c);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  // Adds c * x^exp, dropping the term if it cancels.
  void add_term(const Exponent& exp, const Integer& c);
  Integer coefficient(const Exponent& exp) const;

  // -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(std::size_t var) const;
  bool is_homogeneous() const;
  bool is_constant() const;

  // Coefficient of var^k as a polynomial in the same ring (var exponent 0).
  MultiPoly coefficient_in(std::size_t var, int k) const;
  MultiPoly derivative(std::size_t var) const;

  Integer content() const;
  MultiPoly primitive_part() const;
  Integer max_abs_coefficient() const;

  Complex evaluate(std::span<const Complex> point) const;
  Real coefficient_norm() const;  // Euclidean norm of the coefficient vector

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const Integer& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator-(MultiPoly a) { return a *= Integer(-1); }
  friend MultiPoly operator*(MultiPoly a, const Integer& c) { return a *= c; }
  friend MultiPoly operator*(const Integer& c, MultiPoly a) { return a *= c; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  MultiPoly pow(unsigned e) const;

 private:
  void check_compatible(const MultiPoly& o) const;

  std::size_t nvars_ = 0;
  TermMap terms_;
};

// Exact quotient a / b; throws DomainError when b does not divide a.
MultiPoly divide_exact(const MultiPoly& a, const MultiPoly& b);

// Text format: "3*x0^4 - 3*x0^3*x1 + x2". Variables may also be written
// x, y, z (for x0, x1, x2); juxtaposition with spaces multiplies. nvars = 0
// infers the count from the highest variable index used.
MultiPoly parse_poly(std::string_view text, std::size_t nvars = 0);
// Uses x,y,z for up to three variables unless indexed names are requested.
std::string format_poly(const MultiPoly& p, bool indexed_names = false);

// Determinant of the 3x3 matrix of second partials.
MultiPoly hessian(const MultiPoly& f);
// Matrix of second partial derivatives of a quadratic form.
IMatrix quadric_matrix(const MultiPoly& q);

// Resultant eliminating `var`, by the subresultant PRS. The coefficients of
// the two polynomials as polynomials in var live in Z[other variables].
MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, std::size_t var);

// F(U x): row i of U gives the substitution for variable i.
MultiPoly substitute(const MultiPoly& f, const IMatrix& u);

// Determinant of a square matrix of polynomials (cofactor expansion).
MultiPoly poly_determinant(const std::vector<std::vector<MultiPoly>>& m);

// ---------------------------------------------------------------------------
// Dense univariate integer polynomials, coefficient k multiplies x^k.
using UPoly = std::vector<Integer>;

UPoly to_univariate(const MultiPoly& p, std::size_t var);
MultiPoly from_univariate(const UPoly& p, std::size_t nvars, std::size_t var);
int degree(const UPoly& p);
void trim(UPoly& p);
UPoly derivative(const UPoly& p);
Integer content(const UPoly& p);
UPoly primitive_part(const UPoly& p);
// Primitive gcd with positive leading coefficient.
UPoly gcd(const UPoly& a, const UPoly& b);
// Exact division; throws DomainError on a non-zero remainder.
UPoly divide_exact(const UPoly& a, const UPoly& b);

struct SquareFreeFactor {
  UPoly factor;
  int multiplicity;
};
// Yun's algorithm; factors are primitive and of positive degree.
std::vector<SquareFreeFactor> square_free_decomposition(const UPoly& p);

}  // namespace pcred
