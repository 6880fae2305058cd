#include "support.hpp"

#include <gtest/gtest.h>

using namespace pcred;
using namespace pcred::test;
namespace mp = boost::multiprecision;

TEST(Numeric, DefaultPrecision) {
  EXPECT_GE(working_bits(), 212u);
  EXPECT_LT(working_bits(), 220u);
}

TEST(Numeric, PrecisionScopeRestores) {
  const unsigned before = working_bits();
  {
    PrecisionScope scope(424);
    EXPECT_GE(working_bits(), 424u);
    Real third = Real(1) / 3;
    EXPECT_LT(mp::abs(third * 3 - 1), Real("1e-120"));
  }
  EXPECT_EQ(working_bits(), before);
}

TEST(Numeric, ParseLiterals) {
  EXPECT_EQ(parse_real("3/4"), Real(3) / 4);
  EXPECT_EQ(parse_real("-12"), Real(-12));
  EXPECT_LT(mp::abs(parse_real("1.25e3") - 1250), Real("1e-60"));
  EXPECT_EQ(parse_integer("-123456789012345678901234567890").str(), "-123456789012345678901234567890");
  EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
  EXPECT_THROW(parse_real("abc"), InputFormatError);
  EXPECT_THROW(parse_integer("1.5"), InputFormatError);
}

TEST(Numeric, RoundHalfEven) {
  EXPECT_EQ(round_half_even(Real("2.5")), 2);
  EXPECT_EQ(round_half_even(Real("3.5")), 4);
  EXPECT_EQ(round_half_even(Real("-2.5")), -2);
  EXPECT_EQ(round_half_even(Real("-2.6")), -3);
  EXPECT_EQ(round_half_even(Real("0.4999")), 0);
}

TEST(Numeric, ComplexArithmetic) {
  Complex a(Real(1), Real(2)), b(Real(3), Real(-1));
  Complex p = a * b;
  EXPECT_EQ(p.real(), 5);
  EXPECT_EQ(p.imag(), 5);
  Complex q = p / b;
  EXPECT_LT(abs2(q - a), Real("1e-120"));
  Complex r = sqrt(Complex(Real(-4)));
  EXPECT_LT(abs2(r * r + Complex(4)), Real("1e-120"));
}

TEST(Matrix, IntegerDeterminantMatchesPermutationExpansion) {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 4));
    IMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.integer(-20, 20);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Integer expect = 0;
    do {
      int inv = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
      Integer term = inv % 2 ? -1 : 1;
      for (std::size_t i = 0; i < n; ++i) term *= m(i, perm[i]);
      expect += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(determinant(m), expect);
  }
}

TEST(Matrix, UnimodularInverse) {
  Rng rng(22);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 6));
    IMatrix u = random_unimodular(rng, n, 12, 4);
    EXPECT_EQ(u * unimodular_inverse(u), IMatrix::identity(n));
  }
  IMatrix bad{{Integer(2), Integer(0)}, {Integer(0), Integer(1)}};
  EXPECT_THROW(unimodular_inverse(bad), DomainError);
}

TEST(Matrix, ComplexInverseAndCholesky) {
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
    CMatrix a = random_sl(rng, n, 1.0);
    CMatrix q = adjoint(a) * a;
    CMatrix s = cholesky_upper(q);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(abs2(s(i, j)), 0);
    EXPECT_LT(frobenius_norm(adjoint(s) * s - q), Real("1e-50") * frobenius_norm(q));
    EXPECT_LT(frobenius_norm(a * inverse(a) - CMatrix::identity(n)), Real("1e-50"));
  }
}

TEST(Matrix, HermitianEigenAndExp) {
  Rng rng(24);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
    CMatrix h = random_traceless_hermitian(rng, n);
    HermitianEigen e = hermitian_eigen(h);
    CMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = Complex(e.values[i]);
    EXPECT_LT(frobenius_norm(e.vectors * d * adjoint(e.vectors) - h), Real("1e-50"));
    for (std::size_t i = 1; i < n; ++i) EXPECT_LE(e.values[i - 1], e.values[i]);
    // Truncated Taylor series of exp as an independent reference.
    CMatrix sum = CMatrix::identity(n), term = CMatrix::identity(n);
    for (int k = 1; k < 80; ++k) {
      term = term * h;
      term.scale(Real(1) / k);
      sum += term;
    }
    EXPECT_LT(frobenius_norm(hermitian_exp(h) - sum), Real("1e-45"));
    // Trace zero: det exp = 1.
    Complex det = determinant(hermitian_exp(h));
    EXPECT_LT(abs2(det - Complex(1)), Real("1e-90"));
  }
}

TEST(Matrix, OrthonormalSpanRank) {
  std::vector<CVector> v = {{Complex(1), Complex(0), Complex(1)},
                            {Complex(2), Complex(0), Complex(2)},
                            {Complex(0), Complex(1), Complex(0)}};
  EXPECT_EQ(numerical_rank(v, half_precision_tolerance()), 2u);
  auto basis = orthonormal_span(v, half_precision_tolerance());
  ASSERT_EQ(basis.size(), 2u);
  CVector w = {Complex(3), Complex(-5), Complex(3)};
  EXPECT_LT(relative_distance_to_span(w, basis), Real("1e-50"));
  CVector out = {Complex(1), Complex(0), Complex(-1)};
  EXPECT_GT(relative_distance_to_span(out, basis), Real("0.5"));
}
