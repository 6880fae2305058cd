#include "covariant_oracle.hpp"

#include <gtest/gtest.h>

using namespace pcred;
using namespace pcred::test;
namespace mp = boost::multiprecision;

TEST(HermitianFormTest, Validation) {
  CMatrix not_herm = CMatrix::identity(2);
  not_herm(0, 1) = Complex(1);
  EXPECT_THROW(HermitianForm{not_herm}, DomainError);
  CMatrix indefinite = CMatrix::identity(2);
  indefinite(1, 1) = Complex(-1);
  EXPECT_THROW(HermitianForm{indefinite}, DomainError);
  CMatrix q = CMatrix::identity(3);
  q.scale(Real(8));
  HermitianForm f(q);
  EXPECT_LT(mp::abs(determinant(f.matrix()).real() - 1), Real("1e-50"));
}

TEST(DistanceFunction, MatchesDirectEvaluation) {
  Rng rng(51);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    ScaledCluster zc = scaled_from(random_complex_cluster(rng, n, n + 1 + static_cast<std::size_t>(rng.integer(1, 4))));
    HermitianForm q = random_pd(rng, n + 1);
    EXPECT_LT(mp::abs(eval_D(zc, q) - d_direct(zc, q.matrix())), Real("1e-40"));
  }
}

TEST(DistanceFunction, SimplexMinimumValue) {
  // Unit representatives of e1, e2, e3, (1,1,1): the minimum is log 27 - (4/3) log 16.
  const Real s3 = mp::sqrt(Real(3));
  ScaledCluster zc({{Complex(1), Complex(0), Complex(0)},
                    {Complex(0), Complex(1), Complex(0)},
                    {Complex(0), Complex(0), Complex(1)},
                    {Complex(1 / s3), Complex(1 / s3), Complex(1 / s3)}});
  const Real expect = mp::log(Real(27)) - Real(4) / 3 * mp::log(Real(16));
  CovariantResult r = minimize(zc.underlying());
  EXPECT_LT(mp::abs(eval_D(zc, r.z) - expect), Real("1e-20"));
  EXPECT_LT(mp::abs(r.theta - mp::exp(expect)), Real("1e-20"));
}

TEST(DistanceFunction, InvariantUnderSl) {
  Rng rng(52);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    ScaledCluster zc = scaled_from(random_complex_cluster(rng, n, n + 3));
    HermitianForm q = random_pd(rng, n + 1);
    CMatrix h = random_sl(rng, n + 1, 1.0);
    // D(Z h, Q) = D(Z, conj(h) Q h^T)
    const Real lhs = eval_D(act(zc, h), q);
    const Real rhs = eval_D(zc, HermitianForm(conj_transpose_times(h.transpose(), q.matrix()), false));
    EXPECT_LT(mp::abs(lhs - rhs), Real("1e-9") * (1 + mp::abs(lhs)));
  }
}

TEST(DistanceFunction, GradientMatchesCentralDifferences) {
  Rng rng(53);
  const Real h = Real("1e-20");
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    ScaledCluster zc = scaled_from(random_complex_cluster(rng, n, n + 1 + static_cast<std::size_t>(rng.integer(1, 4))));
    HermitianForm q = random_pd(rng, n + 1);
    CMatrix b = random_traceless_hermitian(rng, n + 1);
    const Real fd = (eval_D_along(zc, q, b, h) - eval_D_along(zc, q, b, -h)) / (2 * h);
    const Real analytic = trace(grad_D(zc, q).matrix * b).real();
    EXPECT_LT(mp::abs(fd - analytic), Real("1e-6") * (1 + mp::abs(analytic)));
  }
}

TEST(DistanceFunction, ConvexAlongGeodesics) {
  Rng rng(54);
  const Real h = Real("1e-3");
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    ScaledCluster zc = scaled_from(random_complex_cluster(rng, n, n + 1 + static_cast<std::size_t>(rng.integer(0, 4))));
    HermitianForm q = random_pd(rng, n + 1);
    CMatrix b = random_traceless_hermitian(rng, n + 1);
    const Real lam = rng.real(-2, 2);
    const Real second = eval_D_along(zc, q, b, lam + h) + eval_D_along(zc, q, b, lam - h) - 2 * eval_D_along(zc, q, b, lam);
    EXPECT_GE(second / (h * h), Real("-1e-8"));
  }
}

TEST(Minimize, GradientVanishesAndBeatsNeighbours) {
  Rng rng(55);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    PointCluster c = stable_cluster(rng, n, n + 2 + static_cast<std::size_t>(rng.integer(0, 4)), false);
    CovariantResult r = minimize(c);
    EXPECT_TRUE(r.converged);
    ScaledCluster zc = normalize_cluster(c);
    EXPECT_LT(frobenius_norm(grad_D(zc, r.z).matrix), Real("1e-12"));
    const Real d0 = eval_D(zc, r.z);
    for (int k = 0; k < 5; ++k) {
      CMatrix b = random_traceless_hermitian(rng, n + 1);
      EXPECT_GE(eval_D_along(zc, r.z, b, Real("0.01")), d0);
    }
  }
}

TEST(Minimize, Equivariance) {
  Rng rng(56);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    PointCluster c = stable_cluster(rng, n, n + 2 + static_cast<std::size_t>(rng.integer(0, 3)), false);
    CMatrix h = random_sl(rng, n + 1, 0.7);
    const CMatrix z = minimize(c).z.matrix();
    const CMatrix zh = minimize(act(c, h)).z.matrix();
    const CMatrix g = inverse(h).transpose();
    EXPECT_LT(distance_mod_scaling(zh, conj_transpose_times(g, z)), Real("1e-6"));
  }
}

TEST(Minimize, RealClustersGiveRealCovariants) {
  Rng rng(57);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    PointCluster c = stable_cluster(rng, n, n + 2 + static_cast<std::size_t>(rng.integer(0, 4)), true);
    const CMatrix z = minimize(c).z.matrix();
    EXPECT_LT(max_abs_imag(z) / max_abs(z), Real("1e-8"));
  }
}

TEST(Minimize, RejectsNonStable) {
  PointCluster c = to_cluster({{1, 0}, {1, 0}, {0, 1}, {1, 1}});
  EXPECT_THROW(minimize(c), StabilityError);
  try {
    minimize(to_cluster({{1, 0}, {1, 0}, {0, 1}}));
  } catch (const StabilityError& e) {
    EXPECT_FALSE(e.stability().is_semi_stable);
  }
}

TEST(Minimize, TranscriptDecreases) {
  Rng rng(58);
  PointCluster c = stable_cluster(rng, 2, 7, false);
  MinimizeOptions o;
  o.record_transcript = true;
  CovariantResult r = minimize(c, o);
  ASSERT_GE(r.transcript.size(), 2u);
  for (std::size_t i = 1; i < r.transcript.size(); ++i)
    EXPECT_LE(r.transcript[i].second, r.transcript[i - 1].second + Real("1e-30"));
}

TEST(Minimize, IterationCapReportsBest) {
  Rng rng(59);
  PointCluster c = stable_cluster(rng, 3, 9, false);
  MinimizeOptions o;
  o.max_iter = 1;
  o.tol = Real("1e-40");
  try {
    minimize(c, o);
    FAIL() << "expected a convergence failure";
  } catch (const MinimizeError& e) {
    EXPECT_FALSE(e.best().converged);
    EXPECT_GT(e.best().theta, 0);
  }
}

TEST(SimplexCovariant, AgreesWithMinimizer) {
  Rng rng(60);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    PointCluster c = random_complex_cluster(rng, n, n + 2);
    EXPECT_LT(distance_mod_scaling(simplex_covariant(c).matrix(), minimize(c).z.matrix()), Real("1e-8"));
  }
  EXPECT_THROW(simplex_covariant(to_cluster({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}})), DomainError);
  EXPECT_THROW(simplex_covariant(to_cluster({{1, 0}, {0, 1}})), DomainError);
}

TEST(Theta, UnstableHasDivergentWitness) {
  PointCluster c = to_cluster({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}});
  ScaledCluster zc = normalize_cluster(c);
  ThetaResult t = theta(zc);
  EXPECT_EQ(t.value, 0);
  ASSERT_TRUE(t.witness.has_value());
  EXPECT_LT(t.witness->slope, 0);
  EXPECT_LT(eval_D_witness(zc, *t.witness, Real(20000)), Real(-10000));
  // Witness direction is trace zero and Hermitian.
  EXPECT_LT(mp::sqrt(abs2(trace(t.witness->direction))), Real("1e-50"));
  EXPECT_LT(hermitian_defect(t.witness->direction), Real("1e-50"));
}

TEST(Theta, SemiStableBoundedAlongFamily) {
  PointCluster c = to_cluster({{1, 0}, {1, 0}, {0, 1}, {1, 1}});
  ScaledCluster zc = normalize_cluster(c);
  ThetaResult t = theta(zc);
  EXPECT_GT(t.value, 0);
  EXPECT_FALSE(t.attained);
  ASSERT_TRUE(t.witness.has_value());
  EXPECT_EQ(t.witness->slope, 0);
  for (int s : {0, 1, 10, 100, 1000, 100000})
    EXPECT_GE(eval_D_witness(zc, *t.witness, Real(s)), mp::log(t.value) - Real("1e-6"));
}

TEST(Theta, StableMatchesMinimizer) {
  Rng rng(61);
  PointCluster c = stable_cluster(rng, 2, 6, false);
  ThetaResult t = theta(normalize_cluster(c));
  EXPECT_TRUE(t.attained);
  EXPECT_LT(mp::abs(t.value - minimize(c).theta), Real("1e-20"));
}

TEST(ScaledDistance, IgnoresPositiveScaling) {
  Rng rng(62);
  HermitianForm q = random_pd(rng, 3);
  CMatrix m = q.matrix();
  m.scale(Real(7));
  EXPECT_LT(scaled_distance(q.matrix(), m), Real("1e-50"));
  EXPECT_GT(scaled_distance(q.matrix(), CMatrix::identity(3)), Real("1e-3"));
}

TEST(Minimize, RandomStartsAgree) {
  Rng rng(63);
  for (int t = 0; t < 5; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    PointCluster c = stable_cluster(rng, n, n + 3, false);
    const CMatrix ref = minimize(c).z.matrix();
    for (int k = 0; k < 10; ++k) {
      MinimizeOptions o;
      o.initial = random_pd(rng, n + 1);
      EXPECT_LT(distance_mod_scaling(minimize(c, o).z.matrix(), ref), Real("1e-6"));
    }
  }
}

TEST(Theta, ScalingLaw) {
  Rng rng(64);
  for (int t = 0; t < 10; ++t) {
    PointCluster c = stable_cluster(rng, 2, 6, false);
    ScaledCluster zc = normalize_cluster(c);
    const Complex lambda = rng.complex(2);
    const Real base = theta(zc).value;
    const Real scaled = theta(zc.rescaled(static_cast<std::size_t>(rng.integer(0, 5)), lambda)).value;
    EXPECT_LT(mp::abs(scaled - abs2(lambda) * base), Real("1e-20") * scaled);
  }
}
