#include "pipeline_oracle.hpp"

#include "pcred/io.hpp"

#include <gtest/gtest.h>

using namespace pcred;
using namespace pcred::test;

namespace {

// Undoing the transform must give back the (basis-adjusted) input exactly.
void expect_round_trip(const ReductionReport& r) {
  const IMatrix inv = unimodular_inverse(r.transform.matrix());
  const auto& before = r.adjusted_forms.empty() ? r.input_forms : r.adjusted_forms;
  ASSERT_EQ(r.reduced_forms.size(), before.size());
  for (std::size_t i = 0; i < r.reduced_forms.size(); ++i) EXPECT_EQ(substitute(r.reduced_forms[i], inv), before[i]);
}

MultiPoly product_of_lines(const std::vector<std::pair<int, int>>& lines) {
  MultiPoly f = MultiPoly::constant(2, Integer(1));
  for (auto [a, b] : lines)
    f = f * (MultiPoly::variable(2, 0) * Integer(a) + MultiPoly::variable(2, 1) * Integer(b));
  return f;
}

IMatrix with_det_one(IMatrix u) {
  if (determinant(u) < 0)
    for (std::size_t r = 0; r < u.rows(); ++r) u(r, 0) = -u(r, 0);
  return u;
}

}  // namespace

TEST(PencilPipeline, ReferencePencil) {
  const ReductionReport r = reduce_quadric_pencil(parse_poly(kPencilInput[0], 3), parse_poly(kPencilInput[1], 3));
  ASSERT_TRUE(r.binary_cubic.has_value());
  EXPECT_EQ(*r.binary_cubic, parse_poly(kPencilCubic, 2));
  EXPECT_TRUE(equal_up_to_signed_permutation(r.reduced_forms,
                                             {parse_poly(kPencilReduced[0], 3), parse_poly(kPencilReduced[1], 3)}));
  EXPECT_LE(distance_mod_scaling(r.covariant, real_to_complex(kPencilGram)), Real("1e-3"));
  EXPECT_LE(coefficient_height(r.reduced_forms), 3);
  EXPECT_LE(r.max_residual, Real("1e-40"));
  EXPECT_FALSE(r.height_warning);
  expect_round_trip(r);
  // The pencil basis change is unimodular and maps the input pair onto the adjusted pair.
  ASSERT_TRUE(r.pencil_transform.has_value());
  const IMatrix& p = r.pencil_transform->matrix();
  for (std::size_t j = 0; j < 2; ++j)
    EXPECT_EQ(r.input_forms[0] * p(0, j) + r.input_forms[1] * p(1, j), r.adjusted_forms[j]);
}

TEST(PencilPipeline, AlreadyReducedPairKeepsHeight) {
  const ReductionReport r = reduce_quadric_pencil(parse_poly("x^2 + y^2", 3), parse_poly("y^2 + z^2", 3));
  EXPECT_EQ(r.height_before, r.height_after);
  EXPECT_TRUE(equal_up_to_signed_permutation(r.reduced_forms, r.input_forms));
}

TEST(PencilPipeline, DegeneratePencilsAreRejected) {
  // A common linear factor makes every member singular.
  EXPECT_THROW(reduce_quadric_pencil(parse_poly("x y", 3), parse_poly("x z", 3)), DomainError);
  EXPECT_THROW(reduce_quadric_pencil(parse_poly("x^2 - y^2", 3), parse_poly("x z - y z", 3)), DomainError);
  EXPECT_THROW(reduce_quadric_pencil(parse_poly("x^3", 3), parse_poly("y^2", 3)), DomainError);
}

TEST(BinaryPipeline, ReducedFormIsFixed) {
  const ReductionReport r = reduce_binary_form(parse_poly("x^3 + y^3", 2));
  EXPECT_EQ(r.transform.matrix(), IMatrix::identity(2));
  EXPECT_EQ(r.reduced_forms[0], parse_poly("x^3 + y^3", 2));
}

TEST(BinaryPipeline, RepeatedRootIsUnstable) {
  EXPECT_THROW(reduce_binary_form(parse_poly("x^2 y", 2)), StabilityError);
}

TEST(BinaryPipeline, DistortedProductsComeBack) {
  Rng rng(81);
  int recovered = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::pair<int, int>> lines;
    const int deg = rng.integer(3, 5);
    while (static_cast<int>(lines.size()) < deg) {
      std::pair<int, int> l{rng.integer(-2, 2), rng.integer(-2, 2)};
      bool fresh = l != std::pair<int, int>{0, 0};
      for (auto& o : lines) fresh = fresh && l.first * o.second != l.second * o.first;
      if (fresh) lines.push_back(l);
    }
    const MultiPoly f = product_of_lines(lines);
    const MultiPoly g = substitute(f, unimodular_with_entries_up_to(rng, 2, 30));
    const ReductionReport r = reduce_binary_form(g);
    expect_round_trip(r);
    EXPECT_LE(r.height_after, r.height_before);
    if (r.height_after <= 2 * to_real(f.max_abs_coefficient())) ++recovered;
  }
  EXPECT_GE(recovered, trials - 1);
}

TEST(TernaryPipeline, FermatCubicIsFixed) {
  const ReductionReport r = reduce_ternary_form(parse_poly("x^3 + y^3 + z^3", 3));
  EXPECT_EQ(r.reduced_forms[0], parse_poly("x^3 + y^3 + z^3", 3));
  EXPECT_LE(distance_mod_scaling(r.covariant, CMatrix::identity(3)), Real("1e-20"));
  EXPECT_LE(r.gradient_norm, Real("1e-12"));
}

TEST(TernaryPipeline, CuspidalCubicIsUnstable) {
  EXPECT_THROW(reduce_ternary_form(parse_poly("y^2 z - x^3", 3)), StabilityError);
}

TEST(TernaryPipeline, OrbitInvariance) {
  Rng rng(82);
  const std::vector<std::string> cubics = {"x^3 + 2y^3 + 3z^3 - x y z", "x^3 + y^3 + z^3 + x y z + x^2 y - 2y^2 z",
                                           "x^3 - x z^2 - y^2 z + z^3"};
  for (const auto& text : cubics) {
    const MultiPoly f = parse_poly(text, 3);
    const ReductionReport a = reduce_ternary_form(f);
    for (int t = 0; t < 3; ++t) {
      const ReductionReport b = reduce_ternary_form(substitute(f, unimodular_with_entries_up_to(rng, 3, 20)));
      expect_round_trip(b);
      EXPECT_LE(gram_distance_up_to_signed_permutation(a.reduced_gram, b.reduced_gram), Real("1e-6")) << text;
      EXPECT_EQ(coefficient_height(a.reduced_forms), coefficient_height(b.reduced_forms)) << text;
    }
  }
}

TEST(ClusterPipeline, SimplexIsFixed) {
  const ReductionReport r = reduce_cluster(to_cluster({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}}));
  EXPECT_EQ(r.transform.matrix(), IMatrix::identity(3));
  EXPECT_EQ(r.covariant_method, "simplex");
}

TEST(ClusterPipeline, RejectsNonRealAndUnstable) {
  const PointCluster complex_pts = make_cluster({{Complex(1), Complex(Real(0), Real(1))},
                                                 {Complex(1), Complex(2)},
                                                 {Complex(0), Complex(1)}});
  EXPECT_THROW(reduce_cluster(complex_pts), DomainError);
  EXPECT_THROW(reduce_cluster(to_cluster({{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}})), StabilityError);
}

TEST(ClusterPipeline, ReducedCovariantIsLllReduced) {
  Rng rng(83);
  for (int t = 0; t < 15; ++t) {
    PointCluster c = to_cluster({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, -1, 2}});
    const IMatrix v = with_det_one(unimodular_with_entries_up_to(rng, 3, 50));
    // Points move contragrediently to substitution.
    const ReductionReport r = reduce_cluster(act(c, to_complex(unimodular_inverse(v).transpose())));
    EXPECT_TRUE(is_lll_reduced(GramMatrix(r.reduced_gram)));
    EXPECT_LE(r.height_after, r.height_before * (1 + Real("1e-20")));
    ASSERT_TRUE(r.reduced_cluster.has_value());
    EXPECT_LE(r.height_after, Real(4));
  }
}

TEST(Io, ClusterRoundTrip) {
  Rng rng(84);
  const PointCluster c = random_complex_cluster(rng, 2, 5);
  EXPECT_TRUE(cluster_from_json(to_json(c)).same_as(c, Real("1e-50")));
  const PointCluster exact = cluster_from_json(Json::parse(R"({"n":1,"points":[["1","1/3"],[[0,1],"2"]]})"));
  EXPECT_EQ(exact.degree(), 2u);
  EXPECT_THROW(cluster_from_json(Json::parse(R"({"n":2,"points":[["1","0"]]})")), Error);
  EXPECT_THROW(cluster_from_json(Json::parse(R"({"points":"x"})")), InputFormatError);
}

TEST(Io, PolyTransformAndGramRoundTrip) {
  Rng rng(85);
  for (int t = 0; t < 20; ++t) {
    const MultiPoly f = random_form(rng, 3, rng.integer(1, 4), 1000000);
    EXPECT_EQ(poly_from_json(to_json(f)), f);
    const IMatrix u = unimodular_with_entries_up_to(rng, 3, 1000);
    EXPECT_EQ(transform_from_json(to_json(UnimodularTransform(u))).matrix(), u);
  }
  EXPECT_EQ(poly_from_json(Json("x^2 - y z"), 3), parse_poly("x^2 - y z", 3));
  const GramMatrix g(RMatrix{{Real("2.5e11"), Real("-1.25"), Real(3)}, {Real("-1.25"), Real(7), Real("1e-3")}, {Real(3), Real("1e-3"), Real("0.3333333333333333333333333")}});
  const GramMatrix back = gram_from_json(to_json(g));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_LE(boost::multiprecision::abs(back.matrix()(i, j) - g.matrix()(i, j)), Real("1e-40"));
}

TEST(Io, ReportSchema) {
  const ReductionReport r = reduce_binary_form(parse_poly("x^4 - 3x^2 y^2 + y^4 + x y^3", 2));
  const Json j = to_json(r);
  EXPECT_EQ(j.at("schema"), "cluster-reduce/1");
  EXPECT_EQ(j.at("kind"), "binary");
  for (const char* key : {"covariant", "gram", "reduced_gram", "transform", "reduced_forms", "diagnostics"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(transform_from_json(j.at("transform")).matrix(), r.transform.matrix());
  EXPECT_NE(to_text(r).find("reduced form"), std::string::npos);
}
