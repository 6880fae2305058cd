#pragma once

// Multiprecision root finding: univariate polynomials (exact square-free
// splitting followed by Aberth-Ehrlich iteration), binary forms, and the
// intersection of two plane curves.

#include "pcred/cluster.hpp"
#include "pcred/poly.hpp"

#include <cstdint>

namespace pcred {

class IntersectionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The two curves share a component, so the intersection is not finite.
class CommonComponentError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct UnivariateRoot {
  Complex value;
  int multiplicity = 1;
  Real residual;  // |p(r)| / (||p|| max(1,|r|)^deg)
};

// All complex roots of an integer polynomial at the working precision.
// Multiplicities come from an exact square-free decomposition; roots closer
// than 2^(-bits/4) are merged afterwards. Throws DomainError for constant
// input and ConvergenceError if a residual exceeds 2^(-bits/2).
std::vector<UnivariateRoot> univariate_roots(const UPoly& p);
// Same for a MultiPoly in which a single variable occurs.
std::vector<UnivariateRoot> univariate_roots(const MultiPoly& p);

// Aberth-Ehrlich on complex coefficients (coeffs[k] multiplies x^k). Returns
// deg roots; no multiplicity detection and no residual guarantee.
CVector numeric_roots(const CVector& coeffs);

// Horner evaluation; coeffs[k] multiplies x^k.
Complex evaluate(const CVector& coeffs, const Complex& x);

// Points of P^1 where a binary form vanishes, repeated by multiplicity.
// (1:0) is included with multiplicity equal to the degree drop in x.
PointCluster binary_form_roots(const MultiPoly& f);

struct IntersectionPoint {
  ProjectivePoint point;
  int multiplicity = 1;
  Real residual;
};

struct RootSet {
  std::vector<IntersectionPoint> roots;
  int total_multiplicity() const;
  Real max_residual() const;
  // Cluster with each point repeated by its multiplicity.
  PointCluster cluster() const;
};

struct IntersectionOptions {
  std::uint64_t seed = 1;
  int max_shears = 16;
};

// Relative residual max(|F(P)|/||F||, |G(P)|/||G||) for a unit-norm P.
Real intersection_residual(const MultiPoly& f, const MultiPoly& g, const CVector& p);

// All deg F * deg G intersection points of two ternary forms with
// multiplicity. Output is conjugation-closed when both inputs are real.
RootSet curve_intersection(const MultiPoly& f, const MultiPoly& g,
                           const IntersectionOptions& opts = {});

}  // namespace pcred
