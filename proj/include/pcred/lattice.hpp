#pragma once

// LLL reduction of positive definite real quadratic forms given by their
// Gram matrix, with exact tracking of the unimodular change of basis.

#include "pcred/matrix.hpp"

#include <utility>

namespace pcred {

class GramMatrix {
 public:
  // Checks symmetry (relative half-precision) and positive definiteness.
  explicit GramMatrix(RMatrix m);
  const RMatrix& matrix() const { return m_; }
  std::size_t size() const { return m_.rows(); }

 private:
  RMatrix m_;
};

class UnimodularTransform {
 public:
  // Throws DomainError unless m is square with determinant +1 or -1.
  explicit UnimodularTransform(IMatrix m);
  static UnimodularTransform identity(std::size_t n) { return UnimodularTransform(IMatrix::identity(n)); }
  const IMatrix& matrix() const { return m_; }
  std::size_t size() const { return m_.rows(); }
  int determinant() const { return det_; }
  UnimodularTransform inverse() const;

 private:
  IMatrix m_;
  int det_ = 1;
};

// U^T G U
RMatrix congruence(const RMatrix& g, const IMatrix& u);

struct LllResult {
  GramMatrix gram;
  UnimodularTransform transform;
  int swaps = 0;
};

// Columns of U are the new basis vectors in terms of the old ones, so the
// reduced Gram matrix is U^T G U. Size reduction rounds half to even; equal
// sides of the Lovasz comparison do not trigger a swap. Afterwards the first
// nonzero entry of each column of U is made positive and, if det U = -1, the
// last column is negated.
LllResult lll_reduce(const GramMatrix& g, const Real& delta = Real("0.99"));

// Size reduction |mu_ij| <= 1/2 and the Lovasz condition, each with relative
// slack `slack`.
bool is_lll_reduced(const GramMatrix& g, const Real& delta = Real("0.99"), const Real& slack = Real("1e-9"));

}  // namespace pcred
