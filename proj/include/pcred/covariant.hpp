#pragma once

// The distance function D(Z~, Q) on positive definite Hermitian forms, its
// gradient, and its minimizer z(Z) (the covariant) with the value theta.

#include "pcred/cluster.hpp"

#include <optional>
#include <utility>

namespace pcred {

// Raised when an operation needs a stable cluster and gets something else.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, StabilityClass cls) : Error(what), cls_(std::move(cls)) {}
  const StabilityClass& stability() const { return cls_; }

 private:
  StabilityClass cls_;
};

// Positive definite Hermitian matrix, considered up to positive scaling.
class HermitianForm {
 public:
  // Validates hermiticity and positive definiteness; optionally rescales to
  // determinant 1.
  explicit HermitianForm(CMatrix m, bool normalize = true);
  static HermitianForm identity(std::size_t size) { return HermitianForm(CMatrix::identity(size)); }

  const CMatrix& matrix() const { return m_; }
  std::size_t size() const { return m_.rows(); }
  HermitianForm normalized() const;
  // Q . g = conj(g)^T Q g
  HermitianForm act(const CMatrix& g) const;
  HermitianForm conjugate() const;

 private:
  CMatrix m_;
};

// Relative Frobenius distance between a and b after scaling b optimally.
Real scaled_distance(const CMatrix& a, const CMatrix& b);

// Trace-zero Hermitian matrix.
struct TangentDirection {
  CMatrix matrix;
};

Real eval_D(const ScaledCluster& zc, const HermitianForm& q);
// Gradient along the transported curves Q(l) = S^H exp(l B) S with Q = S^H S.
TangentDirection grad_D(const ScaledCluster& zc, const HermitianForm& q);
// D along the transported curve, for finite-difference and convexity checks.
Real eval_D_along(const ScaledCluster& zc, const HermitianForm& q, const CMatrix& direction, const Real& lambda);

struct MinimizeOptions {
  Real tol = Real("1e-12");
  int max_iter = 20000;
  bool require_stable = true;
  bool warm_start = false;           // start from a closed-form covariant of n+2 points
  std::optional<HermitianForm> initial;
  bool record_transcript = false;
};

struct CovariantResult {
  HermitianForm z = HermitianForm::identity(1);
  Real theta;  // exp(min D) for unit-norm representatives
  int iterations = 0;
  Real final_gradient_norm;
  bool converged = false;
  std::vector<std::pair<int, Real>> transcript;  // (iteration, D)
};

// Carries the best iterate reached before giving up.
class MinimizeError : public ConvergenceError {
 public:
  MinimizeError(const std::string& what, CovariantResult best)
      : ConvergenceError(what), best_(std::move(best)) {}
  const CovariantResult& best() const { return best_; }

 private:
  CovariantResult best_;
};

CovariantResult minimize(const PointCluster& cluster, const MinimizeOptions& opts = {});

// Direction along which D decreases without bound (or, for a boundary
// subspace, stays flat): Q_s = exp(s B) with
//   B = -(n-k) P_L + (k+1) P_perp,
// where L is the span of the witness points and P the orthogonal projectors.
struct DivergenceWitness {
  SubspaceWitness subspace;
  std::vector<CVector> basis;  // orthonormal rows spanning L
  CMatrix direction;           // B
  int slope = 0;               // (k+1) m - (n+1) deg Z|_L, the asymptotic dD/ds
};

DivergenceWitness make_witness(const PointCluster& cluster, const SubspaceWitness& subspace,
                               const ClusterTolerances& tol = ClusterTolerances::defaults());
// D(Z~, exp(s B)) evaluated in log space so that large s stays finite. Points
// lying in L (to rank_tol) have no perpendicular component.
Real eval_D_witness(const ScaledCluster& zc, const DivergenceWitness& w, const Real& s,
                    const ClusterTolerances& tol = ClusterTolerances::defaults());

struct ThetaResult {
  Real value;              // 0 for unstable input
  bool attained = false;   // true when a minimizer was found
  StabilityClass stability;
  std::optional<DivergenceWitness> witness;
  int iterations = 0;
};

// theta(Z~) = inf_Q exp(D(Z~, Q)) for the given representatives.
ThetaResult theta(const ScaledCluster& zc, const MinimizeOptions& opts = {});

// Closed form for n+2 points in general position.
HermitianForm simplex_covariant(const PointCluster& cluster);

}  // namespace pcred
