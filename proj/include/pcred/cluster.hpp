#pragma once

// Point clusters (positive zero-cycles) in P^n(C): representation, the
// SL(n+1) action on coordinates, and the split / semi-stable / stable
// classification through the subspace-degree function phi.

#include "pcred/matrix.hpp"

#include <optional>
#include <vector>

namespace pcred {

class InvalidPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Numerical thresholds for span and point comparisons. Both default to
// 10^(-d/2) where d is the working precision in decimal digits.
struct ClusterTolerances {
  Real rank_tol;
  Real point_tol;

  static ClusterTolerances defaults();
};

class ProjectivePoint {
 public:
  explicit ProjectivePoint(CVector coords);

  std::size_t dimension() const { return coords_.size() - 1; }
  const CVector& coords() const { return coords_; }

  // True when the coordinate vectors are proportional up to an angle < tol.
  bool equals(const ProjectivePoint& other, const Real& tol) const;

 private:
  CVector coords_;
};

// Multiset of points in a common P^n. Multiplicity is repetition.
class PointCluster {
 public:
  explicit PointCluster(std::vector<ProjectivePoint> points);

  std::size_t dimension() const { return points_.front().dimension(); }
  std::size_t degree() const { return points_.size(); }
  const std::vector<ProjectivePoint>& points() const { return points_; }
  const ProjectivePoint& operator[](std::size_t i) const { return points_[i]; }

  // Multiset equality up to point_tol.
  bool same_as(const PointCluster& other, const Real& point_tol) const;

 private:
  std::vector<ProjectivePoint> points_;
};

PointCluster make_cluster(const std::vector<CVector>& rows);

// A cluster together with explicit coordinate rows (defined up to rescalings
// of the rows whose product is 1).
class ScaledCluster {
 public:
  explicit ScaledCluster(std::vector<CVector> reps);

  std::size_t dimension() const { return reps_.front().size() - 1; }
  std::size_t degree() const { return reps_.size(); }
  const std::vector<CVector>& reps() const { return reps_; }

  PointCluster underlying() const;
  // Multiplies row `index` by lambda.
  ScaledCluster rescaled(std::size_t index, const Complex& lambda) const;
  bool same_as(const ScaledCluster& other, const Real& tol) const;

 private:
  std::vector<CVector> reps_;
};

// Unit-norm representatives.
ScaledCluster normalize_cluster(const PointCluster& cluster);
ScaledCluster scaled_from(const PointCluster& cluster);

// P -> P g for every row. g must be square with determinant 1.
PointCluster act(const PointCluster& cluster, const CMatrix& g);
ScaledCluster act(const ScaledCluster& cluster, const CMatrix& g);
PointCluster conjugate(const PointCluster& cluster);
ScaledCluster conjugate(const ScaledCluster& cluster);
bool is_conjugation_fixed(const PointCluster& cluster, const Real& point_tol);

// A linear subspace described by cluster points spanning it.
struct SubspaceWitness {
  std::vector<std::size_t> spanning;  // indices into the cluster
  int dimension = -1;                 // projective dimension of the span
  int contained = 0;                  // cluster points (with multiplicity) inside
};

struct PhiValue {
  int value = 0;
  SubspaceWitness subspace;
};

// Maximum number of points (with multiplicity) in a k-dimensional linear
// subspace, -1 <= k <= n.
int phi(const PointCluster& cluster, int k, const ClusterTolerances& tol = ClusterTolerances::defaults());
PhiValue phi_with_witness(const PointCluster& cluster, int k,
                          const ClusterTolerances& tol = ClusterTolerances::defaults());

struct StabilityClass {
  bool is_split = false;
  bool is_semi_stable = false;
  bool is_stable = false;
  // Subspace with the smallest slack (k+1) m - (n+1) deg Z|_L; set when the
  // cluster is not stable.
  std::optional<SubspaceWitness> witness;
  // Disjoint parts for split clusters (the second may be empty when the
  // points lie in a proper subspace).
  std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> split_parts;
  std::vector<int> phi;  // phi(0..n)
  // min over 0 <= k < n of ((k+1) m - (n+1) phi(k)) / (n+1); positive iff stable.
  double margin = 0;
};

StabilityClass classify(const PointCluster& cluster, const ClusterTolerances& tol = ClusterTolerances::defaults());

// Distinct points and their multiplicities, as indices of first occurrences.
struct DistinctPoints {
  std::vector<std::size_t> first_index;
  std::vector<int> multiplicity;
  std::vector<std::size_t> group_of;  // for each cluster point, its group
};
DistinctPoints distinct_points(const PointCluster& cluster, const Real& point_tol);

}  // namespace pcred
