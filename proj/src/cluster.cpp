#include "pcred/cluster.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace pcred {

namespace mp = boost::multiprecision;

ClusterTolerances ClusterTolerances::defaults() {
  return {half_precision_tolerance(), half_precision_tolerance()};
}

ProjectivePoint::ProjectivePoint(CVector coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidPointError("projective point needs at least one coordinate");
  if (norm_squared(coords_) == 0) throw InvalidPointError("zero vector is not a projective point");
}

bool ProjectivePoint::equals(const ProjectivePoint& other, const Real& tol) const {
  if (other.coords_.size() != coords_.size()) return false;
  Real len = mp::sqrt(norm_squared(other.coords_));
  CVector unit = other.coords_;
  for (auto& c : unit) c /= len;
  std::vector<CVector> basis{std::move(unit)};
  return relative_distance_to_span(coords_, basis) < tol;
}

PointCluster::PointCluster(std::vector<ProjectivePoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw DomainError("point cluster must contain at least one point");
  for (const auto& p : points_)
    if (p.dimension() != points_.front().dimension())
      throw DomainError("cluster points live in different projective spaces");
}

bool PointCluster::same_as(const PointCluster& other, const Real& point_tol) const {
  if (other.degree() != degree() || other.dimension() != dimension()) return false;
  std::vector<bool> used(degree(), false);
  for (const auto& p : points_) {
    bool matched = false;
    for (std::size_t j = 0; j < other.degree(); ++j) {
      if (!used[j] && p.equals(other[j], point_tol)) {
        used[j] = matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

PointCluster make_cluster(const std::vector<CVector>& rows) {
  std::vector<ProjectivePoint> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.emplace_back(r);
  return PointCluster(std::move(pts));
}

ScaledCluster::ScaledCluster(std::vector<CVector> reps) : reps_(std::move(reps)) {
  if (reps_.empty()) throw DomainError("scaled cluster must contain at least one point");
  for (const auto& r : reps_) {
    if (r.size() != reps_.front().size()) throw DomainError("representatives differ in length");
    if (r.empty() || norm_squared(r) == 0) throw InvalidPointError("zero representative");
  }
}

PointCluster ScaledCluster::underlying() const { return make_cluster(reps_); }

ScaledCluster ScaledCluster::rescaled(std::size_t index, const Complex& lambda) const {
  auto reps = reps_;
  for (auto& c : reps.at(index)) c *= lambda;
  return ScaledCluster(std::move(reps));
}

bool ScaledCluster::same_as(const ScaledCluster& other, const Real& tol) const {
  // Equal modulo rescalings with product 1: same points in the same order and
  // the product of the scale ratios equals 1.
  if (other.degree() != degree() || other.dimension() != dimension()) return false;
  Complex product(1);
  for (std::size_t j = 0; j < degree(); ++j) {
    if (!ProjectivePoint(reps_[j]).equals(ProjectivePoint(other.reps_[j]), tol)) return false;
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < reps_[j].size(); ++i)
      if (reps_[j][i].norm() > reps_[j][pivot].norm()) pivot = i;
    product *= other.reps_[j][pivot] / reps_[j][pivot];
  }
  return (product - Complex(1)).abs() < tol;
}

ScaledCluster normalize_cluster(const PointCluster& cluster) {
  std::vector<CVector> reps;
  reps.reserve(cluster.degree());
  for (const auto& p : cluster.points()) {
    CVector v = p.coords();
    Real len = mp::sqrt(norm_squared(v));
    for (auto& c : v) c /= len;
    reps.push_back(std::move(v));
  }
  return ScaledCluster(std::move(reps));
}

ScaledCluster scaled_from(const PointCluster& cluster) {
  std::vector<CVector> reps;
  for (const auto& p : cluster.points()) reps.push_back(p.coords());
  return ScaledCluster(std::move(reps));
}

namespace {

void check_action_matrix(const CMatrix& g, std::size_t size) {
  if (!g.square() || g.rows() != size) throw DomainError("action matrix has the wrong shape");
  Real row_scale = 1;
  for (std::size_t i = 0; i < g.rows(); ++i) row_scale *= std::max<Real>(Real(1), Real(mp::sqrt(norm_squared(g.row(i)))));
  Complex det = determinant(g);
  if (det.abs() <= precision_epsilon(0.9) * row_scale) throw DomainError("action matrix is singular");
  if ((det - Complex(1)).abs() > half_precision_tolerance() * row_scale)
    throw DomainError("action matrix must have determinant 1");
}

CVector row_times(std::span<const Complex> row, const CMatrix& g) {
  CVector out(g.cols());
  for (std::size_t j = 0; j < g.cols(); ++j)
    for (std::size_t i = 0; i < row.size(); ++i) out[j] += row[i] * g(i, j);
  return out;
}

}  // namespace

ScaledCluster act(const ScaledCluster& cluster, const CMatrix& g) {
  check_action_matrix(g, cluster.dimension() + 1);
  std::vector<CVector> reps;
  reps.reserve(cluster.degree());
  for (const auto& r : cluster.reps()) reps.push_back(row_times(r, g));
  return ScaledCluster(std::move(reps));
}

PointCluster act(const PointCluster& cluster, const CMatrix& g) {
  return act(scaled_from(cluster), g).underlying();
}

ScaledCluster conjugate(const ScaledCluster& cluster) {
  std::vector<CVector> reps = cluster.reps();
  for (auto& r : reps)
    for (auto& c : r) c = c.conj();
  return ScaledCluster(std::move(reps));
}

PointCluster conjugate(const PointCluster& cluster) { return conjugate(scaled_from(cluster)).underlying(); }

bool is_conjugation_fixed(const PointCluster& cluster, const Real& point_tol) {
  return cluster.same_as(conjugate(cluster), point_tol);
}

DistinctPoints distinct_points(const PointCluster& cluster, const Real& point_tol) {
  DistinctPoints out;
  out.group_of.resize(cluster.degree());
  for (std::size_t i = 0; i < cluster.degree(); ++i) {
    std::size_t g = 0;
    for (; g < out.first_index.size(); ++g)
      if (cluster[i].equals(cluster[out.first_index[g]], point_tol)) break;
    if (g == out.first_index.size()) {
      out.first_index.push_back(i);
      out.multiplicity.push_back(0);
    }
    ++out.multiplicity[g];
    out.group_of[i] = g;
  }
  return out;
}

namespace {

struct Workspace {
  std::vector<CVector> units;  // unit-norm representatives of the distinct points
  DistinctPoints distinct;
};

Workspace make_workspace(const PointCluster& cluster, const ClusterTolerances& tol) {
  Workspace ws;
  ws.distinct = distinct_points(cluster, tol.point_tol);
  ScaledCluster normalized = normalize_cluster(cluster);
  for (auto idx : ws.distinct.first_index) ws.units.push_back(normalized.reps()[idx]);
  return ws;
}

// Points (with multiplicity) whose distance to span(basis) is below rank_tol.
int count_in_span(const Workspace& ws, const std::vector<CVector>& basis, const Real& rank_tol) {
  int count = 0;
  for (std::size_t g = 0; g < ws.units.size(); ++g)
    if (relative_distance_to_span(ws.units[g], basis) < rank_tol) count += ws.distinct.multiplicity[g];
  return count;
}

std::vector<CVector> orthonormal_of(const Workspace& ws, const std::vector<std::size_t>& groups,
                                    const Real& rank_tol) {
  std::vector<CVector> vecs;
  for (auto g : groups) vecs.push_back(ws.units[g]);
  return orthonormal_span(vecs, rank_tol);
}

PhiValue phi_search(const Workspace& ws, int k, const Real& rank_tol) {
  PhiValue best;
  best.value = 0;
  std::vector<std::size_t> chosen;
  std::vector<CVector> basis;
  const std::size_t limit = static_cast<std::size_t>(k + 1);

  // Enumerate linearly independent subsets of distinct points of size <= k+1.
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    if (!chosen.empty()) {
      int c = count_in_span(ws, basis, rank_tol);
      if (c > best.value) {
        best.value = c;
        best.subspace.spanning.clear();
        for (auto g : chosen) best.subspace.spanning.push_back(ws.distinct.first_index[g]);
        best.subspace.dimension = static_cast<int>(chosen.size()) - 1;
        best.subspace.contained = c;
      }
    }
    if (chosen.size() == limit) return;
    for (std::size_t g = start; g < ws.units.size(); ++g) {
      if (relative_distance_to_span(ws.units[g], basis) < rank_tol) continue;
      chosen.push_back(g);
      auto saved = basis;
      basis = orthonormal_of(ws, chosen, rank_tol);
      extend(g + 1);
      basis = std::move(saved);
      chosen.pop_back();
    }
  };
  extend(0);
  return best;
}

}  // namespace

PhiValue phi_with_witness(const PointCluster& cluster, int k, const ClusterTolerances& tol) {
  const int n = static_cast<int>(cluster.dimension());
  if (k < -1 || k > n) throw DomainError("phi: subspace dimension out of range");
  PhiValue out;
  if (k == -1) return out;
  Workspace ws = make_workspace(cluster, tol);
  out = phi_search(ws, k, tol.rank_tol);
  if (k == n) out.value = static_cast<int>(cluster.degree());
  return out;
}

int phi(const PointCluster& cluster, int k, const ClusterTolerances& tol) {
  return phi_with_witness(cluster, k, tol).value;
}

namespace {

// Split test via matroid connectivity: the distinct points form a
// disconnected linear matroid iff they can be partitioned into two parts with
// complementary spans. Components are read off the fundamental graph with
// respect to a greedy basis.
std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> find_split(
    const Workspace& ws, std::size_t ambient, const Real& rank_tol) {
  const std::size_t s = ws.units.size();
  std::vector<std::size_t> basis_groups;
  std::vector<CVector> basis;
  for (std::size_t g = 0; g < s; ++g) {
    if (relative_distance_to_span(ws.units[g], basis) < rank_tol) continue;
    basis_groups.push_back(g);
    basis = orthonormal_of(ws, basis_groups, rank_tol);
  }

  std::vector<std::size_t> all_groups(s);
  std::iota(all_groups.begin(), all_groups.end(), 0);
  if (basis_groups.size() < ambient) {
    // All points lie in a proper subspace; pair it with any disjoint point.
    return std::make_pair(all_groups, std::vector<std::size_t>{});
  }

  std::vector<std::size_t> parent(s);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t g = 0; g < s; ++g) {
    if (std::find(basis_groups.begin(), basis_groups.end(), g) != basis_groups.end()) continue;
    for (std::size_t b = 0; b < basis_groups.size(); ++b) {
      std::vector<std::size_t> others;
      for (std::size_t c = 0; c < basis_groups.size(); ++c)
        if (c != b) others.push_back(basis_groups[c]);
      // g depends on basis element b iff g leaves the span of the others.
      if (relative_distance_to_span(ws.units[g], orthonormal_of(ws, others, rank_tol)) >= rank_tol)
        parent[find(g)] = find(basis_groups[b]);
    }
  }
  std::size_t root = find(0);
  std::vector<std::size_t> first, second;
  for (std::size_t g = 0; g < s; ++g) (find(g) == root ? first : second).push_back(g);
  if (second.empty()) return std::nullopt;
  return std::make_pair(first, second);
}

}  // namespace

StabilityClass classify(const PointCluster& cluster, const ClusterTolerances& tol) {
  const int n = static_cast<int>(cluster.dimension());
  const int m = static_cast<int>(cluster.degree());
  Workspace ws = make_workspace(cluster, tol);

  StabilityClass out;
  out.is_semi_stable = true;
  out.is_stable = true;
  out.phi.assign(static_cast<std::size_t>(n + 1), 0);
  out.phi[static_cast<std::size_t>(n)] = m;
  int worst_slack = 0;
  bool have_worst = false;
  for (int k = 0; k < n; ++k) {
    PhiValue pv = phi_search(ws, k, tol.rank_tol);
    out.phi[static_cast<std::size_t>(k)] = pv.value;
    const int slack = (k + 1) * m - (n + 1) * pv.value;
    if (slack < 0) out.is_semi_stable = false;
    if (slack <= 0) out.is_stable = false;
    if (!have_worst || slack < worst_slack) {
      worst_slack = slack;
      have_worst = true;
      if (slack <= 0) out.witness = pv.subspace;
    }
  }
  out.margin = have_worst ? static_cast<double>(worst_slack) / (n + 1) : 0.0;
  if (!out.is_stable) {
    auto split = find_split(ws, static_cast<std::size_t>(n + 1), tol.rank_tol);
    if (split) {
      out.is_split = true;
      // Expand groups back to cluster indices.
      auto expand = [&](const std::vector<std::size_t>& groups) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < cluster.degree(); ++i)
          if (std::find(groups.begin(), groups.end(), ws.distinct.group_of[i]) != groups.end())
            idx.push_back(i);
        return idx;
      };
      out.split_parts = std::make_pair(expand(split->first), expand(split->second));
    }
  }
  return out;
}

}  // namespace pcred
