#include "pcred/covariant.hpp"

#include <algorithm>
#include <functional>

namespace pcred {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// HermitianForm

HermitianForm::HermitianForm(CMatrix m, bool normalize) {
  if (!m.square() || m.rows() == 0) throw DomainError("Hermitian form must be a nonempty square matrix");
  Real scale = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) scale = std::max<Real>(scale, m(i, j).abs());
  if (hermitian_defect(m) > half_precision_tolerance() * scale)
    throw DomainError("matrix is not Hermitian");
  CMatrix h = m + adjoint(m);
  h.scale(Real(1) / 2);
  cholesky_upper(h);  // throws unless positive definite
  m_ = std::move(h);
  if (normalize) *this = normalized();
}

HermitianForm HermitianForm::normalized() const {
  Real det = determinant(m_).real();
  if (det <= 0) throw DomainError("Hermitian form is not positive definite");
  HermitianForm out = *this;
  out.m_.scale(mp::pow(det, -Real(1) / static_cast<int>(size())));
  return out;
}

HermitianForm HermitianForm::act(const CMatrix& g) const {
  if (!g.square() || g.rows() != size()) throw DomainError("transform size does not match the form");
  return HermitianForm(adjoint(g) * m_ * g, false);
}

HermitianForm HermitianForm::conjugate() const { return HermitianForm(pcred::conjugate(m_), false); }

Real scaled_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("scaled_distance: shape mismatch");
  Real ab = 0, bb = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      ab += (b(i, j).conj() * a(i, j)).real();
      bb += b(i, j).norm();
    }
  if (bb == 0) throw DomainError("scaled_distance: zero matrix");
  CMatrix diff = b;
  diff.scale(ab / bb);
  diff = a - diff;
  return frobenius_norm(diff) / frobenius_norm(a);
}

// ---------------------------------------------------------------------------
// D and its gradient

namespace {

void check_sizes(const ScaledCluster& zc, std::size_t n1) {
  if (zc.dimension() + 1 != n1) throw DomainError("cluster dimension does not match the Hermitian form");
}

// v = S p^T
CVector apply_factor(const CMatrix& s, const CVector& p) {
  CVector v(s.rows());
  for (std::size_t a = 0; a < s.rows(); ++a)
    for (std::size_t b = 0; b < s.cols(); ++b)
      if (!(s(a, b) == Complex())) v[a] += s(a, b) * p[b];
  return v;
}

CVector mat_vec(const CMatrix& m, const CVector& v) { return apply_factor(m, v); }

Real log_det_from_factor(const CMatrix& s) { return mp::log(determinant(s).norm()); }

struct Evaluation {
  Real d;
  CMatrix g;
  Real gnorm;
};

// D and G for Q = S^H S.
Evaluation evaluate(const std::vector<CVector>& reps, const CMatrix& s) {
  const std::size_t n1 = s.rows();
  const Real m = static_cast<int>(reps.size());
  Evaluation e;
  e.g = CMatrix(n1, n1);
  e.d = -m / static_cast<int>(n1) * log_det_from_factor(s);
  for (const auto& p : reps) {
    CVector v = apply_factor(s, p);
    Real nv = norm_squared(v);
    e.d += mp::log(nv);
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t b = 0; b < n1; ++b) e.g(a, b) += v[a] * v[b].conj() / nv;
  }
  for (std::size_t a = 0; a < n1; ++a) e.g(a, a) -= m / static_cast<int>(n1);
  e.gnorm = frobenius_norm(e.g);
  return e;
}

CMatrix exp_from_eigen(const HermitianEigen& eig, const Real& factor) {
  const std::size_t n = eig.values.size();
  CMatrix out(n, n);
  std::vector<Real> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = mp::exp(factor * eig.values[k]);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Complex sum;
      for (std::size_t k = 0; k < n; ++k) sum += eig.vectors(a, k) * eig.vectors(b, k).conj() * w[k];
      out(a, b) = sum;
    }
  return out;
}

std::vector<CVector> unit_reps(const PointCluster& cluster) { return normalize_cluster(cluster).reps(); }

Real sum_log_norms(const ScaledCluster& zc) {
  Real s = 0;
  for (const auto& p : zc.reps()) s += mp::log(norm_squared(p));
  return s;
}

}  // namespace

Real eval_D(const ScaledCluster& zc, const HermitianForm& q) {
  check_sizes(zc, q.size());
  return evaluate(zc.reps(), cholesky_upper(q.matrix())).d;
}

TangentDirection grad_D(const ScaledCluster& zc, const HermitianForm& q) {
  check_sizes(zc, q.size());
  return {evaluate(zc.reps(), cholesky_upper(q.matrix())).g};
}

Real eval_D_along(const ScaledCluster& zc, const HermitianForm& q, const CMatrix& direction, const Real& lambda) {
  check_sizes(zc, q.size());
  CMatrix s = cholesky_upper(q.matrix());
  HermitianEigen eig = hermitian_eigen(direction);
  CMatrix half = exp_from_eigen(eig, lambda / 2);
  return evaluate(zc.reps(), half * s).d;
}

// ---------------------------------------------------------------------------
// Minimization

namespace {

bool next_combination(std::vector<std::size_t>& idx, std::size_t m) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < m - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::optional<HermitianForm> warm_start_form(const PointCluster& cluster) {
  const std::size_t n1 = cluster.dimension() + 1;
  const std::size_t m = cluster.degree();
  if (m < n1 + 1) return std::nullopt;
  std::vector<std::size_t> idx(n1 + 1);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  int tries = 0;
  do {
    std::vector<ProjectivePoint> pts;
    for (auto i : idx) pts.push_back(cluster[i]);
    try {
      return simplex_covariant(PointCluster(pts));
    } catch (const DomainError&) {
    }
  } while (++tries < 500 && next_combination(idx, m));
  return std::nullopt;
}

struct DescentOutcome {
  CMatrix factor;
  Real d;
  Real gnorm;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<int, Real>> transcript;
};

// Real basis of the trace-zero Hermitian matrices: symmetric and
// antisymmetric off-diagonal pairs, then e_k e_k^T - e_n e_n^T.
struct TangentBasis {
  struct Element {
    std::size_t a, b;
    int kind;  // 0 symmetric pair, 1 imaginary pair, 2 diagonal difference
  };
  std::vector<Element> elems;

  explicit TangentBasis(std::size_t n1) {
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t b = a + 1; b < n1; ++b) {
        elems.push_back({a, b, 0});
        elems.push_back({a, b, 1});
      }
    for (std::size_t k = 0; k + 1 < n1; ++k) elems.push_back({k, n1 - 1, 2});
  }

  // E u
  CVector apply(const Element& e, const CVector& u) const {
    CVector w(u.size());
    const Complex i(Real(0), Real(1));
    switch (e.kind) {
      case 0:
        w[e.a] = u[e.b];
        w[e.b] = u[e.a];
        break;
      case 1:
        w[e.a] = -(i * u[e.b]);
        w[e.b] = i * u[e.a];
        break;
      default:
        w[e.a] = u[e.a];
        w[e.b] = -u[e.b];
    }
    return w;
  }

  CMatrix combine(const std::vector<Real>& x, std::size_t n1) const {
    CMatrix m(n1, n1);
    for (std::size_t k = 0; k < elems.size(); ++k) {
      const auto& e = elems[k];
      switch (e.kind) {
        case 0:
          m(e.a, e.b) += Complex(x[k]);
          m(e.b, e.a) += Complex(x[k]);
          break;
        case 1:
          m(e.a, e.b) += Complex(Real(0), -x[k]);
          m(e.b, e.a) += Complex(Real(0), x[k]);
          break;
        default:
          m(e.a, e.a) += Complex(x[k]);
          m(e.b, e.b) -= Complex(x[k]);
      }
    }
    return m;
  }
};

// Newton direction for lambda -> D(S^H exp(lambda B) S): the first derivative
// is tr(G B) and the second sum_j u_j^H B^2 u_j - (u_j^H B u_j)^2 with
// u_j = S p_j^T / |S p_j^T|. Empty when the Hessian is not safely positive
// definite.
std::optional<CMatrix> newton_direction(const std::vector<CVector>& reps, const CMatrix& s) {
  const std::size_t n1 = s.rows();
  const TangentBasis basis(n1);
  const std::size_t k = basis.elems.size();
  std::vector<std::vector<Real>> h(k, std::vector<Real>(k, Real(0)));
  std::vector<Real> g(k, Real(0));
  std::vector<CVector> w(k);
  std::vector<Real> c(k);
  for (const auto& p : reps) {
    CVector u = apply_factor(s, p);
    const Real inv = 1 / mp::sqrt(norm_squared(u));
    for (auto& x : u) x *= inv;
    for (std::size_t a = 0; a < k; ++a) {
      w[a] = basis.apply(basis.elems[a], u);
      c[a] = inner(u, w[a]).real();
      g[a] += c[a];
    }
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b <= a; ++b) h[a][b] += inner(w[a], w[b]).real() - c[a] * c[b];
  }
  // Cholesky of the (lower-stored) Hessian, then solve H x = -g.
  Real scale = 0;
  for (std::size_t a = 0; a < k; ++a) scale = std::max<Real>(scale, mp::abs(h[a][a]));
  const Real floor = scale * precision_epsilon(0.5);
  std::vector<std::vector<Real>> l(k, std::vector<Real>(k, Real(0)));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      Real v = h[a][b];
      for (std::size_t t = 0; t < b; ++t) v -= l[a][t] * l[b][t];
      if (a == b) {
        if (!(v > floor)) return std::nullopt;
        l[a][a] = mp::sqrt(v);
      } else {
        l[a][b] = v / l[b][b];
      }
    }
  }
  std::vector<Real> y(k), x(k);
  for (std::size_t a = 0; a < k; ++a) {
    Real v = -g[a];
    for (std::size_t t = 0; t < a; ++t) v -= l[a][t] * y[t];
    y[a] = v / l[a][a];
  }
  for (std::size_t a = k; a-- > 0;) {
    Real v = y[a];
    for (std::size_t t = a + 1; t < k; ++t) v -= l[t][a] * x[t];
    x[a] = v / l[a][a];
  }
  return basis.combine(x, n1);
}

// Geodesic descent with Armijo backtracking along S <- exp(t B / 2) S. The
// direction is the Newton direction when the Hessian allows it and -G
// otherwise; gradient line searches start at twice the previous step.
DescentOutcome descend(const std::vector<CVector>& reps, CMatrix s, const MinimizeOptions& opts) {
  const std::size_t n1 = s.rows();
  const Real armijo = Real("1e-4");
  const Real min_step = precision_epsilon(0.5);
  const Real m_over = Real(static_cast<int>(reps.size())) / static_cast<int>(n1);
  auto renormalize = [n1](CMatrix& f) {
    Real det2 = determinant(f).norm();
    f.scale(mp::pow(det2, -Real(1) / (2 * static_cast<int>(n1))));
  };
  renormalize(s);
  DescentOutcome out;
  Evaluation e = evaluate(reps, s);
  Real grad_step = Real(1) / 2;
  int it = 0;

  // Tries steps t, t/2, ... along b; slope is tr(G b) < 0.
  auto line_search = [&](const CMatrix& b, const Real& slope, Real t) -> std::optional<Real> {
    HermitianEigen eig = hermitian_eigen(b);
    while (t >= min_step) {
      CMatrix half = exp_from_eigen(eig, t / 2);
      CMatrix trial = half * s;
      Real d = -m_over * log_det_from_factor(trial);
      for (const auto& p : reps) d += mp::log(norm_squared(mat_vec(half, apply_factor(s, p))));
      if (d <= e.d + armijo * t * slope) {
        s = std::move(trial);
        return t;
      }
      t /= 2;
    }
    return std::nullopt;
  };

  for (; it < opts.max_iter; ++it) {
    if (opts.record_transcript) out.transcript.emplace_back(it, e.d);
    if (e.gnorm <= opts.tol) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    if (auto b = newton_direction(reps, s)) {
      const Real slope = trace(e.g * *b).real();
      if (slope < 0) accepted = line_search(*b, slope, Real(1)).has_value();
    }
    if (!accepted) {
      CMatrix b = e.g;
      b.scale(Real(-1));
      grad_step = std::min<Real>(grad_step * 2, Real(1e6));
      if (auto t = line_search(b, -e.gnorm * e.gnorm, grad_step)) {
        grad_step = *t;
        accepted = true;
      }
    }
    if (!accepted) break;  // no further decrease representable at this precision
    renormalize(s);
    e = evaluate(reps, s);
  }
  out.factor = std::move(s);
  out.d = e.d;
  out.gnorm = e.gnorm;
  out.iterations = it;
  return out;
}

CMatrix initial_factor(const PointCluster& cluster, const MinimizeOptions& opts) {
  const std::size_t n1 = cluster.dimension() + 1;
  if (opts.initial) {
    if (opts.initial->size() != n1) throw DomainError("initial form has the wrong size");
    return cholesky_upper(opts.initial->matrix());
  }
  if (opts.warm_start)
    if (auto q = warm_start_form(cluster)) return cholesky_upper(q->matrix());
  return CMatrix::identity(n1);
}

}  // namespace

CovariantResult minimize(const PointCluster& cluster, const MinimizeOptions& opts) {
  if (opts.require_stable) {
    StabilityClass cls = classify(cluster);
    if (!cls.is_stable) throw StabilityError("cluster is not stable; the covariant is undefined", cls);
  }
  const std::vector<CVector> reps = unit_reps(cluster);
  DescentOutcome d = descend(reps, initial_factor(cluster, opts), opts);
  CovariantResult r;
  r.z = HermitianForm(adjoint(d.factor) * d.factor);
  r.theta = mp::exp(d.d);
  r.iterations = d.iterations;
  r.final_gradient_norm = d.gnorm;
  r.converged = d.converged;
  r.transcript = std::move(d.transcript);
  if (!r.converged) {
    std::string what = "minimize: gradient norm " + format_real(r.final_gradient_norm, 6) +
                       " above tolerance after " + std::to_string(r.iterations) + " iterations";
    throw MinimizeError(what, std::move(r));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Divergence witness and theta

DivergenceWitness make_witness(const PointCluster& cluster, const SubspaceWitness& subspace,
                               const ClusterTolerances& tol) {
  const std::size_t n1 = cluster.dimension() + 1;
  std::vector<CVector> span;
  for (auto i : subspace.spanning) span.push_back(cluster[i].coords());
  DivergenceWitness w;
  w.subspace = subspace;
  w.basis = orthonormal_span(span, tol.rank_tol);
  const int k = static_cast<int>(w.basis.size()) - 1;
  const int n = static_cast<int>(n1) - 1;
  // B = -(n-k) P_L + (k+1) (I - P_L), with P_L = sum_i b_i^T conj(b_i).
  CMatrix b = CMatrix::identity(n1);
  b.scale(Real(k + 1));
  for (const auto& v : w.basis)
    for (std::size_t x = 0; x < n1; ++x)
      for (std::size_t y = 0; y < n1; ++y) b(x, y) -= v[x] * v[y].conj() * Real(n + 1);
  w.direction = std::move(b);
  int inside = 0;
  for (const auto& p : cluster.points())
    if (relative_distance_to_span(p.coords(), w.basis) < tol.rank_tol) ++inside;
  w.slope = (k + 1) * static_cast<int>(cluster.degree()) - (n + 1) * inside;
  return w;
}

Real eval_D_witness(const ScaledCluster& zc, const DivergenceWitness& w, const Real& s,
                    const ClusterTolerances& tol) {
  const int n = static_cast<int>(zc.dimension());
  const int k = static_cast<int>(w.basis.size()) - 1;
  Real total = 0;
  for (const auto& p : zc.reps()) {
    Real in = 0;
    for (const auto& b : w.basis) in += inner(b, p).norm();
    Real all = norm_squared(p);
    Real out = relative_distance_to_span(p, w.basis) < tol.rank_tol ? Real(0) : std::max<Real>(all - in, 0);
    // log(in e^{-s(n-k)} + out e^{s(k+1)}) without overflow.
    Real a = in > 0 ? mp::log(in) - s * (n - k) : Real(0);
    Real c = out > 0 ? mp::log(out) + s * (k + 1) : Real(0);
    if (in > 0 && out > 0) {
      Real hi = std::max(a, c), lo = std::min(a, c);
      total += hi + mp::log1p(mp::exp(lo - hi));
    } else {
      total += in > 0 ? a : c;
    }
  }
  return total;  // trace(B) = 0, so log det Q_s = 0
}

ThetaResult theta(const ScaledCluster& zc, const MinimizeOptions& opts) {
  const PointCluster cluster = zc.underlying();
  ThetaResult out;
  out.stability = classify(cluster);
  const Real shift = sum_log_norms(zc);

  if (!out.stability.is_semi_stable) {
    out.value = 0;
    out.witness = make_witness(cluster, *out.stability.witness);
    return out;
  }

  MinimizeOptions o = opts;
  o.require_stable = false;
  // Without a minimizer the gradient never vanishes; bound the effort.
  if (!out.stability.is_stable) o.max_iter = std::min(o.max_iter, 2000);
  const std::vector<CVector> reps = unit_reps(cluster);
  DescentOutcome d = descend(reps, initial_factor(cluster, o), o);
  out.iterations = d.iterations;
  Real best = d.d;
  if (out.stability.is_stable) {
    out.attained = d.converged;
  } else {
    // The infimum is approached along degenerations; the boundary subspace
    // gives a second upper bound on it.
    DivergenceWitness w = make_witness(cluster, *out.stability.witness);
    ScaledCluster unit(reps);
    Real along = eval_D_witness(unit, w, Real(1000));
    best = std::min(best, along);
    out.witness = std::move(w);
  }
  out.value = mp::exp(best + shift);
  return out;
}

// ---------------------------------------------------------------------------
// Closed form for n+2 points

HermitianForm simplex_covariant(const PointCluster& cluster) {
  const std::size_t n1 = cluster.dimension() + 1;
  if (cluster.degree() != n1 + 1) throw DomainError("simplex_covariant: expected exactly n+2 points");
  const Real tol = ClusterTolerances::defaults().rank_tol;
  CMatrix a(n1, n1);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) a(i, j) = cluster[i].coords()[j];
  std::vector<CVector> rows;
  for (std::size_t i = 0; i < n1; ++i) rows.push_back(cluster[i].coords());
  if (numerical_rank(rows, tol) < n1) throw DomainError("simplex_covariant: points are not in general position");
  // lambda A = last point.
  CMatrix ainv = inverse(a);
  const CVector& last = cluster[n1].coords();
  const Real last_norm = mp::sqrt(norm_squared(last));
  CMatrix m(n1, n1);
  for (std::size_t i = 0; i < n1; ++i) {
    Complex lambda;
    for (std::size_t j = 0; j < n1; ++j) lambda += last[j] * ainv(j, i);
    if (lambda.abs() * mp::sqrt(norm_squared(rows[i])) <= tol * last_norm)
      throw DomainError("simplex_covariant: points are not in general position");
    for (std::size_t j = 0; j < n1; ++j) m(i, j) = lambda * a(i, j);
  }
  CMatrix q0(n1, n1);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) q0(i, j) = Complex(i == j ? static_cast<int>(n1) : -1);
  CMatrix minv = inverse(m);
  return HermitianForm(conjugate(minv) * q0 * minv.transpose());
}

}  // namespace pcred
