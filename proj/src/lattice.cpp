#include "pcred/lattice.hpp"

#include <algorithm>

namespace pcred {

namespace mp = boost::multiprecision;

namespace {

struct Gso {
  std::vector<std::vector<Real>> mu;
  std::vector<Real> r;  // squared lengths of the Gram-Schmidt vectors
};

Gso gram_schmidt(const RMatrix& g) {
  const std::size_t n = g.rows();
  Gso s;
  s.mu.assign(n, std::vector<Real>(n, Real(0)));
  s.r.assign(n, Real(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Real v = g(i, j);
      for (std::size_t l = 0; l < j; ++l) v -= s.mu[j][l] * s.mu[i][l] * s.r[l];
      s.mu[i][j] = v / s.r[j];
    }
    Real v = g(i, i);
    for (std::size_t l = 0; l < i; ++l) v -= s.mu[i][l] * s.mu[i][l] * s.r[l];
    if (v <= 0) throw DomainError("Gram matrix is not positive definite");
    s.r[i] = v;
    s.mu[i][i] = 1;
  }
  return s;
}

void negate_column(IMatrix& u, std::size_t c) {
  for (std::size_t i = 0; i < u.rows(); ++i) u(i, c) = -u(i, c);
}

}  // namespace

GramMatrix::GramMatrix(RMatrix m) {
  if (!m.square() || m.rows() == 0) throw DomainError("Gram matrix must be a nonempty square matrix");
  Real scale = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) scale = std::max<Real>(scale, mp::abs(m(i, j)));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (mp::abs(m(i, j) - m(j, i)) > half_precision_tolerance() * scale)
        throw DomainError("Gram matrix is not symmetric");
      Real avg = (m(i, j) + m(j, i)) / 2;
      m(i, j) = avg;
      m(j, i) = avg;
    }
  gram_schmidt(m);
  m_ = std::move(m);
}

UnimodularTransform::UnimodularTransform(IMatrix m) {
  if (!m.square() || m.rows() == 0) throw DomainError("unimodular transform must be a nonempty square matrix");
  Integer d = pcred::determinant(m);
  if (d != 1 && d != -1) throw DomainError("transform is not unimodular (determinant " + d.str() + ")");
  det_ = d == 1 ? 1 : -1;
  m_ = std::move(m);
}

UnimodularTransform UnimodularTransform::inverse() const { return UnimodularTransform(unimodular_inverse(m_)); }

RMatrix congruence(const RMatrix& g, const IMatrix& u) {
  RMatrix ur = to_real(u);
  return ur.transpose() * g * ur;
}

LllResult lll_reduce(const GramMatrix& input, const Real& delta) {
  if (delta <= Real(1) / 4 || delta >= 1) throw DomainError("LLL parameter must lie in (1/4, 1)");
  const RMatrix& g0 = input.matrix();
  const std::size_t n = g0.rows();
  IMatrix u = IMatrix::identity(n);
  RMatrix g = g0;
  Gso s = gram_schmidt(g);
  int swaps = 0;
  const Real half = Real(1) / 2;

  // Reduces column k against columns k-1..0, then refreshes the data from the
  // exact transform.
  auto size_reduce = [&](std::size_t k) {
    for (int pass = 0; pass < 8; ++pass) {
      bool changed = false;
      for (std::size_t j = k; j-- > 0;) {
        Integer q = round_half_even(s.mu[k][j]);
        if (q == 0) continue;
        changed = true;
        for (std::size_t i = 0; i < n; ++i) u(i, k) -= q * u(i, j);
        const Real qr = to_real(q);
        for (std::size_t l = 0; l < j; ++l) s.mu[k][l] -= qr * s.mu[j][l];
        s.mu[k][j] -= qr;
      }
      if (!changed) return;
      g = congruence(g0, u);
      s = gram_schmidt(g);
      bool ok = true;
      for (std::size_t j = 0; j < k; ++j)
        if (mp::abs(s.mu[k][j]) > half) ok = false;
      if (ok) return;
    }
  };

  std::size_t k = 1;
  while (k < n) {
    size_reduce(k);
    const Real& m = s.mu[k][k - 1];
    if (s.r[k] < (delta - m * m) * s.r[k - 1]) {
      for (std::size_t i = 0; i < n; ++i) std::swap(u(i, k), u(i, k - 1));
      ++swaps;
      g = congruence(g0, u);
      s = gram_schmidt(g);
      k = std::max<std::size_t>(k - 1, 1);
    } else {
      ++k;
    }
  }

  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      if (u(i, c) == 0) continue;
      if (u(i, c) < 0) negate_column(u, c);
      break;
    }
  if (pcred::determinant(u) < 0) negate_column(u, n - 1);

  return {GramMatrix(congruence(g0, u)), UnimodularTransform(std::move(u)), swaps};
}

bool is_lll_reduced(const GramMatrix& g, const Real& delta, const Real& slack) {
  Gso s = gram_schmidt(g.matrix());
  const std::size_t n = g.size();
  const Real half = Real(1) / 2;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (mp::abs(s.mu[i][j]) > half * (1 + slack)) return false;
    const Real& m = s.mu[i][i - 1];
    if (s.r[i] < (delta - m * m) * s.r[i - 1] * (1 - slack)) return false;
  }
  return true;
}

}  // namespace pcred
