#include "pcred/matrix.hpp"

#include <algorithm>
#include <numeric>

namespace pcred {

namespace mp = boost::multiprecision;

CMatrix adjoint(const CMatrix& m) {
  CMatrix a(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(j, i) = m(i, j).conj();
  return a;
}

CMatrix conjugate(const CMatrix& m) {
  CMatrix a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = m(i, j).conj();
  return a;
}

CMatrix to_complex(const RMatrix& m) {
  CMatrix a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = Complex(m(i, j));
  return a;
}

CMatrix to_complex(const IMatrix& m) { return to_complex(to_real(m)); }

RMatrix to_real(const IMatrix& m) {
  RMatrix a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = to_real(m(i, j));
  return a;
}

RMatrix real_part(const CMatrix& m) {
  RMatrix a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = m(i, j).real();
  return a;
}

Real max_abs_imag(const CMatrix& m) {
  Real best = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) best = std::max<Real>(best, Real(mp::abs(m(i, j).imag())));
  return best;
}

Real frobenius_norm(const CMatrix& m) {
  Real s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j).norm();
  return mp::sqrt(s);
}

Real frobenius_norm(const RMatrix& m) {
  Real s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
  return mp::sqrt(s);
}

Complex trace(const CMatrix& m) {
  Complex t;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
  return t;
}

namespace {

Real magnitude(const Complex& z) { return z.norm(); }
Real magnitude(const Real& x) { return mp::abs(x); }

template <class T>
T gauss_determinant(Matrix<T> a) {
  if (!a.square()) throw DomainError("determinant of non-square matrix");
  const std::size_t n = a.rows();
  T det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (magnitude(a(r, col)) > magnitude(a(pivot, col))) pivot = r;
    if (a(pivot, col) == T(0)) return T(0);
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      T f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

}  // namespace

Complex determinant(const CMatrix& m) { return gauss_determinant(m); }
Real determinant(const RMatrix& m) { return gauss_determinant(m); }

Integer determinant(const IMatrix& m) {
  if (!m.square()) throw DomainError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(r, j), a(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

CMatrix inverse(const CMatrix& m) {
  if (!m.square()) throw DomainError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  CMatrix a = m;
  CMatrix inv = CMatrix::identity(n);
  Real scale = frobenius_norm(m);
  Real tiny = scale * precision_epsilon(0.9);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (a(r, col).norm() > a(pivot, col).norm()) pivot = r;
    if (a(pivot, col).abs() <= tiny) throw DomainError("matrix is singular to working precision");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(pivot, j), a(col, j));
      std::swap(inv(pivot, j), inv(col, j));
    }
    Complex p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      Complex f = a(r, col);
      if (f == Complex()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

IMatrix unimodular_inverse(const IMatrix& m) {
  if (!m.square()) throw DomainError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix<Rational> a(n, n), inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = Rational(m(i, j));
      inv(i, j) = Rational(i == j ? 1 : 0);
    }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) throw DomainError("integer matrix is singular");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(pivot, j), a(col, j));
      std::swap(inv(pivot, j), inv(col, j));
    }
    Rational p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      Rational f = a(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  IMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (mp::denominator(inv(i, j)) != 1) throw DomainError("matrix is not unimodular");
      out(i, j) = mp::numerator(inv(i, j));
    }
  return out;
}

CMatrix cholesky_upper(const CMatrix& m) {
  if (!m.square()) throw DomainError("cholesky of non-square matrix");
  const std::size_t n = m.rows();
  CMatrix lower(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Real diag = m(j, j).real();
    for (std::size_t k = 0; k < j; ++k) diag -= lower(j, k).norm();
    if (!(diag > 0)) throw DomainError("matrix is not positive definite");
    Real root = mp::sqrt(diag);
    lower(j, j) = Complex(root);
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k).conj();
      lower(i, j) = s / root;
    }
  }
  return adjoint(lower);
}

Real hermitian_defect(const CMatrix& m) {
  Real worst = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      worst = std::max<Real>(worst, (m(i, j) - m(j, i).conj()).abs());
  return worst;
}

HermitianEigen hermitian_eigen(const CMatrix& m) {
  if (!m.square()) throw DomainError("eigen decomposition of non-square matrix");
  const std::size_t n = m.rows();
  CMatrix a = m;
  CMatrix v = CMatrix::identity(n);
  Real eps = precision_epsilon(1.0);
  Real scale = frobenius_norm(m);

  for (int sweep = 0; sweep < 100; ++sweep) {
    Real off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q).norm();
    if (mp::sqrt(off) <= eps * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Real r = a(p, q).abs();
        if (r == 0) continue;
        Complex phase = a(p, q) / r;  // e^{i alpha}
        Real app = a(p, p).real();
        Real aqq = a(q, q).real();
        Real theta = (aqq - app) / (2 * r);
        Real t = theta == 0 ? Real(1)
                            : Real((theta > 0 ? 1 : -1) / (mp::abs(theta) + mp::sqrt(theta * theta + 1)));
        Real c = 1 / mp::sqrt(t * t + 1);
        Real s = t * c;
        // U = diag(1, conj(phase)) * [[c, s], [-s, c]]
        Complex upp(c), upq(s);
        Complex uqp = phase.conj() * Real(-s);
        Complex uqq = phase.conj() * c;
        for (std::size_t i = 0; i < n; ++i) {
          Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * upp + aiq * uqp;
          a(i, q) = aip * upq + aiq * uqq;
          Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = vip * upp + viq * uqp;
          v(i, q) = vip * upq + viq * uqq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = upp.conj() * apj + uqp.conj() * aqj;
          a(q, j) = upq.conj() * apj + uqq.conj() * aqj;
        }
        a(p, q) = Complex();
        a(q, p) = Complex();
        a(p, p) = Complex(a(p, p).real());
        a(q, q) = Complex(a(q, q).real());
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigen out{std::vector<Real>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

CMatrix hermitian_exp(const CMatrix& m) {
  HermitianEigen eig = hermitian_eigen(m);
  const std::size_t n = m.rows();
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    Real e = mp::exp(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      Complex vik = eig.vectors(i, k) * e;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * eig.vectors(j, k).conj();
    }
  }
  return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw DomainError("inner product dimension mismatch");
  Complex s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].conj() * b[i];
  return s;
}

Real norm_squared(std::span<const Complex> v) {
  Real s = 0;
  for (const auto& c : v) s += c.norm();
  return s;
}

namespace {

void project_out(CVector& v, const CVector& unit) {
  Complex coeff = inner(unit, v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coeff * unit[i];
}

}  // namespace

std::vector<CVector> orthonormal_span(std::span<const CVector> vectors, const Real& rel_tol) {
  std::vector<CVector> work(vectors.begin(), vectors.end());
  std::vector<CVector> basis;
  Real max_norm = 0;
  for (const auto& v : work) max_norm = std::max<Real>(max_norm, Real(mp::sqrt(norm_squared(v))));
  if (max_norm == 0) return basis;
  std::vector<bool> used(work.size(), false);
  while (true) {
    std::size_t best = work.size();
    Real best_norm = 0;
    for (std::size_t k = 0; k < work.size(); ++k) {
      if (used[k]) continue;
      Real nk = mp::sqrt(norm_squared(work[k]));
      if (best == work.size() || nk > best_norm) {
        best = k;
        best_norm = nk;
      }
    }
    if (best == work.size() || best_norm <= rel_tol * max_norm) break;
    used[best] = true;
    CVector unit = work[best];
    for (auto& c : unit) c /= best_norm;
    for (std::size_t k = 0; k < work.size(); ++k) {
      if (used[k]) continue;
      project_out(work[k], unit);
      project_out(work[k], unit);
    }
    basis.push_back(std::move(unit));
  }
  return basis;
}

Real relative_distance_to_span(std::span<const Complex> v, std::span<const CVector> basis) {
  Real len = mp::sqrt(norm_squared(v));
  if (len == 0) return 0;
  CVector r(v.begin(), v.end());
  for (auto& c : r) c /= len;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : basis) project_out(r, e);
  return mp::sqrt(norm_squared(r));
}

std::size_t numerical_rank(std::span<const CVector> vectors, const Real& rel_tol) {
  return orthonormal_span(vectors, rel_tol).size();
}

}  // namespace pcred
