#pragma once

// Seeded generators and small exact oracles shared by the test binaries.
// Nothing here calls into the routine it is used to check.

#include "pcred/cluster.hpp"
#include "pcred/covariant.hpp"
#include "pcred/poly.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace pcred::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  Real real(double lo, double hi) { return Real(uniform(lo, hi)); }
  Complex complex(double r) { return {real(-r, r), real(-r, r)}; }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------- matrices

inline IMatrix random_unimodular(Rng& rng, std::size_t n, int steps, int max_mult) {
  IMatrix u = IMatrix::identity(n);
  for (int s = 0; s < steps; ++s) {
    const std::size_t i = static_cast<std::size_t>(rng.integer(0, static_cast<int>(n) - 1));
    std::size_t j = static_cast<std::size_t>(rng.integer(0, static_cast<int>(n) - 2));
    if (j >= i) ++j;
    const int c = rng.integer(-max_mult, max_mult);
    for (std::size_t r = 0; r < n; ++r) u(r, i) += c * u(r, j);
  }
  if (rng.coin()) {
    for (std::size_t r = 0; r < n; ++r) u(r, 0) = -u(r, 0);
  }
  return u;
}

// Unimodular matrix whose largest entry is close to `bound`.
inline IMatrix unimodular_with_entries_up_to(Rng& rng, std::size_t n, long bound) {
  for (;;) {
    IMatrix u = random_unimodular(rng, n, 2 * static_cast<int>(n) + 2, 4);
    Integer top = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) top = std::max<Integer>(top, abs(u(i, j)));
    if (top >= bound / 10 && top <= bound) return u;
    if (top > bound) continue;
    // Grow with a few more shears.
    IMatrix v = random_unimodular(rng, n, 3, 6);
    IMatrix w = u * v;
    Integer t2 = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t2 = std::max<Integer>(t2, abs(w(i, j)));
    if (t2 >= bound / 10 && t2 <= bound) return w;
  }
}

// Unit lower times unit upper triangular: determinant exactly 1.
inline CMatrix random_sl(Rng& rng, std::size_t n, double r) {
  CMatrix l = CMatrix::identity(n), u = CMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      l(i, j) = rng.complex(r);
      u(j, i) = rng.complex(r);
    }
  return l * u;
}

// Random trace-zero Hermitian matrix.
inline CMatrix random_traceless_hermitian(Rng& rng, std::size_t n) {
  CMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    b(i, i) = Complex(rng.real(-1, 1));
    for (std::size_t j = 0; j < i; ++j) {
      b(i, j) = rng.complex(1);
      b(j, i) = Complex(b(i, j).real(), -b(i, j).imag());
    }
  }
  Real tr = 0;
  for (std::size_t i = 0; i < n; ++i) tr += b(i, i).real();
  for (std::size_t i = 0; i < n; ++i) b(i, i) = Complex(b(i, i).real() - tr / n);
  return b;
}

inline Complex conj(const Complex& z) { return {z.real(), -z.imag()}; }

inline Real abs2(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }

// ||a - s b||_F / ||a||_F with s the least-squares complex scale.
inline Real distance_mod_scaling(const CMatrix& a, const CMatrix& b) {
  Complex ab, bb;
  Real aa = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      ab += conj(b(i, j)) * a(i, j);
      bb += conj(b(i, j)) * b(i, j);
      aa += abs2(a(i, j));
    }
  const Complex s = ab / bb;
  Real d = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d += abs2(a(i, j) - s * b(i, j));
  return boost::multiprecision::sqrt(d / aa);
}

inline CMatrix real_to_complex(const RMatrix& m) {
  CMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = Complex(m(i, j));
  return c;
}

// ------------------------------------------------------------- exact rank

using QRow = std::vector<Rational>;

inline int exact_rank(std::vector<QRow> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<std::size_t>(rank)]);
    const QRow& p = rows[static_cast<std::size_t>(rank)];
    for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const Rational f = rows[r][c] / p[c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * p[k];
    }
    ++rank;
  }
  return rank;
}

// Brute-force stability data for integer points: every subset of distinct
// points is tried as a spanning set.
struct StabilityOracle {
  std::vector<int> phi;
  bool semi_stable = true;
  bool stable = true;
  bool split = false;
};

inline StabilityOracle stability_oracle(const std::vector<std::vector<int>>& pts) {
  const int m = static_cast<int>(pts.size());
  const int n = static_cast<int>(pts.front().size()) - 1;
  // Distinct points up to scaling, with multiplicities.
  std::vector<QRow> distinct;
  std::vector<int> mult;
  for (const auto& p : pts) {
    QRow q(p.begin(), p.end());
    bool found = false;
    for (std::size_t d = 0; d < distinct.size() && !found; ++d) {
      if (exact_rank({distinct[d], q}) == 1) {
        ++mult[d];
        found = true;
      }
    }
    if (!found) {
      distinct.push_back(q);
      mult.push_back(1);
    }
  }
  const std::size_t s = distinct.size();
  auto subset_rows = [&](unsigned mask) {
    std::vector<QRow> rows;
    for (std::size_t i = 0; i < s; ++i)
      if (mask >> i & 1U) rows.push_back(distinct[i]);
    return rows;
  };

  StabilityOracle o;
  o.phi.assign(static_cast<std::size_t>(n + 1), 0);
  for (unsigned mask = 0; mask < (1U << s); ++mask) {
    const auto rows = subset_rows(mask);
    const int r = exact_rank(rows);
    int inside = 0;
    for (std::size_t i = 0; i < s; ++i) {
      auto with = rows;
      with.push_back(distinct[i]);
      if (exact_rank(with) == r) inside += mult[i];
    }
    for (int k = std::max(r - 1, 0); k <= n; ++k)
      o.phi[static_cast<std::size_t>(k)] = std::max(o.phi[static_cast<std::size_t>(k)], inside);
  }
  for (int k = 0; k < n; ++k) {
    const int slack = (k + 1) * m - (n + 1) * o.phi[static_cast<std::size_t>(k)];
    if (slack < 0) o.semi_stable = false;
    if (slack <= 0) o.stable = false;
  }
  // Split: supported on two disjoint linear subspaces. Either everything lies
  // in a hyperplane (pair it with an outside point) or the distinct points
  // split into two parts whose spans are complementary.
  const unsigned all = (1U << s) - 1;
  if (exact_rank(subset_rows(all)) < n + 1) {
    o.split = true;
  } else {
    for (unsigned mask = 1; mask < all && !o.split; ++mask)
      if (exact_rank(subset_rows(mask)) + exact_rank(subset_rows(all & ~mask)) == n + 1) o.split = true;
  }
  return o;
}

// Random small integer cluster with plenty of coincidences and dependencies.
inline std::vector<std::vector<int>> random_integer_cluster(Rng& rng, int n, int m, int range) {
  std::vector<std::vector<int>> pts;
  while (static_cast<int>(pts.size()) < m) {
    if (!pts.empty() && rng.coin(0.25)) {
      auto p = pts[static_cast<std::size_t>(rng.integer(0, static_cast<int>(pts.size()) - 1))];
      if (rng.coin()) for (auto& c : p) c = -c;
      pts.push_back(p);
      continue;
    }
    std::vector<int> p(static_cast<std::size_t>(n + 1));
    bool nonzero = false;
    for (auto& c : p) {
      c = rng.integer(-range, range);
      nonzero = nonzero || c != 0;
    }
    if (nonzero) pts.push_back(p);
  }
  return pts;
}

inline PointCluster to_cluster(const std::vector<std::vector<int>>& pts) {
  std::vector<CVector> rows;
  for (const auto& p : pts) {
    CVector v;
    for (int c : p) v.push_back(Complex(c));
    rows.push_back(v);
  }
  return make_cluster(rows);
}

// Points with independent complex Gaussian-ish coordinates; generic.
inline PointCluster random_complex_cluster(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<CVector> rows(m, CVector(n + 1));
  for (auto& r : rows)
    for (auto& c : r) c = rng.complex(1);
  return make_cluster(rows);
}

// Real points plus conjugate pairs, so the cluster is conjugation-fixed.
inline PointCluster random_real_cluster(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<CVector> rows;
  while (rows.size() < m) {
    if (m - rows.size() >= 2 && rng.coin()) {
      CVector v(n + 1);
      for (auto& c : v) c = rng.complex(1);
      CVector w(n + 1);
      for (std::size_t i = 0; i <= n; ++i) w[i] = conj(v[i]);
      rows.push_back(v);
      rows.push_back(w);
    } else {
      CVector v(n + 1);
      for (auto& c : v) c = Complex(rng.real(-1, 1));
      rows.push_back(v);
    }
  }
  return make_cluster(rows);
}

// ---------------------------------------------------------- polynomials

inline MultiPoly random_form(Rng& rng, std::size_t nvars, int degree, int range, double density = 0.7) {
  MultiPoly f(nvars);
  Exponent e(nvars, 0);
  // Enumerate all exponent vectors of the given total degree.
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == nvars) {
      e[i] = left;
      if (rng.coin(density)) f.add_term(e, Integer(rng.integer(-range, range)));
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, degree);
  return f;
}

// Dense univariate helpers over the rationals, independent of UPoly code.
using QPoly = std::vector<Rational>;

inline QPoly qpoly(const UPoly& p) { return QPoly(p.begin(), p.end()); }

inline Rational det_rational(std::vector<QRow> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

// Res(f, g) = lc(f)^deg g * det g(C_f), with C_f the companion matrix of f.
inline Rational companion_resultant(const UPoly& f, const UPoly& g) {
  const std::size_t df = f.size() - 1, dg = g.size() - 1;
  const Rational lc = Rational(f.back());
  std::vector<QRow> comp(df, QRow(df, Rational(0)));
  for (std::size_t i = 1; i < df; ++i) comp[i][i - 1] = 1;
  for (std::size_t i = 0; i < df; ++i) comp[i][df - 1] = -Rational(f[i]) / lc;
  auto mul = [&](const std::vector<QRow>& a, const std::vector<QRow>& b) {
    std::vector<QRow> c(df, QRow(df, Rational(0)));
    for (std::size_t i = 0; i < df; ++i)
      for (std::size_t k = 0; k < df; ++k)
        for (std::size_t j = 0; j < df; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  std::vector<QRow> acc(df, QRow(df, Rational(0)));
  std::vector<QRow> power(df, QRow(df, Rational(0)));
  for (std::size_t i = 0; i < df; ++i) power[i][i] = 1;
  for (std::size_t k = 0; k <= dg; ++k) {
    for (std::size_t i = 0; i < df; ++i)
      for (std::size_t j = 0; j < df; ++j) acc[i][j] += Rational(g[k]) * power[i][j];
    power = mul(power, comp);
  }
  Rational lcp = 1;
  for (std::size_t k = 0; k < dg; ++k) lcp *= lc;
  return lcp * det_rational(acc);
}

inline UPoly random_upoly(Rng& rng, int degree, int range) {
  UPoly p(static_cast<std::size_t>(degree + 1));
  for (auto& c : p) c = rng.integer(-range, range);
  while (p.back() == 0) p.back() = rng.integer(-range, range);
  return p;
}

}  // namespace pcred::test
