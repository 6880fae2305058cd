#include "pcred/roots.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace pcred {

namespace mp = boost::multiprecision;

namespace {

Real max1(const Real& v) { return v > 1 ? v : Real(1); }

// Value and derivative by Horner's rule.
void horner(const CVector& c, const Complex& x, Complex& value, Complex& deriv) {
  value = Complex();
  deriv = Complex();
  for (std::size_t k = c.size(); k-- > 0;) {
    deriv = deriv * x + value;
    value = value * x + c[k];
  }
}

// Starting points on circles whose radii come from the upper convex hull of
// (k, log|c_k|). Requires c[0] != 0 and c[deg] != 0.
CVector initial_guesses(const CVector& c) {
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<int> idx;
  std::vector<Real> logs;
  for (int k = 0; k <= d; ++k) {
    Real a = c[static_cast<std::size_t>(k)].abs();
    if (a == 0) continue;
    idx.push_back(k);
    logs.push_back(mp::log(a));
  }
  // Monotone-chain upper hull.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (hull.size() >= 2) {
      std::size_t a = hull[hull.size() - 2], b = hull.back();
      Real cross = (logs[b] - logs[a]) * (idx[i] - idx[a]) - (logs[i] - logs[a]) * (idx[b] - idx[a]);
      if (cross <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  const Real two_pi = 8 * mp::atan(Real(1));
  const Real sigma = Real(7) / 10;
  CVector z;
  z.reserve(static_cast<std::size_t>(d));
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const int k0 = idx[hull[h]], k1 = idx[hull[h + 1]];
    const int len = k1 - k0;
    Real radius = mp::exp((logs[hull[h]] - logs[hull[h + 1]]) / len);
    for (int j = 0; j < len; ++j) {
      Real angle = two_pi * j / len + two_pi * static_cast<int>(h) / d + sigma;
      z.push_back(polar(radius, angle));
    }
  }
  return z;
}

CVector aberth(const CVector& c) {
  const std::size_t d = c.size() - 1;
  if (d == 1) return {-c[0] / c[1]};
  CVector z = initial_guesses(c);
  std::vector<bool> done(d, false);
  const Real eps = precision_epsilon(1.0) * 16;
  const int max_iter = 200 + 4 * static_cast<int>(working_bits());
  Complex value, deriv;
  for (int it = 0; it < max_iter; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      horner(c, z[i], value, deriv);
      if (value == Complex()) {
        done[i] = true;
        continue;
      }
      Complex sum;
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        Complex diff = z[i] - z[j];
        if (diff == Complex()) diff = Complex(eps);
        sum += Complex(1) / diff;
      }
      Complex w;
      if (deriv == Complex()) {
        w = Complex(eps * max1(z[i].abs()), eps);
      } else {
        Complex ratio = value / deriv;
        Complex den = Complex(1) - ratio * sum;
        w = den == Complex() ? ratio : ratio / den;
      }
      z[i] -= w;
      if (w.abs() <= eps * max1(z[i].abs()))
        done[i] = true;
      else
        all_done = false;
    }
    if (all_done) break;
  }
  return z;
}

void newton_polish(const CVector& c, Complex& z, int steps) {
  Complex value, deriv;
  for (int s = 0; s < steps; ++s) {
    horner(c, z, value, deriv);
    if (deriv == Complex()) return;
    Complex step = value / deriv;
    z -= step;
    if (step.abs() <= precision_epsilon(1.0) * max1(z.abs())) return;
  }
}

CVector to_complex_coeffs(const UPoly& p) {
  CVector c;
  c.reserve(p.size());
  for (const auto& v : p) c.emplace_back(to_real(v));
  return c;
}

Real coefficient_norm(const UPoly& p) {
  Real s = 0;
  for (const auto& v : p) {
    Real r = to_real(v);
    s += r * r;
  }
  return mp::sqrt(s);
}

struct Weighted {
  Complex value;
  int multiplicity;
};

// Merges entries closer than tol * max(1,|z|), weighting by multiplicity.
std::vector<Weighted> merge_close(std::vector<Weighted> items, const Real& tol) {
  std::vector<Weighted> out;
  std::vector<bool> used(items.size(), false);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (used[i]) continue;
    Complex acc = items[i].value * Real(items[i].multiplicity);
    int mult = items[i].multiplicity;
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (used[j]) continue;
      if ((items[i].value - items[j].value).abs() <= tol * max1(items[i].value.abs())) {
        used[j] = true;
        acc += items[j].value * Real(items[j].multiplicity);
        mult += items[j].multiplicity;
      }
    }
    out.push_back({acc / Real(mult), mult});
  }
  return out;
}

Real unit_normalize(CVector& v) {
  Real n = mp::sqrt(norm_squared(v));
  for (auto& x : v) x /= n;
  return n;
}

// Scales v so that its largest coordinate equals 1.
void pivot_normalize(CVector& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i].norm() > v[best].norm()) best = i;
  Complex p = v[best];
  for (auto& x : v) x /= p;
  v[best] = Complex(1);
}

}  // namespace

Complex evaluate(const CVector& coeffs, const Complex& x) {
  Complex value, deriv;
  horner(coeffs, x, value, deriv);
  return value;
}

CVector numeric_roots(const CVector& coeffs) {
  CVector c = coeffs;
  while (!c.empty() && c.back() == Complex()) c.pop_back();
  if (c.size() < 2) throw DomainError("numeric_roots: polynomial has no roots");
  CVector zeros;
  std::size_t lead_zero = 0;
  while (c[lead_zero] == Complex()) ++lead_zero;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(lead_zero));
  CVector out(lead_zero, Complex());
  if (c.size() >= 2) {
    CVector z = aberth(c);
    for (auto& r : z) newton_polish(c, r, 3);
    out.insert(out.end(), z.begin(), z.end());
  }
  return out;
}

std::vector<UnivariateRoot> univariate_roots(const UPoly& input) {
  UPoly p = input;
  trim(p);
  const int deg = degree(p);
  if (deg < 1) throw DomainError("univariate_roots: polynomial must have positive degree");

  std::vector<Weighted> found;
  for (auto& [factor, mult] : square_free_decomposition(p)) {
    UPoly f = factor;
    if (f[0] == 0) {
      found.push_back({Complex(), mult});
      f.erase(f.begin());
    }
    if (degree(f) < 1) continue;
    CVector c = to_complex_coeffs(f);
    CVector z = aberth(c);
    for (auto& r : z) {
      newton_polish(c, r, 4);
      found.push_back({r, mult});
    }
  }
  found = merge_close(std::move(found), precision_epsilon(0.25));

  const CVector full = to_complex_coeffs(p);
  const Real pnorm = coefficient_norm(p);
  const Real limit = precision_epsilon(0.5);
  std::vector<UnivariateRoot> out;
  for (auto& w : found) {
    Real res = evaluate(full, w.value).abs() / (pnorm * mp::pow(max1(w.value.abs()), deg));
    if (res >= limit)
      throw ConvergenceError("univariate_roots: residual " + format_real(res, 6) + " above threshold");
    out.push_back({w.value, w.multiplicity, res});
  }
  return out;
}

std::vector<UnivariateRoot> univariate_roots(const MultiPoly& p) {
  if (p.is_constant()) throw DomainError("univariate_roots: polynomial must have positive degree");
  std::size_t var = 0;
  for (std::size_t v = 0; v < p.nvars(); ++v)
    if (p.degree_in(v) > 0) var = v;
  return univariate_roots(to_univariate(p, var));
}

PointCluster binary_form_roots(const MultiPoly& f) {
  if (f.nvars() != 2) throw DomainError("binary_form_roots: expected two variables");
  if (f.is_zero()) throw DomainError("binary_form_roots: zero form");
  if (!f.is_homogeneous()) throw DomainError("binary_form_roots: form is not homogeneous");
  const int d = f.total_degree();
  if (d < 1) throw DomainError("binary_form_roots: degree must be positive");
  UPoly u(static_cast<std::size_t>(d) + 1);
  for (const auto& [e, c] : f.terms()) u[static_cast<std::size_t>(e[0])] = c;
  trim(u);
  const int drop = d - degree(u);
  std::vector<ProjectivePoint> pts;
  if (degree(u) > 0)
    for (const auto& r : univariate_roots(u))
      for (int k = 0; k < r.multiplicity; ++k) pts.emplace_back(CVector{r.value, Complex(1)});
  for (int k = 0; k < drop; ++k) pts.emplace_back(CVector{Complex(1), Complex()});
  return PointCluster(std::move(pts));
}

// ---------------------------------------------------------------------------
// Curve intersection

int RootSet::total_multiplicity() const {
  int s = 0;
  for (const auto& r : roots) s += r.multiplicity;
  return s;
}

Real RootSet::max_residual() const {
  Real m = 0;
  for (const auto& r : roots) m = std::max<Real>(m, r.residual);
  return m;
}

PointCluster RootSet::cluster() const {
  std::vector<ProjectivePoint> pts;
  for (const auto& r : roots)
    for (int k = 0; k < r.multiplicity; ++k) pts.push_back(r.point);
  return PointCluster(std::move(pts));
}

Real intersection_residual(const MultiPoly& f, const MultiPoly& g, const CVector& p) {
  CVector u = p;
  unit_normalize(u);
  Real rf = f.evaluate(u).abs() / f.coefficient_norm();
  Real rg = g.evaluate(u).abs() / g.coefficient_norm();
  return std::max(rf, rg);
}

namespace {

struct Gradient {
  std::vector<MultiPoly> parts;
  explicit Gradient(const MultiPoly& f) {
    for (std::size_t v = 0; v < f.nvars(); ++v) parts.push_back(f.derivative(v));
  }
};

// Newton on the 2x2 system in the affine chart of the largest coordinate.
void polish_intersection(const MultiPoly& f, const MultiPoly& g, const Gradient& df, const Gradient& dg,
                         CVector& p) {
  pivot_normalize(p);
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < 3; ++i)
    if (p[i] == Complex(1)) pivot = i;
  std::size_t a = pivot == 0 ? 1 : 0;
  std::size_t b = pivot == 2 ? 1 : 2;
  Real best = intersection_residual(f, g, p);
  const Real singular = precision_epsilon(0.25);
  for (int it = 0; it < 30; ++it) {
    Complex fv = f.evaluate(p), gv = g.evaluate(p);
    Complex fa = df.parts[a].evaluate(p), fb = df.parts[b].evaluate(p);
    Complex ga = dg.parts[a].evaluate(p), gb = dg.parts[b].evaluate(p);
    Complex det = fa * gb - fb * ga;
    Real scale = mp::sqrt((fa.norm() + fb.norm()) * (ga.norm() + gb.norm()));
    if (scale == 0 || det.abs() <= singular * scale) return;
    Complex da = (fv * gb - gv * fb) / det;
    Complex db = (fa * gv - ga * fv) / det;
    CVector q = p;
    q[a] -= da;
    q[b] -= db;
    Real r = intersection_residual(f, g, q);
    if (r > best && it > 0) return;
    p = q;
    best = r;
    if (mp::sqrt(da.norm() + db.norm()) <= precision_epsilon(1.0) * 4) return;
  }
}

// Replaces approximately conjugate pairs by exact conjugates and makes
// approximately real points exactly real.
void symmetrize(std::vector<IntersectionPoint>& roots, const Real& tol) {
  std::vector<CVector> pts;
  for (auto& r : roots) {
    CVector v = r.point.coords();
    pivot_normalize(v);
    pts.push_back(std::move(v));
  }
  auto dist = [](const CVector& x, const CVector& y) {
    Real s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]).norm();
    return mp::sqrt(s);
  };
  std::vector<bool> fixed(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (fixed[i]) continue;
    CVector c = pts[i];
    for (auto& x : c) x = x.conj();
    if (dist(c, pts[i]) <= tol) {
      for (auto& x : pts[i]) x = Complex(x.real());
      fixed[i] = true;
      continue;
    }
    std::size_t partner = roots.size();
    Real best = tol;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (fixed[j] || roots[j].multiplicity != roots[i].multiplicity) continue;
      Real dj = dist(c, pts[j]);
      if (dj <= best) {
        best = dj;
        partner = j;
      }
    }
    if (partner == roots.size()) continue;
    pts[partner] = c;
    fixed[i] = fixed[partner] = true;
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    unit_normalize(pts[i]);
    roots[i].point = ProjectivePoint(pts[i]);
  }
}

}  // namespace

RootSet curve_intersection(const MultiPoly& f, const MultiPoly& g, const IntersectionOptions& opts) {
  for (const MultiPoly* h : {&f, &g}) {
    if (h->nvars() != 3) throw DomainError("curve_intersection: expected ternary forms");
    if (h->is_zero() || !h->is_homogeneous() || h->total_degree() < 1)
      throw DomainError("curve_intersection: inputs must be nonconstant homogeneous forms");
  }
  const int df = f.total_degree(), dg = g.total_degree();
  const Gradient grad_f(f), grad_g(g);
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> coin(-3, 3);
  std::ostringstream diagnostics;

  for (int attempt = 0; attempt < opts.max_shears; ++attempt) {
    int a = 0, b = 0;
    if (attempt > 0) {
      a = coin(rng);
      b = coin(rng);
    }
    IMatrix shear = IMatrix::identity(3);
    shear(0, 2) = a;
    shear(1, 2) = b;
    MultiPoly fs = substitute(f, shear);
    MultiPoly gs = substitute(g, shear);
    if (fs.degree_in(2) < df || gs.degree_in(2) < dg) {
      diagnostics << "shear (" << a << "," << b << "): projection centre lies on a curve; ";
      continue;
    }
    MultiPoly res = resultant(fs, gs, 2);
    if (res.is_zero()) throw CommonComponentError("curve_intersection: the curves share a component");
    res = res.primitive_part();

    UPoly u(static_cast<std::size_t>(df * dg) + 1);
    for (const auto& [e, c] : res.terms()) u[static_cast<std::size_t>(e[0])] = c;
    trim(u);
    const int drop = df * dg - degree(u);

    struct Fiber {
      Complex x, y;
      int multiplicity;
    };
    std::vector<Fiber> fibers;
    if (degree(u) > 0)
      for (const auto& r : univariate_roots(u)) fibers.push_back({r.value, Complex(1), r.multiplicity});
    if (drop > 0) fibers.push_back({Complex(1), Complex(), drop});

    // Roots along each fiber come from the lower-degree curve; the other one
    // selects the intersection point.
    const bool use_f = df <= dg;
    const MultiPoly& along = use_f ? fs : gs;
    const MultiPoly& test = use_f ? gs : fs;
    const int along_deg = use_f ? df : dg;
    std::vector<MultiPoly> zcoef;
    for (int k = 0; k <= along_deg; ++k) zcoef.push_back(along.coefficient_in(2, k));
    const Real test_norm = test.coefficient_norm();
    const Real accept = precision_epsilon(1.0 / 4);
    const Real separation = precision_epsilon(1.0 / 8);

    std::vector<IntersectionPoint> points;
    bool ok = true;
    for (const auto& fib : fibers) {
      CVector base{fib.x, fib.y, Complex()};
      CVector c;
      for (const auto& zk : zcoef) c.push_back(zk.evaluate(base));
      std::vector<Weighted> zs;
      for (auto& z : numeric_roots(c)) zs.push_back({z, 1});
      zs = merge_close(std::move(zs), precision_epsilon(0.25));
      // The intersection point is the fiber root where the other curve is
      // smallest; it must be small in absolute terms and well separated from
      // every other root's value.
      std::vector<std::pair<Real, CVector>> scored;
      for (const auto& z : zs) {
        CVector p{fib.x, fib.y, z.value};
        unit_normalize(p);
        scored.emplace_back(test.evaluate(p).abs() / test_norm, std::move(p));
      }
      std::sort(scored.begin(), scored.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
      std::size_t count = 0;
      if (scored.front().first < accept) {
        count = 1;
        const Real gap = std::max<Real>(scored.front().first, precision_epsilon(1.0)) / separation;
        for (std::size_t k = 1; k < scored.size(); ++k)
          if (scored[k].first <= gap) ++count;
      }
      if (count != 1) {
        diagnostics << "shear (" << a << "," << b << "): fiber over (" << format_complex(fib.x, 8) << ":"
                    << format_complex(fib.y, 8) << ") has " << count << " candidates; ";
        ok = false;
        break;
      }
      std::vector<CVector> candidates{scored.front().second};
      // Back to the original coordinates: P = P' S^T.
      const CVector& q = candidates.front();
      CVector p{q[0] + Real(a) * q[2], q[1] + Real(b) * q[2], q[2]};
      polish_intersection(f, g, grad_f, grad_g, p);
      unit_normalize(p);
      points.push_back({ProjectivePoint(p), fib.multiplicity, Real(0)});
    }
    if (!ok) continue;

    symmetrize(points, precision_epsilon(0.25));
    const Real limit = precision_epsilon(0.25);
    for (auto& pt : points) {
      pt.residual = intersection_residual(f, g, pt.point.coords());
      if (pt.residual >= limit)
        throw IntersectionError("curve_intersection: residual " + format_real(pt.residual, 6) +
                                " above threshold");
    }
    RootSet out;
    out.roots = std::move(points);
    return out;
  }
  throw IntersectionError("curve_intersection: could not separate intersection points; " + diagnostics.str());
}

}  // namespace pcred
