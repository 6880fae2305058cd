#include "pcred/pipeline.hpp"

#include <algorithm>

namespace pcred {

namespace mp = boost::multiprecision;

Integer coefficient_height(const std::vector<MultiPoly>& forms) {
  Integer h = 0;
  for (const auto& f : forms) h = std::max(h, f.max_abs_coefficient());
  return h;
}

MultiPoly pencil_cubic(const MultiPoly& q1, const MultiPoly& q2) {
  IMatrix m1 = quadric_matrix(q1), m2 = quadric_matrix(q2);
  if (m1.rows() != m2.rows()) throw DomainError("pencil members have different variable counts");
  const std::size_t n = m1.rows();
  std::vector<std::vector<MultiPoly>> m(n, std::vector<MultiPoly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = MultiPoly::variable(2, 0) * m1(i, j) + MultiPoly::variable(2, 1) * m2(i, j);
  return poly_determinant(m);
}

namespace {

unsigned choose_bits(const PipelineOptions& opts, unsigned fallback) {
  return opts.prec_bits ? opts.prec_bits : fallback;
}

MinimizeOptions minimize_options(const PipelineOptions& opts) {
  MinimizeOptions m;
  m.tol = opts.tol;
  m.max_iter = opts.max_iter;
  m.warm_start = true;
  return m;
}

void require_stable(ReductionReport& report, const PointCluster& cluster) {
  report.stability = classify(cluster);
  if (!report.stability.is_stable)
    throw StabilityError("point cluster is not stable (margin " + std::to_string(report.stability.margin) + ")",
                         report.stability);
}

void run_minimize(ReductionReport& report, const PointCluster& cluster, const PipelineOptions& opts) {
  CovariantResult r = minimize(cluster, minimize_options(opts));
  report.covariant = r.z.matrix();
  report.covariant_method = "minimize";
  report.iterations = r.iterations;
  report.gradient_norm = r.final_gradient_norm;
  report.theta = r.theta;
}

// Closed form for n+2 points in general position, the minimizer otherwise.
void choose_covariant(ReductionReport& report, const PointCluster& cluster, const PipelineOptions& opts) {
  report.stability = classify(cluster);
  if (cluster.degree() == cluster.dimension() + 2) {
    try {
      report.covariant = simplex_covariant(cluster).matrix();
      report.covariant_method = "simplex";
      ScaledCluster unit = normalize_cluster(cluster);
      HermitianForm z(report.covariant);
      report.gradient_norm = frobenius_norm(grad_D(unit, z).matrix);
      report.theta = mp::exp(eval_D(unit, z));
      return;
    } catch (const DomainError&) {
      report.notes.push_back("points not in general position; using the minimizer");
    }
  }
  require_stable(report, cluster);
  run_minimize(report, cluster, opts);
}

// LLL on the real part of the covariant; fills transform and Gram fields.
void reduce_covariant(ReductionReport& report, const PipelineOptions& opts) {
  const CMatrix& z = report.covariant;
  Real scale = 0;
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j) scale = std::max<Real>(scale, z(i, j).abs());
  // The exact covariant of a conjugation-fixed cluster is real; what is left
  // of the imaginary part is solver error.
  const Real allowed = std::max<Real>(half_precision_tolerance(), opts.tol * 100);
  if (max_abs_imag(z) > allowed * scale)
    throw DomainError("covariant is not real; integral reduction needs a conjugation-fixed cluster");
  report.gram = real_part(z);
  LllResult lll = lll_reduce(GramMatrix(report.gram), opts.delta);
  report.transform = lll.transform;
  report.reduced_gram = lll.gram.matrix();
}

CMatrix contragredient(const UnimodularTransform& u) {
  return to_complex(unimodular_inverse(u.matrix()).transpose());
}

Real max_diagonal(const RMatrix& g) {
  Real m = g(0, 0);
  for (std::size_t i = 1; i < g.rows(); ++i) m = std::max<Real>(m, g(i, i));
  return m;
}

void set_form_heights(ReductionReport& report, const std::vector<MultiPoly>& before) {
  report.height_before = to_real(coefficient_height(before));
  report.height_after = to_real(coefficient_height(report.reduced_forms));
  if (report.height_after > report.height_before) {
    report.height_warning = true;
    report.notes.push_back("coefficient height increased");
  }
}

void check_form(const MultiPoly& f, std::size_t nvars, int min_degree, const char* what) {
  if (f.nvars() != nvars) throw DomainError(std::string(what) + ": wrong number of variables");
  if (f.is_zero() || !f.is_homogeneous()) throw DomainError(std::string(what) + ": expected a nonzero form");
  if (f.total_degree() < min_degree)
    throw DomainError(std::string(what) + ": degree must be at least " + std::to_string(min_degree));
}

Real form_residual(const MultiPoly& f, const CVector& p) {
  CVector u = p;
  Real n = mp::sqrt(norm_squared(u));
  for (auto& x : u) x /= n;
  return f.evaluate(u).abs() / f.coefficient_norm();
}

}  // namespace

ReductionReport reduce_cluster(const PointCluster& cluster, const PipelineOptions& opts) {
  PrecisionScope scope(choose_bits(opts, kDefaultBits));
  ReductionReport report;
  report.kind = "cluster";
  report.input_descriptor = "cluster of " + std::to_string(cluster.degree()) + " points in P^" +
                            std::to_string(cluster.dimension());
  report.precision_bits = working_bits();
  report.cluster = cluster;
  if (!is_conjugation_fixed(cluster, ClusterTolerances::defaults().point_tol))
    throw DomainError("cluster is not fixed by complex conjugation; use the covariant command for complex clusters");
  choose_covariant(report, cluster, opts);
  reduce_covariant(report, opts);
  report.reduced_cluster = act(cluster, contragredient(report.transform));
  report.height_before = max_diagonal(report.gram);
  report.height_after = max_diagonal(report.reduced_gram);
  if (report.height_after > report.height_before * (1 + half_precision_tolerance())) {
    report.height_warning = true;
    report.notes.push_back("largest Gram diagonal entry increased");
  }
  return report;
}

ReductionReport reduce_binary_form(const MultiPoly& f, const PipelineOptions& opts) {
  PrecisionScope scope(choose_bits(opts, kDefaultBits));
  check_form(f, 2, 3, "reduce_binary_form");
  ReductionReport report;
  report.kind = "binary";
  report.input_descriptor = format_poly(f);
  report.precision_bits = working_bits();
  report.input_forms = {f};
  PointCluster roots = binary_form_roots(f);
  report.cluster = roots;
  for (const auto& p : roots.points()) report.residuals.push_back(form_residual(f, p.coords()));
  report.max_residual = *std::max_element(report.residuals.begin(), report.residuals.end());
  require_stable(report, roots);
  run_minimize(report, roots, opts);
  reduce_covariant(report, opts);
  report.reduced_cluster = act(roots, contragredient(report.transform));
  report.reduced_forms = {substitute(f, report.transform.matrix())};
  set_form_heights(report, report.input_forms);
  return report;
}

ReductionReport reduce_quadric_pencil(const MultiPoly& q1, const MultiPoly& q2, const PipelineOptions& opts) {
  PrecisionScope scope(choose_bits(opts, kDefaultBits));
  check_form(q1, 3, 2, "reduce_quadric_pencil");
  check_form(q2, 3, 2, "reduce_quadric_pencil");
  if (q1.total_degree() != 2 || q2.total_degree() != 2)
    throw DomainError("reduce_quadric_pencil: expected two ternary quadrics");
  ReductionReport report;
  report.kind = "pencil";
  report.input_descriptor = format_poly(q1) + " ; " + format_poly(q2);
  report.precision_bits = working_bits();
  report.input_forms = {q1, q2};

  // (a) the binary cubic of the pencil and (b) its reduction.
  MultiPoly cubic = pencil_cubic(q1, q2);
  report.binary_cubic = cubic;
  if (cubic.is_zero()) throw DomainError("degenerate pencil: every member is singular");
  {
    UPoly u(4);
    for (const auto& [e, c] : cubic.terms()) u[static_cast<std::size_t>(e[0])] = c;
    trim(u);
    const int drop = 3 - degree(u);
    bool repeated = drop >= 2;
    if (degree(u) > 0)
      for (const auto& factor : square_free_decomposition(u))
        if (factor.multiplicity > 1) repeated = true;
    if (repeated) throw DomainError("degenerate pencil: the binary cubic has a repeated root");
  }
  ReductionReport cubic_report = reduce_binary_form(cubic, opts);
  const IMatrix& u2 = cubic_report.transform.matrix();
  report.pencil_transform = cubic_report.transform;
  report.reduced_binary_cubic = cubic_report.reduced_forms.front();
  MultiPoly p1 = q1 * u2(0, 0) + q2 * u2(1, 0);
  MultiPoly p2 = q1 * u2(0, 1) + q2 * u2(1, 1);
  report.adjusted_forms = {p1, p2};

  // (c) base points.
  IntersectionOptions io;
  io.seed = opts.seed;
  RootSet base = curve_intersection(p1, p2, io);
  for (const auto& r : base.roots) report.residuals.push_back(r.residual);
  report.max_residual = base.max_residual();
  if (base.roots.size() != 4)
    throw DomainError("degenerate pencil: " + std::to_string(base.roots.size()) + " distinct base points");
  PointCluster cluster = base.cluster();
  report.cluster = cluster;

  // (d) covariant: closed form, or the minimizer when the points are not in
  // general position.
  choose_covariant(report, cluster, opts);

  // (e) LLL and (f) substitution.
  reduce_covariant(report, opts);
  report.reduced_cluster = act(cluster, contragredient(report.transform));
  report.reduced_forms = {substitute(p1, report.transform.matrix()), substitute(p2, report.transform.matrix())};
  set_form_heights(report, report.input_forms);
  return report;
}

ReductionReport reduce_ternary_form(const MultiPoly& f, const PipelineOptions& opts) {
  check_form(f, 3, 3, "reduce_ternary_form");
  PrecisionScope scope(choose_bits(opts, f.total_degree() >= 4 ? kHighBits : kDefaultBits));
  ReductionReport report;
  report.kind = "ternary";
  report.input_descriptor = format_poly(f);
  report.precision_bits = working_bits();
  report.input_forms = {f};

  MultiPoly h = hessian(f);
  if (h.is_zero()) throw DomainError("reduce_ternary_form: the Hessian vanishes identically");
  IntersectionOptions io;
  io.seed = opts.seed;
  RootSet flexes = curve_intersection(f, h, io);

  // Singular points of the curve also lie on the Hessian; they are not
  // inflection points. A singular point meets the Hessian with multiplicity
  // at least 6, while its computed gradient only drops to about the cube root
  // of the working precision. The gradient alone is unreliable on badly
  // scaled input, so both tests are combined.
  std::vector<MultiPoly> grad;
  for (std::size_t v = 0; v < 3; ++v) grad.push_back(f.derivative(v));
  const Real fnorm = f.coefficient_norm();
  const Real loose = precision_epsilon(1.0 / 8);
  const Real tight = precision_epsilon(1.0 / 2);
  std::vector<ProjectivePoint> points;
  int removed = 0;
  for (const auto& r : flexes.roots) {
    Real g = 0;
    for (const auto& d : grad) g += d.evaluate(r.point.coords()).norm();
    const Real rel = mp::sqrt(g) / fnorm;
    if (rel < tight || (r.multiplicity >= 6 && rel < loose)) {
      removed += r.multiplicity;
      continue;
    }
    report.residuals.push_back(r.residual);
    for (int k = 0; k < r.multiplicity; ++k) points.push_back(r.point);
  }
  if (removed > 0)
    report.notes.push_back("discarded " + std::to_string(removed) +
                           " intersection points (with multiplicity) at singular points of the curve");
  if (points.empty()) throw StabilityError("the curve has no inflection points off its singular locus", {});
  report.max_residual = *std::max_element(report.residuals.begin(), report.residuals.end());
  PointCluster cluster(std::move(points));
  report.cluster = cluster;
  if (!is_conjugation_fixed(cluster, ClusterTolerances::defaults().point_tol))
    throw NumericalError("inflection cluster of a real curve is not conjugation-closed");

  choose_covariant(report, cluster, opts);
  reduce_covariant(report, opts);
  report.reduced_cluster = act(cluster, contragredient(report.transform));
  report.reduced_forms = {substitute(f, report.transform.matrix())};
  set_form_heights(report, report.input_forms);
  return report;
}

}  // namespace pcred
