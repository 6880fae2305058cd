#include "pcred/io.hpp"

#include <sstream>

namespace pcred {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InputFormatError(what); }

Real real_from(const Json& j) {
  if (j.is_string()) return parse_real(j.get<std::string>());
  if (j.is_number_integer()) return parse_real(j.dump());
  if (j.is_number()) return parse_real(j.dump());
  bad("expected a number or numeric string, got " + j.dump());
}

Complex complex_from(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 2) bad("complex entry must be [re, im]");
    return {real_from(j[0]), real_from(j[1])};
  }
  return Complex(real_from(j));
}

Json real_json(const Real& v, int digits) { return format_real(v, digits); }

Json complex_json(const Complex& z, int digits) {
  return Json::array({format_real(z.real(), digits), format_real(z.imag(), digits)});
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::size_t size_field(const Json& j) {
  const Json& n = field(j, "n");
  if (!n.is_number_integer() || n.get<long long>() < 0) bad("'n' must be a nonnegative integer");
  return static_cast<std::size_t>(n.get<long long>());
}

CMatrix complex_matrix_from(const Json& rows, std::size_t size) {
  if (!rows.is_array() || rows.size() != size) bad("matrix must have " + std::to_string(size) + " rows");
  CMatrix m(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    if (!rows[i].is_array() || rows[i].size() != size) bad("matrix rows must have " + std::to_string(size) + " entries");
    for (std::size_t k = 0; k < size; ++k) m(i, k) = complex_from(rows[i][k]);
  }
  return m;
}

Json integer_json(const Integer& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return v.convert_to<long long>();
  return v.str();
}

Integer integer_from(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) return parse_integer(j.get<std::string>());
  bad("expected an integer, got " + j.dump());
}

Json cluster_points_json(const PointCluster& c, int digits) {
  Json pts = Json::array();
  for (const auto& p : c.points()) {
    Json row = Json::array();
    for (const auto& x : p.coords()) row.push_back(complex_json(x, digits));
    pts.push_back(std::move(row));
  }
  return pts;
}

Json complex_matrix_json(const CMatrix& m, int digits) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k), digits));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

PointCluster cluster_from_json(const Json& j) {
  const std::size_t n = size_field(j);
  const Json& pts = field(j, "points");
  if (!pts.is_array() || pts.empty()) bad("'points' must be a nonempty array");
  std::vector<CVector> rows;
  for (const auto& p : pts) {
    if (!p.is_array() || p.size() != n + 1) bad("each point needs n+1 = " + std::to_string(n + 1) + " coordinates");
    CVector v;
    for (const auto& x : p) v.push_back(complex_from(x));
    rows.push_back(std::move(v));
  }
  try {
    return make_cluster(rows);
  } catch (const InvalidPointError& e) {
    bad(e.what());
  }
}

Json to_json(const PointCluster& c, int digits) {
  Json j;
  j["n"] = c.dimension();
  j["points"] = cluster_points_json(c, digits);
  return j;
}

HermitianForm hermitian_from_json(const Json& j) {
  const std::size_t n = size_field(j);
  return HermitianForm(complex_matrix_from(field(j, "matrix"), n + 1), false);
}

Json to_json(const HermitianForm& q, int digits) {
  Json j;
  j["n"] = q.size() - 1;
  j["matrix"] = complex_matrix_json(q.matrix(), digits);
  return j;
}

Json to_json(const CovariantResult& r, int digits) {
  Json j;
  j["z"] = to_json(r.z, digits);
  j["theta"] = real_json(r.theta, digits);
  j["iterations"] = r.iterations;
  j["final_gradient_norm"] = format_real(r.final_gradient_norm, 6);
  j["converged"] = r.converged;
  if (!r.transcript.empty()) {
    Json t = Json::array();
    for (const auto& [step, d] : r.transcript) t.push_back(Json::array({step, format_real(d, 20)}));
    j["transcript"] = std::move(t);
  }
  return j;
}

GramMatrix gram_from_json(const Json& j) {
  const std::size_t n = size_field(j);
  const Json& rows = field(j, "matrix");
  if (!rows.is_array() || rows.size() != n + 1) bad("matrix must have n+1 rows");
  RMatrix m(n + 1, n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n + 1) bad("matrix rows must have n+1 entries");
    for (std::size_t k = 0; k <= n; ++k) m(i, k) = real_from(rows[i][k]);
  }
  return GramMatrix(std::move(m));
}

Json real_matrix_json(const RMatrix& m, int digits) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(real_json(m(i, k), digits));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const GramMatrix& g, int digits) {
  Json j;
  j["n"] = g.size() - 1;
  j["matrix"] = real_matrix_json(g.matrix(), digits);
  return j;
}

UnimodularTransform transform_from_json(const Json& j) {
  const Json& rows = j.is_object() ? field(j, "matrix") : j;
  if (!rows.is_array() || rows.empty()) bad("transform must be a nonempty array of integer rows");
  const std::size_t n = rows.size();
  IMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) bad("transform must be square");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = integer_from(rows[i][k]);
  }
  return UnimodularTransform(std::move(m));
}

Json to_json(const UnimodularTransform& u) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < u.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < u.size(); ++k) row.push_back(integer_json(u.matrix()(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MultiPoly poly_from_json(const Json& j, std::size_t nvars) {
  if (j.is_string()) return parse_poly(j.get<std::string>(), nvars);
  const Json& nv = field(j, "nvars");
  if (!nv.is_number_integer() || nv.get<long long>() < 1) bad("'nvars' must be a positive integer");
  const std::size_t n = static_cast<std::size_t>(nv.get<long long>());
  if (nvars != 0 && nvars != n) bad("polynomial has " + std::to_string(n) + " variables, expected " + std::to_string(nvars));
  MultiPoly p(n);
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) bad("'terms' must be an array");
  for (const auto& t : terms) {
    const Json& e = field(t, "exp");
    if (!e.is_array() || e.size() != n) bad("exponent vector must have nvars entries");
    Exponent exp;
    for (const auto& v : e) {
      if (!v.is_number_integer() || v.get<long long>() < 0) bad("exponents must be nonnegative integers");
      exp.push_back(static_cast<int>(v.get<long long>()));
    }
    p.add_term(exp, integer_from(field(t, "coeff")));
  }
  return p;
}

Json to_json(const MultiPoly& p) {
  Json j;
  j["nvars"] = p.nvars();
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exp", e}, {"coeff", c.str()}});
  j["terms"] = std::move(terms);
  j["text"] = format_poly(p);
  return j;
}

Json to_json(const StabilityClass& s) {
  Json j;
  j["is_split"] = s.is_split;
  j["is_semi_stable"] = s.is_semi_stable;
  j["is_stable"] = s.is_stable;
  j["phi"] = s.phi;
  j["margin"] = s.margin;
  if (s.witness) {
    j["witness"] = {{"spanning", s.witness->spanning},
                    {"dimension", s.witness->dimension},
                    {"contained", s.witness->contained}};
  }
  if (s.split_parts) j["split_parts"] = {s.split_parts->first, s.split_parts->second};
  return j;
}

Json to_json(const ThetaResult& t, int digits) {
  Json j;
  j["theta"] = real_json(t.value, digits);
  j["attained"] = t.attained;
  j["iterations"] = t.iterations;
  j["stability"] = to_json(t.stability);
  if (t.witness) {
    j["divergence_direction"] = complex_matrix_json(t.witness->direction, digits);
    j["divergence_slope"] = t.witness->slope;
  }
  return j;
}

Json to_json(const ReductionReport& r, int digits) {
  Json j;
  j["schema"] = "cluster-reduce/1";
  j["kind"] = r.kind;
  j["input"] = r.input_descriptor;
  j["precision_bits"] = r.precision_bits;
  j["covariant"] = {{"method", r.covariant_method},
                    {"n", r.covariant.rows() - 1},
                    {"matrix", complex_matrix_json(r.covariant, digits)}};
  j["gram"] = real_matrix_json(r.gram, digits);
  j["reduced_gram"] = real_matrix_json(r.reduced_gram, digits);
  j["transform"] = to_json(r.transform);
  if (r.pencil_transform) j["pencil_transform"] = to_json(*r.pencil_transform);
  if (r.binary_cubic) j["binary_cubic"] = format_poly(*r.binary_cubic);
  if (r.reduced_binary_cubic) j["reduced_binary_cubic"] = format_poly(*r.reduced_binary_cubic);
  auto forms = [](const std::vector<MultiPoly>& fs) {
    Json a = Json::array();
    for (const auto& f : fs) a.push_back(format_poly(f));
    return a;
  };
  if (!r.input_forms.empty()) j["input_forms"] = forms(r.input_forms);
  if (!r.adjusted_forms.empty()) j["adjusted_forms"] = forms(r.adjusted_forms);
  if (!r.reduced_forms.empty()) j["reduced_forms"] = forms(r.reduced_forms);
  if (r.cluster) j["cluster"] = to_json(*r.cluster, digits);
  if (r.reduced_cluster) j["reduced_cluster"] = to_json(*r.reduced_cluster, digits);
  Json d;
  d["precision_bits"] = r.precision_bits;
  d["iterations"] = r.iterations;
  d["gradient_norm"] = format_real(r.gradient_norm, 6);
  d["theta"] = real_json(r.theta, digits);
  Json res = Json::array();
  for (const auto& v : r.residuals) res.push_back(format_real(v, 6));
  d["residuals"] = std::move(res);
  d["max_residual"] = format_real(r.max_residual, 6);
  d["stability"] = to_json(r.stability);
  d["height_before"] = format_real(r.height_before, 20);
  d["height_after"] = format_real(r.height_after, 20);
  d["height_warning"] = r.height_warning;
  d["notes"] = r.notes;
  j["diagnostics"] = std::move(d);
  return j;
}

std::string to_text(const ReductionReport& r, int digits) {
  std::ostringstream os;
  os << "kind: " << r.kind << "\n";
  os << "input: " << r.input_descriptor << "\n";
  if (r.binary_cubic) os << "binary cubic: " << format_poly(*r.binary_cubic) << "\n";
  if (r.pencil_transform) {
    os << "pencil transform:\n";
    for (std::size_t i = 0; i < r.pencil_transform->size(); ++i) {
      os << " ";
      for (std::size_t k = 0; k < r.pencil_transform->size(); ++k) os << " " << r.pencil_transform->matrix()(i, k);
      os << "\n";
    }
  }
  os << "covariant (" << r.covariant_method << "):\n";
  for (std::size_t i = 0; i < r.covariant.rows(); ++i) {
    os << " ";
    for (std::size_t k = 0; k < r.covariant.cols(); ++k) os << " " << format_complex(r.covariant(i, k), digits);
    os << "\n";
  }
  os << "transform:\n";
  for (std::size_t i = 0; i < r.transform.size(); ++i) {
    os << " ";
    for (std::size_t k = 0; k < r.transform.size(); ++k) os << " " << r.transform.matrix()(i, k);
    os << "\n";
  }
  for (const auto& f : r.reduced_forms) os << "reduced form: " << format_poly(f) << "\n";
  if (r.reduced_cluster && r.reduced_forms.empty()) {
    os << "reduced cluster:\n";
    for (const auto& p : r.reduced_cluster->points()) {
      os << " ";
      for (const auto& x : p.coords()) os << " (" << format_complex(x, 12) << ")";
      os << "\n";
    }
  }
  os << "precision: " << r.precision_bits << " bits, iterations: " << r.iterations
     << ", gradient norm: " << format_real(r.gradient_norm, 6) << "\n";
  if (!r.residuals.empty()) os << "max residual: " << format_real(r.max_residual, 6) << "\n";
  os << "height: " << format_real(r.height_before, 12) << " -> " << format_real(r.height_after, 12)
     << (r.height_warning ? " (increased)" : "") << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace pcred
