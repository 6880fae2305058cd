// pcred: command-line front end for cluster classification, covariants and
// unimodular reduction of clusters and forms.

#include "pcred/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace pcred;

enum ExitCode { kOk = 0, kOther = 1, kStability = 2, kNumerical = 3, kInput = 4 };

struct Settings {
  unsigned prec = 0;
  std::string tol = "1e-12";
  std::string delta = "0.99";
  int max_iter = 20000;
  std::uint64_t seed = 1;
  bool json = false;
  bool text = false;
  std::string report;
  int digits = 30;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// A path to an existing file is read; anything else is taken literally.
std::string load(const std::string& arg) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(arg, ec)) return trim(arg);
  std::ifstream in(arg);
  if (!in) throw InputFormatError("cannot read " + arg);
  std::ostringstream ss;
  ss << in.rdbuf();
  return trim(ss.str());
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputFormatError(origin + ": invalid JSON: " + e.what());
  }
}

bool looks_like_json(const std::string& text) {
  return !text.empty() && (text.front() == '{' || text.front() == '[' || text.front() == '"');
}

MultiPoly load_poly(const std::string& arg, std::size_t nvars) {
  const std::string text = load(arg);
  if (looks_like_json(text)) return poly_from_json(parse_json(text, arg), nvars);
  return parse_poly(text, nvars);
}

PointCluster load_cluster(const std::string& arg) { return cluster_from_json(parse_json(load(arg), arg)); }

PipelineOptions pipeline_options(const Settings& s) {
  PipelineOptions o;
  o.prec_bits = s.prec;
  o.tol = parse_real(s.tol);
  o.delta = parse_real(s.delta);
  o.max_iter = s.max_iter;
  o.seed = s.seed;
  return o;
}

MinimizeOptions minimize_options(const Settings& s) {
  MinimizeOptions o;
  o.tol = parse_real(s.tol);
  o.max_iter = s.max_iter;
  return o;
}

void write_report(const Settings& s, const Json& j) {
  if (s.report.empty()) return;
  std::ofstream out(s.report);
  if (!out) throw InputFormatError("cannot write report to " + s.report);
  out << j.dump(2) << "\n";
}

void emit(const Settings& s, const Json& j, const std::string& text) {
  if (s.json) std::cout << j.dump(2) << "\n";
  else std::cout << text;
  write_report(s, j);
}

std::string stability_text(const StabilityClass& c) {
  std::ostringstream os;
  os << "class: " << (c.is_stable ? "stable" : c.is_semi_stable ? "semi-stable" : "unstable") << "\n";
  os << "split: " << (c.is_split ? "yes" : "no") << "\n";
  os << "phi:";
  for (int v : c.phi) os << " " << v;
  os << "\nmargin: " << c.margin << "\n";
  if (c.witness) {
    os << "witness: dimension " << c.witness->dimension << ", " << c.witness->contained << " points, spanned by";
    for (auto i : c.witness->spanning) os << " " << i;
    os << "\n";
  }
  return os.str();
}

int run_classify(const Settings& s, const std::string& input) {
  PrecisionScope scope(s.prec ? s.prec : kDefaultBits);
  const PointCluster c = load_cluster(input);
  const StabilityClass cls = classify(c);
  Json j;
  j["schema"] = "cluster-reduce/1";
  j["kind"] = "classify";
  j["stability"] = to_json(cls);
  emit(s, j, stability_text(cls));
  return kOk;
}

int run_covariant(const Settings& s, const std::string& input) {
  PrecisionScope scope(s.prec ? s.prec : kDefaultBits);
  const PointCluster c = load_cluster(input);
  const StabilityClass cls = classify(c);
  Json j;
  j["schema"] = "cluster-reduce/1";
  j["kind"] = "covariant";
  if (!cls.is_stable) {
    // No covariant; report theta and the destabilizing direction instead.
    const ThetaResult t = theta(normalize_cluster(c), minimize_options(s));
    j["theta"] = to_json(t, s.digits);
    std::ostringstream os;
    os << stability_text(cls) << "theta: " << format_real(t.value, 20) << "\n";
    emit(s, j, os.str());
    std::cerr << "error: cluster is not stable, no covariant exists\n";
    return kStability;
  }
  const CovariantResult r = minimize(c, minimize_options(s));
  j["result"] = to_json(r, s.digits);
  std::ostringstream os;
  os << "covariant:\n";
  const CMatrix& z = r.z.matrix();
  for (std::size_t i = 0; i < z.rows(); ++i) {
    os << " ";
    for (std::size_t k = 0; k < z.cols(); ++k) os << " " << format_complex(z(i, k), 20);
    os << "\n";
  }
  os << "theta: " << format_real(r.theta, 20) << "\niterations: " << r.iterations
     << "\ngradient norm: " << format_real(r.final_gradient_norm, 6) << "\n";
  emit(s, j, os.str());
  return kOk;
}

int finish(const Settings& s, const ReductionReport& r) {
  emit(s, to_json(r, s.digits), to_text(r));
  return kOk;
}

void print_error(const Settings& s, const char* type, const std::exception& e, const Json* extra = nullptr) {
  std::cerr << "error: " << e.what() << "\n";
  if (!s.json && s.report.empty()) return;
  Json j;
  j["schema"] = "cluster-reduce/1";
  j["error"] = {{"type", type}, {"message", e.what()}};
  if (extra) j["error"]["stability"] = *extra;
  if (s.json) std::cout << j.dump(2) << "\n";
  try {
    write_report(s, j);
  } catch (const std::exception&) {
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covariant-based reduction of point clusters and forms"};
  app.require_subcommand(1);
  Settings s;
  app.add_option("--prec", s.prec, "working precision in bits");
  app.add_option("--tol", s.tol, "gradient-norm tolerance for the minimizer");
  app.add_option("--delta", s.delta, "LLL parameter");
  app.add_option("--max-iter", s.max_iter, "minimizer iteration cap");
  app.add_option("--seed", s.seed, "seed for the random shears used in curve intersection");
  auto* json_flag = app.add_flag("--json", s.json, "print JSON");
  app.add_flag("--text", s.text, "print plain text (default)")->excludes(json_flag);
  app.add_option("--report", s.report, "also write the JSON report to this path");
  app.add_option("--digits", s.digits, "significant digits of reals in JSON (0: all)");

  std::string input, second;
  auto* classify_cmd = app.add_subcommand("classify", "stability class of a cluster (JSON file)");
  classify_cmd->add_option("cluster", input)->required();
  auto* covariant_cmd = app.add_subcommand("covariant", "covariant of a stable cluster (JSON file)");
  covariant_cmd->add_option("cluster", input)->required();
  auto* cluster_cmd = app.add_subcommand("reduce-cluster", "reduce a conjugation-fixed stable cluster");
  cluster_cmd->add_option("cluster", input)->required();
  auto* binary_cmd = app.add_subcommand("reduce-binary", "reduce a binary form (file or literal)");
  binary_cmd->add_option("form", input)->required();
  auto* pencil_cmd = app.add_subcommand(
      "reduce-pencil", "reduce a pencil of ternary quadrics: two forms, or one file holding a JSON array of two");
  pencil_cmd->add_option("first", input)->required();
  pencil_cmd->add_option("second", second);
  auto* ternary_cmd = app.add_subcommand("reduce-ternary", "reduce a ternary form by its inflection cluster");
  ternary_cmd->add_option("form", input)->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*classify_cmd) return run_classify(s, input);
    if (*covariant_cmd) return run_covariant(s, input);
    const PipelineOptions opts = pipeline_options(s);
    if (*cluster_cmd) {
      PrecisionScope scope(s.prec ? s.prec : kDefaultBits);
      return finish(s, reduce_cluster(load_cluster(input), opts));
    }
    if (*binary_cmd) return finish(s, reduce_binary_form(load_poly(input, 2), opts));
    if (*pencil_cmd) {
      MultiPoly q1(3), q2(3);
      if (second.empty()) {
        const Json j = parse_json(load(input), input);
        if (!j.is_array() || j.size() != 2) throw InputFormatError("pencil file must hold a JSON array of two forms");
        q1 = poly_from_json(j[0], 3);
        q2 = poly_from_json(j[1], 3);
      } else {
        q1 = load_poly(input, 3);
        q2 = load_poly(second, 3);
      }
      return finish(s, reduce_quadric_pencil(q1, q2, opts));
    }
    if (*ternary_cmd) return finish(s, reduce_ternary_form(load_poly(input, 3), opts));
  } catch (const StabilityError& e) {
    const Json st = to_json(e.stability());
    print_error(s, "stability", e, &st);
    if (!s.json) std::cerr << stability_text(e.stability());
    return kStability;
  } catch (const NumericalError& e) {
    print_error(s, "numerical", e);
    return kNumerical;
  } catch (const EliminationError& e) {
    print_error(s, "numerical", e);
    return kNumerical;
  } catch (const InputFormatError& e) {
    print_error(s, "input", e);
    return kInput;
  } catch (const DomainError& e) {
    print_error(s, "domain", e);
    return kInput;
  } catch (const std::exception& e) {
    print_error(s, "other", e);
    return kOther;
  }
  return kOther;
}
