#include "pcred/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pcred {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly MultiPoly::constant(std::size_t nvars, const Integer& c) {
  MultiPoly p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw DomainError("variable index out of range");
  Exponent e(nvars, 0);
  e[index] = 1;
  return monomial(e, 1);
}

MultiPoly MultiPoly::monomial(const Exponent& exp, const Integer& c) {
  MultiPoly p(exp.size());
  p.add_term(exp, c);
  return p;
}

void MultiPoly::add_term(const Exponent& exp, const Integer& c) {
  if (exp.size() != nvars_) throw DomainError("exponent vector has the wrong length");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exp, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Integer MultiPoly::coefficient(const Exponent& exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? Integer(0) : it->second;
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : e) s += v;
    d = std::max(d, s);
  }
  return d;
}

int MultiPoly::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
  return d;
}

bool MultiPoly::is_homogeneous() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : e) s += v;
    if (d >= 0 && s != d) return false;
    d = s;
  }
  return true;
}

bool MultiPoly::is_constant() const { return total_degree() <= 0; }

MultiPoly MultiPoly::coefficient_in(std::size_t var, int k) const {
  MultiPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e.at(var) != k) continue;
    Exponent f = e;
    f[var] = 0;
    out.add_term(f, c);
  }
  return out;
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  MultiPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e.at(var) == 0) continue;
    Exponent f = e;
    f[var] -= 1;
    out.add_term(f, c * e[var]);
  }
  return out;
}

Integer MultiPoly::content() const {
  Integer g = 0;
  for (const auto& [e, c] : terms_) g = mp::gcd(g, c);
  return g;
}

MultiPoly MultiPoly::primitive_part() const {
  Integer g = content();
  if (g == 0) return *this;
  if (terms_.begin()->second < 0) g = -g;
  MultiPoly out(nvars_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c / g);
  return out;
}

Integer MultiPoly::max_abs_coefficient() const {
  Integer best = 0;
  for (const auto& [e, c] : terms_) best = std::max<Integer>(best, mp::abs(c));
  return best;
}

Complex MultiPoly::evaluate(std::span<const Complex> point) const {
  if (point.size() != nvars_) throw DomainError("evaluation point has the wrong dimension");
  // Cache powers per variable.
  std::vector<std::vector<Complex>> powers(nvars_);
  for (std::size_t v = 0; v < nvars_; ++v) {
    int d = std::max(degree_in(v), 0);
    powers[v].reserve(static_cast<std::size_t>(d) + 1);
    powers[v].push_back(Complex(1));
    for (int k = 1; k <= d; ++k) powers[v].push_back(powers[v].back() * point[v]);
  }
  Complex sum;
  for (const auto& [e, c] : terms_) {
    Complex t(to_real(c));
    for (std::size_t v = 0; v < nvars_; ++v)
      if (e[v] > 0) t *= powers[v][static_cast<std::size_t>(e[v])];
    sum += t;
  }
  return sum;
}

Real MultiPoly::coefficient_norm() const {
  Real s = 0;
  for (const auto& [e, c] : terms_) {
    Real r = to_real(c);
    s += r * r;
  }
  return mp::sqrt(s);
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
  if (o.nvars_ != nvars_) throw DomainError("polynomials have different variable counts");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Integer& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_compatible(b);
  MultiPoly out(a.nvars_);
  Exponent e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t v = 0; v < a.nvars_; ++v) e[v] = ea[v] + eb[v];
      out.add_term(e, ca * cb);
    }
  return out;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(nvars_, 1);
  MultiPoly base = *this;
  while (e) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return result;
}

MultiPoly divide_exact(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  MultiPoly q(a.nvars());
  MultiPoly r = a;
  const auto& [lead_exp, lead_coef] = *b.terms().begin();
  while (!r.is_zero()) {
    const auto& [re, rc] = *r.terms().begin();
    Exponent diff(re.size());
    for (std::size_t v = 0; v < re.size(); ++v) {
      diff[v] = re[v] - lead_exp[v];
      if (diff[v] < 0) throw DomainError("inexact polynomial division");
    }
    Integer rem;
    Integer quot;
    mp::divide_qr(rc, lead_coef, quot, rem);
    if (rem != 0) throw DomainError("inexact polynomial division");
    MultiPoly t = MultiPoly::monomial(diff, quot);
    q += t;
    r -= t * b;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t nvars) : text_(text), nvars_(nvars) {}

  MultiPoly parse() {
    std::vector<std::pair<Exponent, Integer>> terms;
    std::size_t max_var = 0;
    bool any_var = false;
    skip_ws();
    int sign = 1;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1 : 1;
    while (true) {
      Integer coef = sign;
      std::map<std::size_t, int> exps;
      int factors = 0;
      while (true) {
        skip_ws();
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
          coef *= parse_uint();
          ++factors;
        } else if (c == 'x' || c == 'y' || c == 'z') {
          std::size_t var = parse_var();
          skip_ws();
          int e = 1;
          if (peek() == '^') {
            take();
            skip_ws();
            e = static_cast<int>(parse_uint());
          }
          exps[var] += e;
          max_var = std::max(max_var, var);
          any_var = true;
          ++factors;
        } else if (c == '*' && factors > 0) {
          take();
        } else {
          break;
        }
      }
      if (factors == 0) fail("expected a term");
      Exponent e;
      e.reserve(exps.size());
      std::vector<std::pair<std::size_t, int>> flat(exps.begin(), exps.end());
      terms.emplace_back(Exponent{}, coef);
      term_vars_.push_back(std::move(flat));
      skip_ws();
      if (pos_ == text_.size()) break;
      char c = take();
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      sign = c == '-' ? -1 : 1;
    }
    std::size_t nvars = nvars_;
    if (nvars == 0) nvars = any_var ? max_var + 1 : 1;
    if (any_var && max_var >= nvars) fail("variable index exceeds the declared variable count");
    MultiPoly out(nvars);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      Exponent e(nvars, 0);
      for (const auto& [v, k] : term_vars_[t]) e[v] = k;
      out.add_term(e, terms[t].second);
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputFormatError("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return pos_ < text_.size() ? text_[pos_++] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  Integer parse_uint() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected digits");
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }
  std::size_t parse_var() {
    char c = take();
    if (c == 'y') return 1;
    if (c == 'z') return 2;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) return 0;
    return static_cast<std::size_t>(parse_uint());
  }

  std::string_view text_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
  std::vector<std::vector<std::pair<std::size_t, int>>> term_vars_;
};

}  // namespace

MultiPoly parse_poly(std::string_view text, std::size_t nvars) { return PolyParser(text, nvars).parse(); }

std::string format_poly(const MultiPoly& p, bool indexed_names) {
  if (p.is_zero()) return "0";
  const bool letters = !indexed_names && p.nvars() <= 3;
  static const char* kLetters[] = {"x", "y", "z"};
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    Integer a = mp::abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool constant = std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
    bool wrote = false;
    if (a != 1 || constant) {
      os << a;
      wrote = true;
    }
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      if (wrote) os << "*";
      if (letters)
        os << kLetters[v];
      else
        os << "x" << v;
      if (e[v] > 1) os << "^" << e[v];
      wrote = true;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Hessian, quadric matrices, determinants

MultiPoly poly_determinant(const std::vector<std::vector<MultiPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw DomainError("empty determinant");
  for (const auto& row : m)
    if (row.size() != n) throw DomainError("determinant of a non-square polynomial matrix");
  if (n == 1) return m[0][0];
  MultiPoly sum(m[0][0].nvars());
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<MultiPoly>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<MultiPoly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    MultiPoly term = m[0][j] * poly_determinant(minor);
    if (j % 2 == 0)
      sum += term;
    else
      sum -= term;
  }
  return sum;
}

MultiPoly hessian(const MultiPoly& f) {
  if (f.nvars() != 3) throw DomainError("hessian: expected a ternary form");
  if (!f.is_homogeneous() || f.is_zero()) throw DomainError("hessian: form is not homogeneous");
  if (f.total_degree() < 2) throw DomainError("hessian: degree must be at least 2");
  std::vector<std::vector<MultiPoly>> second(3, std::vector<MultiPoly>(3));
  for (std::size_t i = 0; i < 3; ++i) {
    MultiPoly fi = f.derivative(i);
    for (std::size_t j = 0; j < 3; ++j) second[i][j] = fi.derivative(j);
  }
  return poly_determinant(second);
}

IMatrix quadric_matrix(const MultiPoly& q) {
  if (q.total_degree() != 2 || !q.is_homogeneous()) throw DomainError("expected a quadratic form");
  const std::size_t n = q.nvars();
  IMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Exponent e(n, 0);
      e[i] += 1;
      e[j] += 1;
      m(i, j) = i == j ? 2 * q.coefficient(e) : q.coefficient(e);
    }
  return m;
}

// ---------------------------------------------------------------------------
// Substitution

MultiPoly substitute(const MultiPoly& f, const IMatrix& u) {
  const std::size_t n = f.nvars();
  if (!u.square() || u.rows() != n) throw DomainError("substitution matrix size does not match the variable count");
  std::vector<MultiPoly> linear;
  for (std::size_t i = 0; i < n; ++i) {
    MultiPoly l(n);
    for (std::size_t j = 0; j < n; ++j) {
      Exponent e(n, 0);
      e[j] = 1;
      l.add_term(e, u(i, j));
    }
    linear.push_back(std::move(l));
  }
  std::vector<std::vector<MultiPoly>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    int d = std::max(f.degree_in(i), 0);
    powers[i].push_back(MultiPoly::constant(n, 1));
    for (int k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * linear[i]);
  }
  MultiPoly out(n);
  for (const auto& [e, c] : f.terms()) {
    MultiPoly t = MultiPoly::constant(n, c);
    for (std::size_t i = 0; i < n; ++i)
      if (e[i] > 0) t = t * powers[i][static_cast<std::size_t>(e[i])];
    out += t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resultant

namespace {

// Polynomial in one distinguished variable with coefficients in Z[others].
using RecPoly = std::vector<MultiPoly>;

RecPoly split(const MultiPoly& p, std::size_t var) {
  int d = p.degree_in(var);
  RecPoly out;
  for (int k = 0; k <= d; ++k) out.push_back(p.coefficient_in(var, k));
  return out;
}

int rec_degree(const RecPoly& p) {
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k)
    if (!p[static_cast<std::size_t>(k)].is_zero()) return k;
  return -1;
}

void rec_trim(RecPoly& p) { p.resize(static_cast<std::size_t>(rec_degree(p) + 1)); }

RecPoly pseudo_remainder(const RecPoly& a, const RecPoly& b) {
  const int db = rec_degree(b);
  RecPoly r = a;
  rec_trim(r);
  int e = rec_degree(a) - db + 1;
  const MultiPoly& lb = b[static_cast<std::size_t>(db)];
  while (rec_degree(r) >= db) {
    const int dr = rec_degree(r);
    MultiPoly lr = r[static_cast<std::size_t>(dr)];
    const int shift = dr - db;
    for (auto& c : r) c = c * lb;
    for (int k = 0; k <= db; ++k) r[static_cast<std::size_t>(k + shift)] -= lr * b[static_cast<std::size_t>(k)];
    rec_trim(r);
    --e;
  }
  if (e > 0) {
    MultiPoly f = lb.pow(static_cast<unsigned>(e));
    for (auto& c : r) c = c * f;
  }
  return r;
}

}  // namespace

MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, std::size_t var) {
  if (p.nvars() != q.nvars()) throw DomainError("resultant: variable counts differ");
  if (var >= p.nvars()) throw DomainError("resultant: variable index out of range");
  if (p.is_zero() || q.is_zero()) throw DomainError("resultant of the zero polynomial");
  const std::size_t nv = p.nvars();

  if (p.is_homogeneous() && q.is_homogeneous() && p.degree_in(var) < p.total_degree() &&
      q.degree_in(var) < q.total_degree())
    throw EliminationError(
        "both leading coefficients vanish at the elimination point; apply a linear change of variables");

  RecPoly a = split(p, var);
  RecPoly b = split(q, var);
  int da = rec_degree(a), db = rec_degree(b);
  int s = 1;
  if (da < db) {
    std::swap(a, b);
    std::swap(da, db);
    if (da % 2 == 1 && db % 2 == 1) s = -1;
  }
  if (db == 0) {
    MultiPoly r = b[0].pow(static_cast<unsigned>(da));
    return s < 0 ? -r : r;
  }

  MultiPoly g = MultiPoly::constant(nv, 1);
  MultiPoly h = MultiPoly::constant(nv, 1);
  while (true) {
    const int delta = da - db;
    if (da % 2 == 1 && db % 2 == 1) s = -s;
    RecPoly r = pseudo_remainder(a, b);
    a = b;
    MultiPoly divisor = g * h.pow(static_cast<unsigned>(delta));
    for (auto& c : r) c = divide_exact(c, divisor);
    b = std::move(r);
    da = rec_degree(a);
    db = rec_degree(b);
    g = a[static_cast<std::size_t>(da)];
    if (delta > 0) h = divide_exact(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    if (db <= 0) break;
  }
  if (db < 0) return MultiPoly(nv);
  MultiPoly lb = b[0];
  MultiPoly result = da == 1 ? lb
                             : divide_exact(lb.pow(static_cast<unsigned>(da)),
                                            h.pow(static_cast<unsigned>(da - 1)));
  return s < 0 ? -result : result;
}

// ---------------------------------------------------------------------------
// Univariate helpers

UPoly to_univariate(const MultiPoly& p, std::size_t var) {
  UPoly out(static_cast<std::size_t>(std::max(p.degree_in(var), 0)) + 1);
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t v = 0; v < e.size(); ++v)
      if (v != var && e[v] != 0) throw DomainError("polynomial is not univariate");
    out[static_cast<std::size_t>(e[var])] = c;
  }
  trim(out);
  return out;
}

MultiPoly from_univariate(const UPoly& p, std::size_t nvars, std::size_t var) {
  MultiPoly out(nvars);
  for (std::size_t k = 0; k < p.size(); ++k) {
    Exponent e(nvars, 0);
    e[var] = static_cast<int>(k);
    out.add_term(e, p[k]);
  }
  return out;
}

void trim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const UPoly& p) {
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k)
    if (p[static_cast<std::size_t>(k)] != 0) return k;
  return -1;
}

UPoly derivative(const UPoly& p) {
  UPoly out;
  for (std::size_t k = 1; k < p.size(); ++k) out.push_back(p[k] * static_cast<long>(k));
  trim(out);
  return out;
}

Integer content(const UPoly& p) {
  Integer g = 0;
  for (const auto& c : p) g = mp::gcd(g, c);
  return g;
}

UPoly primitive_part(const UPoly& p) {
  UPoly out = p;
  trim(out);
  if (out.empty()) return out;
  Integer g = content(out);
  if (out.back() < 0) g = -g;
  for (auto& c : out) c /= g;
  return out;
}

namespace {

UPoly upoly_prem(const UPoly& a, const UPoly& b) {
  const int db = degree(b);
  UPoly r = a;
  trim(r);
  const Integer& lb = b[static_cast<std::size_t>(db)];
  while (degree(r) >= db) {
    const int dr = degree(r);
    Integer lr = r[static_cast<std::size_t>(dr)];
    const int shift = dr - db;
    for (auto& c : r) c *= lb;
    for (int k = 0; k <= db; ++k) r[static_cast<std::size_t>(k + shift)] -= lr * b[static_cast<std::size_t>(k)];
    trim(r);
  }
  return r;
}

}  // namespace

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = primitive_part(a);
  UPoly y = primitive_part(b);
  if (x.empty()) return y;
  if (y.empty()) return x;
  if (degree(x) < degree(y)) std::swap(x, y);
  while (!y.empty()) {
    if (degree(y) == 0) return UPoly{1};
    UPoly r = primitive_part(upoly_prem(x, y));
    x = std::move(y);
    y = std::move(r);
  }
  return primitive_part(x);
}

UPoly divide_exact(const UPoly& a, const UPoly& b) {
  const int db = degree(b);
  if (db < 0) throw DomainError("division by the zero polynomial");
  UPoly r = a;
  trim(r);
  if (degree(r) < db) {
    if (!r.empty()) throw DomainError("inexact polynomial division");
    return {};
  }
  UPoly q(static_cast<std::size_t>(degree(r) - db + 1));
  const Integer& lb = b[static_cast<std::size_t>(db)];
  while (degree(r) >= db) {
    const int dr = degree(r);
    Integer quot, rem;
    mp::divide_qr(r[static_cast<std::size_t>(dr)], lb, quot, rem);
    if (rem != 0) throw DomainError("inexact polynomial division");
    const int shift = dr - db;
    q[static_cast<std::size_t>(shift)] = quot;
    for (int k = 0; k <= db; ++k) r[static_cast<std::size_t>(k + shift)] -= quot * b[static_cast<std::size_t>(k)];
    trim(r);
  }
  if (!r.empty()) throw DomainError("inexact polynomial division");
  trim(q);
  return q;
}

std::vector<SquareFreeFactor> square_free_decomposition(const UPoly& p) {
  std::vector<SquareFreeFactor> out;
  UPoly f = primitive_part(p);
  if (degree(f) <= 0) return out;
  UPoly df = derivative(f);
  UPoly a = gcd(f, df);
  UPoly b = divide_exact(f, a);
  UPoly c = divide_exact(df, a);
  UPoly d = c;
  {
    UPoly db = derivative(b);
    d.resize(std::max(c.size(), db.size()));
    for (std::size_t k = 0; k < db.size(); ++k) d[k] -= db[k];
    trim(d);
  }
  int i = 1;
  while (degree(b) > 0) {
    UPoly ai = gcd(b, d);
    UPoly nb = divide_exact(b, ai);
    UPoly nc = divide_exact(d, ai);
    if (degree(ai) > 0) out.push_back({ai, i});
    b = std::move(nb);
    UPoly db = derivative(b);
    d = nc;
    d.resize(std::max(nc.size(), db.size()));
    for (std::size_t k = 0; k < db.size(); ++k) d[k] -= db[k];
    trim(d);
    ++i;
  }
  return out;
}

}  // namespace pcred
