#include "bvkit/poly.hpp"

#include <algorithm>
#include <sstream>

#include "bvkit/errors.hpp"

namespace bvkit {

VariableSet::VariableSet(std::vector<Variable> vars) : vars_(std::move(vars)) {
  odd_.resize(vars_.size());
  for (Index i = 0; i < vars_.size(); ++i) {
    odd_[i] = (vars_[i].degree & 1) != 0;
    if (!index_.emplace(vars_[i].name, i).second) throw InputError("duplicate variable name '" + vars_[i].name + "'");
  }
}

std::optional<Index> VariableSet::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void VariableSet::set_box(std::vector<int> lo, std::vector<int> hi, std::vector<int> hidden, int hidden_count) {
  hidden_ = std::move(hidden);
  hidden_count_ = hidden_count;
  for (auto& v : vars_)
    if (v.weight.size() != lo.size()) throw InputError("variable weight length does not match the box");
  lo_ = std::move(lo);
  hi_ = std::move(hi);
}

int monomial_product(const Monomial& a, const Monomial& b, const std::vector<bool>& odd, Monomial& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  int s = 1;
  // odd elements of a still waiting to be placed; each odd b jumping ahead of
  // them picks up their count
  size_t odd_left = 0;
  for (Index v : a) odd_left += odd[v];
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      if (j < b.size() && a[i] == b[j] && odd[a[i]]) return 0;
      if (odd[a[i]]) --odd_left;
      out.push_back(a[i++]);
    } else {
      if (odd[b[j]] && (odd_left & 1)) s = -s;
      out.push_back(b[j++]);
    }
  }
  return s;
}

int left_derive(const Monomial& m, Index v, const std::vector<bool>& odd, Monomial& out) {
  auto it = std::lower_bound(m.begin(), m.end(), v);
  if (it == m.end() || *it != v) return 0;
  size_t pos = static_cast<size_t>(it - m.begin());
  int mult = 0;
  while (it + mult != m.end() && *(it + mult) == v) ++mult;
  int s = 1;
  if (odd[v]) {
    size_t before = 0;
    for (size_t k = 0; k < pos; ++k) before += odd[m[k]];
    if (before & 1) s = -1;
  }
  out.assign(m.begin(), m.end());
  out.erase(out.begin() + static_cast<long>(pos));
  return s * mult;
}

int right_derive(const Monomial& m, Index v, const std::vector<bool>& odd, Monomial& out) {
  auto it = std::lower_bound(m.begin(), m.end(), v);
  if (it == m.end() || *it != v) return 0;
  size_t pos = static_cast<size_t>(it - m.begin());
  int mult = 0;
  while (it + mult != m.end() && *(it + mult) == v) ++mult;
  int s = 1;
  if (odd[v]) {
    size_t after = 0;
    for (size_t k = pos + 1; k < m.size(); ++k) after += odd[m[k]];
    if (after & 1) s = -1;
  }
  out.assign(m.begin(), m.end());
  out.erase(out.begin() + static_cast<long>(pos));
  return s * mult;
}

int monomial_degree(const Monomial& m, const VariableSet& vars) {
  int d = 0;
  for (Index v : m) d += vars[v].degree;
  return d;
}

bool monomial_admissible(const Monomial& m, const VariableSet& vars) {
  if (!vars.has_window()) return true;
  std::vector<const std::vector<int>*> w;
  w.reserve(m.size());
  for (Index v : m) w.push_back(&vars[v].weight);
  return box_admissible(w, vars.box_lo(), vars.box_hi(), vars.hidden(), vars.hidden_count());
}

Polynomial Polynomial::constant(VarSetPtr vars, const Rational& c) {
  Polynomial p(std::move(vars));
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(VarSetPtr vars, Index i, const Rational& c) {
  Polynomial p(std::move(vars));
  p.add_term({i}, c);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Rational Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (!vars_) vars_ = o.vars_;
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (!vars_) vars_ = o.vars_;
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r(a.vars_ ? a.vars_ : b.vars_);
  if (a.is_zero() || b.is_zero()) return r;
  const auto& odd = r.vars_->odd_flags();
  Monomial out;
  for (auto& [ma, ca] : a.terms_)
    for (auto& [mb, cb] : b.terms_) {
      int s = monomial_product(ma, mb, odd, out);
      if (s == 0) continue;
      r.add_term(out, s > 0 ? ca * cb : -(ca * cb));
    }
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

Polynomial Polynomial::homogeneous(size_t length) const {
  return filter([length](const Monomial& m) { return m.size() == length; });
}

Polynomial Polynomial::filter(const std::function<bool(const Monomial&)>& keep) const {
  Polynomial r(vars_);
  for (auto& [m, c] : terms_)
    if (keep(m)) r.terms_.emplace(m, c);
  return r;
}

size_t Polynomial::max_length() const {
  size_t n = 0;
  for (auto& [m, c] : terms_) n = std::max(n, m.size());
  return n;
}

Polynomial Polynomial::left_derivative(Index v) const {
  Polynomial r(vars_);
  Monomial out;
  for (auto& [m, c] : terms_) {
    int k = left_derive(m, v, vars_->odd_flags(), out);
    if (k) r.add_term(out, c * Rational(k));
  }
  return r;
}

Polynomial Polynomial::right_derivative(Index v) const {
  Polynomial r(vars_);
  Monomial out;
  for (auto& [m, c] : terms_) {
    int k = right_derive(m, v, vars_->odd_flags(), out);
    if (k) r.add_term(out, c * Rational(k));
  }
  return r;
}

std::vector<std::pair<Monomial, Rational>> Polynomial::sorted_terms() const {
  std::vector<std::pair<Monomial, Rational>> t(terms_.begin(), terms_.end());
  std::sort(t.begin(), t.end(), [](const auto& x, const auto& y) {
    if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
    return std::lexicographical_compare(x.first.begin(), x.first.end(), y.first.begin(), y.first.end());
  });
  return t;
}

std::string Polynomial::monomial_str(const Monomial& m) const {
  if (m.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < m.size();) {
    size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    if (!s.empty()) s += "*";
    s += (*vars_)[m[i]].name;
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : sorted_terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")*" << monomial_str(m);
  }
  return os.str();
}

VectorField::VectorField(VarSetPtr v) : vars(std::move(v)) {
  comp.assign(vars->size(), Polynomial(vars));
}

Polynomial VectorField::apply(const Polynomial& f) const {
  Polynomial r(vars);
  const auto& odd = vars->odd_flags();
  // derivatives of f grouped by variable
  std::vector<Polynomial> df(vars->size(), Polynomial(vars));
  Monomial out;
  for (auto& [m, c] : f.terms()) {
    for (size_t i = 0; i < m.size(); ++i) {
      if (i > 0 && m[i] == m[i - 1]) continue;
      int k = left_derive(m, m[i], odd, out);
      if (k) df[m[i]].add_term(out, c * Rational(k));
    }
  }
  for (Index k = 0; k < vars->size(); ++k)
    if (!df[k].is_zero() && !comp[k].is_zero()) r += comp[k] * df[k];
  return r;
}

bool VectorField::is_zero() const {
  for (auto& p : comp)
    if (!p.is_zero()) return false;
  return true;
}

VectorField commutator(const VectorField& X, int degX, const VectorField& Y, int degY) {
  VectorField r(X.vars);
  int s = sign_pow(degX * degY);
  for (Index k = 0; k < X.vars->size(); ++k) {
    r.comp[k] = X.apply(Y.comp[k]);
    Polynomial t = Y.apply(X.comp[k]);
    if (s > 0)
      r.comp[k] -= t;
    else
      r.comp[k] += t;
  }
  return r;
}

Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images, const VarSetPtr& target) {
  if (images.size() != f.vars()->size()) throw InputError("substitute: wrong number of images");
  Polynomial r(target);
  for (auto& [m, c] : f.terms()) {
    Polynomial t = Polynomial::constant(target, c);
    for (Index v : m) t = t * images[v];
    r += t;
  }
  return r;
}

PoissonTensor::PoissonTensor(VarSetPtr vars) : vars_(std::move(vars)) { rows_.resize(vars_->size()); }

void PoissonTensor::set(Index a, Index b, const Rational& c) {
  auto& row = rows_[a];
  auto it = std::lower_bound(row.begin(), row.end(), b, [](const auto& p, Index k) { return p.first < k; });
  if (it != row.end() && it->first == b) {
    if (c.is_zero())
      row.erase(it);
    else
      it->second = c;
  } else if (!c.is_zero()) {
    row.insert(it, {b, c});
  }
}

Rational PoissonTensor::get(Index a, Index b) const {
  for (auto& [k, c] : rows_[a])
    if (k == b) return c;
  return Rational(0);
}

Polynomial poisson_bracket(const PoissonTensor& P, const Polynomial& F, const Polynomial& G) {
  const auto& vars = P.vars();
  const auto& odd = vars->odd_flags();
  Polynomial r(vars);
  if (F.is_zero() || G.is_zero()) return r;
  // left derivatives of G, per variable
  std::vector<std::vector<std::pair<Monomial, Rational>>> dG(vars->size());
  Monomial out;
  for (auto& [m, c] : G.terms())
    for (size_t i = 0; i < m.size(); ++i) {
      if (i > 0 && m[i] == m[i - 1]) continue;
      int k = left_derive(m, m[i], odd, out);
      if (k) dG[m[i]].emplace_back(out, c * Rational(k));
    }
  Polynomial::Terms acc;
  Monomial m1, prod;
  for (auto& [m, c] : F.terms())
    for (size_t i = 0; i < m.size(); ++i) {
      if (i > 0 && m[i] == m[i - 1]) continue;
      Index a = m[i];
      if (P.rows()[a].empty()) continue;
      int k = right_derive(m, a, odd, m1);
      if (!k) continue;
      Rational ca = c * Rational(k);
      for (auto& [b, p] : P.rows()[a]) {
        if (dG[b].empty()) continue;
        Rational cap = ca * p;
        for (auto& [m2, c2] : dG[b]) {
          int s = monomial_product(m1, m2, odd, prod);
          if (!s) continue;
          Rational v = cap * c2;
          if (s < 0) v = -v;
          auto [it, ins] = acc.try_emplace(prod, v);
          if (!ins) it->second += v;
        }
      }
    }
  for (auto& [mm, v] : acc)
    if (!v.is_zero()) r.add_term(mm, v);
  return r;
}

}  // namespace bvkit
