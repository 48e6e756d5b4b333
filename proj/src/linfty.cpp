#include "bvkit/linfty.hpp"

#include <algorithm>
#include <unordered_map>

#include "bvkit/errors.hpp"

namespace bvkit {

namespace {

std::vector<bool> w_parity(const GradedVectorSpace& sp) {
  std::vector<bool> odd(sp.dim());
  for (Index i = 0; i < sp.dim(); ++i) odd[i] = ((sp.degree(i) - 1) & 1) != 0;
  return odd;
}

Rational multiplicity_factorial(const std::vector<Index>& sorted) {
  Rational r(1);
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i > 1) r *= factorial(static_cast<int>(j - i));
    i = j;
  }
  return r;
}

template <class Seq>
int odd_pair_sign(const Seq& m, const std::vector<bool>& odd) {
  size_t c = 0;
  for (Index v : m) c += odd[v];
  return (c * (c - 1) / 2) & 1 ? -1 : 1;
}

std::vector<const std::vector<int>*> weight_ptrs(const WeightWindow& w, const std::vector<Index>& t) {
  std::vector<const std::vector<int>*> r;
  r.reserve(t.size());
  for (Index i : t) r.push_back(&w.weights[i]);
  return r;
}

std::vector<std::string> labels_of(const GradedVectorSpace& sp, const std::vector<Index>& t) {
  std::vector<std::string> r;
  r.reserve(t.size());
  for (Index i : t) r.push_back(sp.label(i));
  return r;
}

struct EntryRef {
  const std::vector<Index>* key;
  Rational coeff;
};

// Residual of the generalized Jacobi identity on every sorted basis multiset M
// of size <= max_arity:
//   R(M) = sum over nonempty sub-multisets I of M of
//          mult(I, M) eps(I, M\I) l_j(l_i(I), M\I),
// where mult counts the position sets realizing I and eps is the Koszul sign
// of the unshuffle. Computed output component by output component.
std::map<std::vector<Index>, SparseVec> relation_residuals(const LInftyStructure& g, size_t max_arity) {
  const auto& sp = *g.space();
  size_t dim = sp.dim();
  auto odd = w_parity(sp);
  std::vector<std::vector<EntryRef>> by_out(dim);
  for (auto& [n, m] : g.brackets()) {
    if (n > max_arity) continue;
    for (auto& [key, vec] : m.entries())
      for (auto& [o, c] : vec) by_out[o].push_back({&key, c});
  }
  std::map<std::vector<Index>, SparseVec> result;
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  std::vector<Index> J, seq, merged;
  Monomial M;
  for (Index o = 0; o < dim; ++o) {
    if (by_out[o].empty()) continue;
    acc.clear();
    for (auto& outer : by_out[o]) {
      const auto& K = *outer.key;
      for (size_t p = 0; p < K.size(); ++p) {
        if (p > 0 && K[p] == K[p - 1]) continue;
        Index t = K[p];
        if (by_out[t].empty()) continue;
        J.assign(K.begin(), K.end());
        J.erase(J.begin() + static_cast<long>(p));
        seq.assign(1, t);
        seq.insert(seq.end(), J.begin(), J.end());
        int sj = sort_sign(seq, odd);
        if (sj == 0) continue;
        for (auto& inner : by_out[t]) {
          const auto& I = *inner.key;
          if (I.size() + J.size() > max_arity) continue;
          seq.assign(I.begin(), I.end());
          seq.insert(seq.end(), J.begin(), J.end());
          int e = sort_sign(seq, odd);
          if (e == 0) continue;
          // multiplicity: prod over values of C(m_M(x), m_I(x))
          Rational mult(1);
          size_t a = 0;
          while (a < I.size()) {
            size_t b = a;
            while (b < I.size() && I[b] == I[a]) ++b;
            int mi = static_cast<int>(b - a);
            int mj = static_cast<int>(std::count(J.begin(), J.end(), I[a]));
            if (mj) mult *= binomial(mi + mj, mi);
            a = b;
          }
          M.assign(seq.begin(), seq.end());
          Rational v = inner.coeff * outer.coeff * mult;
          if (e * sj < 0) v = -v;
          acc[M] += v;
        }
      }
    }
    for (auto& [m, v] : acc)
      if (!v.is_zero()) result[std::vector<Index>(m.begin(), m.end())].push_back({o, v});
  }
  return result;
}

void report_residuals(CheckResult& r, const GradedVectorSpace& sp, bool classify,
                      const std::map<std::vector<Index>, SparseVec>& res,
                      const std::function<bool(const std::vector<Index>&)>& keep = nullptr) {
  for (auto& [M, vec] : res) {
    if (keep && !keep(M)) continue;
    bool bounded = classify && !sp.window()->admissible(weight_ptrs(*sp.window(), M));
    for (auto& [o, v] : vec) {
      if (bounded) {
        ++r.window_bounded;
      } else {
        r.fail(Witness{labels_of(sp, M), sp.label(o), v, ""});
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// LInftyStructure

LInftyStructure::LInftyStructure(SpacePtr space) : space_(std::move(space)) {
  if (!space_) throw InputError("L-infinity structure needs a space");
}

const MultilinearMap& LInftyStructure::bracket(size_t n) const {
  auto it = brackets_.find(n);
  if (it == brackets_.end()) throw InputError("no bracket of arity " + std::to_string(n) + " stored");
  return it->second;
}

MultilinearMap LInftyStructure::empty_bracket(size_t n) const {
  return MultilinearMap(space_, n, space_, 2 - static_cast<int>(n), Symmetry::graded_symmetric, 1);
}

void LInftyStructure::set_bracket(size_t n, MultilinearMap m) {
  if (n == 0) throw InputError("curved structures (arity 0 bracket) are not supported");
  if (m.arity() != n) throw InputError("bracket arity mismatch");
  if (!same_space(m.output(), space_)) throw InputError("bracket output space mismatch");
  for (auto& s : m.inputs())
    if (!same_space(s, space_)) throw InputError("bracket input space mismatch");
  if (m.degree() != 2 - static_cast<int>(n))
    throw InputError("bracket of arity " + std::to_string(n) + " must have degree " + std::to_string(2 - int(n)));
  if (n > 1 && !(m.symmetry() == Symmetry::graded_symmetric && m.shift() == 1)) m = symmetrize(m, 1);
  brackets_[n] = std::move(m);
}

void LInftyStructure::add_shifted(const std::vector<Index>& in, Index out, const Rational& c) {
  size_t n = in.size();
  if (n == 0) throw InputError("curved structures (arity 0 bracket) are not supported");
  auto it = brackets_.find(n);
  if (it == brackets_.end()) it = brackets_.emplace(n, empty_bracket(n)).first;
  it->second.add(in, out, c);
}

int LInftyStructure::decalage_sign(const GradedVectorSpace& sp, const std::vector<Index>& in) {
  size_t n = in.size();
  int e = 0;
  for (size_t k = 0; k < n; ++k) e += static_cast<int>(n - 1 - k) * sp.degree(in[k]);
  return sign_pow(e);
}

void LInftyStructure::add_lie(const std::vector<Index>& in, Index out, const Rational& c) {
  add_shifted(in, out, decalage_sign(*space_, in) > 0 ? c : -c);
}

SparseVec LInftyStructure::shifted_value(const std::vector<Index>& in) const {
  auto it = brackets_.find(in.size());
  if (it == brackets_.end()) return {};
  return it->second.value(in);
}

SparseVec LInftyStructure::lie_value(const std::vector<Index>& in) const {
  SparseVec v = shifted_value(in);
  return decalage_sign(*space_, in) > 0 ? v : sparse_scaled(v, Rational(-1));
}

bool LInftyStructure::is_zero() const {
  for (auto& [n, m] : brackets_)
    if (!m.is_zero()) return false;
  return true;
}

bool operator==(const LInftyStructure& a, const LInftyStructure& b) {
  if (!same_space(a.space_, b.space_)) return false;
  std::set<size_t> ar;
  for (auto& [n, m] : a.brackets_)
    if (!m.is_zero()) ar.insert(n);
  for (auto& [n, m] : b.brackets_)
    if (!m.is_zero()) ar.insert(n);
  for (size_t n : ar) {
    auto ia = a.brackets_.find(n);
    auto ib = b.brackets_.find(n);
    if (ia == a.brackets_.end() || ib == b.brackets_.end()) return false;
    if (ia->second.entries() != ib->second.entries()) return false;
  }
  return true;
}

LInftyStructure abelian(SpacePtr space) { return LInftyStructure(std::move(space)); }

std::string tuple_str(const GradedVectorSpace& sp, const std::vector<Index>& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + sp.label(t[i]);
  return s + ")";
}

// ---------------------------------------------------------------------------
// Relations

CheckResult check_relations(const LInftyStructure& g, size_t max_arity) {
  if (max_arity == 0) throw InputError("relation check needs max_arity >= 1");
  CheckResult r;
  r.name = "linfty_relations";
  r.bounds["max_arity"] = static_cast<long>(max_arity);
  const auto& sp = *g.space();
  bool classify = g.window_truncated() && sp.window().has_value();
  report_residuals(r, sp, classify, relation_residuals(g, max_arity));
  return r;
}

// ---------------------------------------------------------------------------
// Vector field picture

VarSetPtr coordinate_variables(const GradedVectorSpace& space, const std::string& suffix) {
  std::vector<Variable> v;
  v.reserve(space.dim());
  const auto& w = space.window();
  for (Index i = 0; i < space.dim(); ++i)
    v.push_back(Variable{space.label(i) + suffix, 1 - space.degree(i), w ? w->weights[i] : std::vector<int>{}});
  auto vs = std::make_shared<VariableSet>(std::move(v));
  if (w) vs->set_box(w->lo, w->hi, w->hidden, w->hidden_count);
  return vs;
}

VectorField to_vector_field(const LInftyStructure& g, const VarSetPtr& vars) {
  const auto& sp = *g.space();
  if (vars->size() != sp.dim()) throw InputError("coordinate count does not match the space");
  auto odd = w_parity(sp);
  VectorField Q(vars);
  Monomial m;
  for (auto& [n, br] : g.brackets())
    for (auto& [key, vec] : br.entries()) {
      Rational f = Rational(odd_pair_sign(key, odd)) / multiplicity_factorial(key);
      m.assign(key.begin(), key.end());
      for (auto& [k, c] : vec) Q.comp[k].add_term(m, odd[k] ? -(f * c) : f * c);
    }
  return Q;
}

LInftyStructure from_vector_field(const VectorField& Q, SpacePtr space) {
  LInftyStructure g(space);
  auto odd = w_parity(*space);
  if (Q.comp.size() != space->dim()) throw InputError("vector field size does not match the space");
  for (Index k = 0; k < Q.comp.size(); ++k)
    for (auto& [m, c] : Q.comp[k].sorted_terms()) {
      if (m.empty())
        throw StructuralError("vector field has a constant term in component " + space->label(k));
      std::vector<Index> key(m.begin(), m.end());
      Rational v = c * multiplicity_factorial(key) * Rational(odd_pair_sign(key, odd));
      g.add_shifted(key, k, odd[k] ? -v : v);
    }
  return g;
}

VectorField vector_field_square(const VectorField& Q) {
  VectorField R(Q.vars);
  for (size_t k = 0; k < Q.comp.size(); ++k) R.comp[k] = Q.apply(Q.comp[k]);
  return R;
}

void report_polynomial_residual(CheckResult& r, const Polynomial& residual, const std::string& label_prefix) {
  const auto& vars = *residual.vars();
  for (auto& [m, c] : residual.sorted_terms()) {
    if (!monomial_admissible(m, vars)) {
      ++r.window_bounded;
      continue;
    }
    std::vector<std::string> in;
    for (Index v : m) in.push_back(vars[v].name);
    r.fail(Witness{in, label_prefix, c, ""});
  }
}

// ---------------------------------------------------------------------------
// Chevalley-Eilenberg complex

namespace {

void enumerate_monomials(size_t nvars, size_t len, const std::vector<bool>& odd,
                         const std::function<void(const Monomial&)>& f) {
  Monomial m;
  std::function<void(Index)> rec = [&](Index start) {
    if (m.size() == len) {
      f(m);
      return;
    }
    for (Index v = start; v < nvars; ++v) {
      if (!m.empty() && m.back() == v && odd[v]) continue;
      m.push_back(v);
      rec(v);
      m.pop_back();
    }
  };
  rec(0);
}

}  // namespace

CeComplex ce_differential(const LInftyStructure& g, size_t truncation) {
  CeComplex ce;
  ce.base = g;
  ce.truncation = truncation;
  ce.vars = coordinate_variables(*g.space());
  const auto& vars = *ce.vars;
  VectorField Q = to_vector_field(g, ce.vars);
  std::map<std::pair<int, int>, std::unordered_map<Monomial, size_t, MonomialHash>> pos;
  for (size_t p = 0; p <= truncation; ++p)
    enumerate_monomials(vars.size(), p, vars.odd_flags(), [&](const Monomial& m) {
      auto key = std::make_pair(monomial_degree(m, vars), static_cast<int>(p));
      auto& b = ce.basis[key];
      pos[key].emplace(m, b.size());
      b.push_back(m);
    });
  for (auto& [key, mons] : ce.basis) {
    auto [c, p] = key;
    for (size_t col = 0; col < mons.size(); ++col) {
      Polynomial f(ce.vars);
      f.add_term(mons[col], Rational(1));
      Polynomial df = Q.apply(f);
      for (auto& [m, v] : df.terms()) {
        int q = static_cast<int>(m.size());
        if (q > static_cast<int>(truncation)) continue;
        auto tkey = std::make_pair(c + 1, q);
        auto& tpos = pos.at(tkey);
        auto bkey = std::make_tuple(c, p, q);
        auto it = ce.blocks.find(bkey);
        if (it == ce.blocks.end())
          it = ce.blocks.emplace(bkey, Matrix(ce.basis.at(tkey).size(), mons.size())).first;
        it->second(tpos.at(m), col) = v;
      }
    }
  }
  // d^2 = 0 on every stored bidegree; a path p -> q -> r has q <= r, so the
  // truncation never cuts an intermediate step
  for (auto& [key, mons] : ce.basis) {
    auto [c, p] = key;
    for (int r = p; r <= static_cast<int>(truncation); ++r) {
      auto tgt = ce.basis.find({c + 2, r});
      if (tgt == ce.basis.end()) continue;
      Matrix sum(tgt->second.size(), mons.size());
      bool any = false;
      for (int q = p; q <= r; ++q) {
        auto b1 = ce.blocks.find({c, p, q});
        auto b2 = ce.blocks.find({c + 1, q, r});
        if (b1 == ce.blocks.end() || b2 == ce.blocks.end()) continue;
        Matrix prod = b2->second * b1->second;
        for (size_t i = 0; i < prod.rows(); ++i)
          for (size_t j = 0; j < prod.cols(); ++j) sum(i, j) += prod(i, j);
        any = true;
      }
      if (any && !sum.is_zero())
        throw StructuralError("d_CE^2 != 0 from bidegree (" + std::to_string(c) + "," + std::to_string(p) +
                              ") to (" + std::to_string(c + 2) + "," + std::to_string(r) + ")");
    }
  }
  return ce;
}

// ---------------------------------------------------------------------------
// Graded algebras

GradedAlgebra::GradedAlgebra(SpacePtr s) : space(std::move(s)) {
  size_t n = space ? space->dim() : 0;
  table.assign(n * n, {});
  inexact.assign(n * n, 0);
  d.assign(n, {});
  d_inexact.assign(n, 0);
}

void GradedAlgebra::set_differential(Index a, SparseVec v, bool exact) {
  for (auto& [o, c] : v)
    if (space->degree(o) != space->degree(a) + 1)
      throw InputError("differential of " + space->label(a) + " violates the degree rule");
  d[a] = std::move(v);
  d_inexact[a] = exact ? 0 : 1;
}

bool GradedAlgebra::truncated() const {
  for (char c : inexact)
    if (c) return true;
  for (char c : d_inexact)
    if (c) return true;
  return false;
}

void GradedAlgebra::set_product(Index a, Index b, SparseVec v, bool exact) {
  size_t n = space->dim();
  for (auto& [o, c] : v)
    if (space->degree(o) != space->degree(a) + space->degree(b))
      throw InputError("product " + space->label(a) + "*" + space->label(b) + " violates the degree rule");
  table[a * n + b] = std::move(v);
  inexact[a * n + b] = exact ? 0 : 1;
}

SparseVec GradedAlgebra::product(const SparseVec& a, const SparseVec& b) const {
  SparseAccumulator acc;
  for (auto& [i, ci] : a)
    for (auto& [j, cj] : b)
      for (auto& [o, co] : product(i, j)) acc.add(o, ci * cj * co);
  return acc.take();
}

SparseVec GradedAlgebra::differential(const SparseVec& a) const {
  SparseAccumulator acc;
  for (auto& [i, ci] : a)
    for (auto& [o, co] : d[i]) acc.add(o, ci * co);
  return acc.take();
}

CheckResult GradedAlgebra::check_axioms() const {
  CheckResult r;
  r.name = "cdga_axioms";
  const auto& sp = *space;
  size_t n = sp.dim();
  auto lab = [&](std::initializer_list<Index> t) {
    std::vector<std::string> v;
    for (Index i : t) v.push_back(sp.label(i));
    return v;
  };
  auto report = [&](std::vector<std::string> in, const SparseVec& diff, bool exact, const char* what) {
    if (diff.empty()) return;
    if (!exact) {
      ++r.window_bounded;
      return;
    }
    r.fail(Witness{std::move(in), sp.label(diff.front().first), diff.front().second, what});
  };
  auto exact_vec = [&](const SparseVec& v, Index b) {
    for (auto& [o, c] : v)
      if (!product_exact(o, b)) return false;
    return true;
  };
  auto exact_vec_l = [&](Index a, const SparseVec& v) {
    for (auto& [o, c] : v)
      if (!product_exact(a, o)) return false;
    return true;
  };
  for (Index a = 0; a < n; ++a) {
    for (auto& [o, c] : d[a])
      if (sp.degree(o) != sp.degree(a) + 1) r.fail(Witness{lab({a}), sp.label(o), c, "differential degree"});
    SparseVec dd = differential(d[a]);
    bool ex = differential_exact(a);
    for (auto& [o, c] : d[a])
      if (!differential_exact(o)) ex = false;
    report(lab({a}), dd, ex, "d^2");
  }
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const SparseVec& ab = product(a, b);
      // commutativity
      SparseVec diff = ab;
      sparse_axpy(diff, Rational(-sign_pow(sp.degree(a) * sp.degree(b))), product(b, a));
      report(lab({a, b}), diff, product_exact(a, b) && product_exact(b, a), "commutativity");
      // Leibniz
      SparseVec lhs = differential(ab);
      SparseVec rhs = product(d[a], SparseVec{{b, Rational(1)}});
      sparse_axpy(rhs, Rational(sign_pow(sp.degree(a))), product(SparseVec{{a, Rational(1)}}, d[b]));
      sparse_axpy(lhs, Rational(-1), rhs);
      bool ex = product_exact(a, b) && exact_vec(d[a], b) && exact_vec_l(a, d[b]) && differential_exact(a) &&
                differential_exact(b);
      for (auto& [o, c] : ab)
        if (!differential_exact(o)) ex = false;
      report(lab({a, b}), lhs, ex, "Leibniz");
    }
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const SparseVec& ab = product(a, b);
      for (Index c = 0; c < n; ++c) {
        const SparseVec& bc = product(b, c);
        if (ab.empty() && bc.empty()) continue;
        SparseVec l = product(ab, SparseVec{{c, Rational(1)}});
        SparseVec rr = product(SparseVec{{a, Rational(1)}}, bc);
        sparse_axpy(l, Rational(-1), rr);
        if (l.empty()) continue;
        bool ex = product_exact(a, b) && product_exact(b, c) && exact_vec(ab, c) && exact_vec_l(a, bc);
        report(lab({a, b, c}), l, ex, "associativity");
      }
    }
  return r;
}

CheckResult ArtinCoefficients::check() const {
  CheckResult r = algebra.check_axioms();
  r.name = "artin_coefficients";
  r.bounds["nilpotency"] = static_cast<long>(nilpotency);
  const auto& sp = *algebra.space;
  // all products of `nilpotency` basis elements vanish
  std::vector<size_t> sizes(nilpotency, sp.dim());
  if (nilpotency >= 1)
    for_each_tuple(sizes, [&](const std::vector<Index>& t) {
      SparseVec p{{t[0], Rational(1)}};
      for (size_t i = 1; i < t.size() && !p.empty(); ++i) p = algebra.product(p, SparseVec{{t[i], Rational(1)}});
      if (!p.empty()) r.fail(Witness{labels_of(sp, t), sp.label(p.front().first), p.front().second, "nilpotency"});
    });
  return r;
}

ArtinCoefficients dual_numbers(int degree) {
  ArtinCoefficients m{GradedAlgebra(make_space({"eps"}, {degree})), 2};
  return m;
}

ArtinCoefficients truncated_polynomial(size_t N) {
  if (N < 2) throw InputError("truncated polynomial algebra needs N >= 2");
  std::vector<std::string> labels;
  for (size_t i = 1; i < N; ++i) labels.push_back(i == 1 ? "eps" : "eps^" + std::to_string(i));
  ArtinCoefficients m{GradedAlgebra(make_space(labels, std::vector<int>(N - 1, 0))), N};
  for (Index i = 0; i + 1 < N; ++i)
    for (Index j = 0; j + 1 < N; ++j)
      if (i + j + 2 < N) m.algebra.set_product(i, j, SparseVec{{i + j + 1, Rational(1)}});
  return m;
}

// ---------------------------------------------------------------------------
// Tensor with a graded commutative algebra

SpacePtr tensor_space(const GradedVectorSpace& As, const GradedVectorSpace& gs) {
  size_t da = As.dim(), dg = gs.dim();
  std::vector<std::string> labels;
  std::vector<int> degrees;
  labels.reserve(da * dg);
  for (Index a = 0; a < da; ++a)
    for (Index x = 0; x < dg; ++x) {
      labels.push_back(As.label(a) + "|" + gs.label(x));
      degrees.push_back(As.degree(a) + gs.degree(x));
    }
  auto sp = std::make_shared<GradedVectorSpace>(labels, degrees);
  // truncation comes from the algebra only; weights are the algebra's
  if (As.window()) {
    WeightWindow w = *As.window();
    w.weights.clear();
    for (Index a = 0; a < da; ++a)
      for (Index x = 0; x < dg; ++x) w.weights.push_back(As.window()->weights[a]);
    sp->set_window(std::move(w));
  } else if (gs.window()) {
    WeightWindow w = *gs.window();
    w.weights.clear();
    for (Index a = 0; a < da; ++a)
      for (Index x = 0; x < dg; ++x) w.weights.push_back(gs.window()->weights[x]);
    sp->set_window(std::move(w));
  }
  return sp;
}

LInftyStructure tensor_with_algebra(const GradedAlgebra& A, const LInftyStructure& g) {
  const auto& As = *A.space;
  const auto& gs = *g.space();
  size_t da = As.dim(), dg = gs.dim();
  SpacePtr space = tensor_space(As, gs);
  LInftyStructure T(space);
  T.set_window_truncated(g.window_truncated() || A.truncated());

  auto odd = w_parity(*space);
  // l_1 gets d_A (x) 1. On the shifted space the basis element a|x is
  // a (x) sx = (-1)^{|a|} s(a (x) x), which turns d_A into -d_A (x) 1 there.
  for (Index a = 0; a < da; ++a)
    for (auto& [b, c] : A.d[a])
      for (Index x = 0; x < dg; ++x) T.add_shifted({static_cast<Index>(a * dg + x)}, b * dg + x, -c);

  std::vector<Index> as, tuple;
  for (auto& [n, br] : g.brackets()) {
    for (auto& [Y, vec] : br.entries()) {
      as.assign(n, 0);
      std::vector<SparseVec> prefix(n);
      // depth-first over a-tuples, nondecreasing inside blocks of equal y
      std::function<void(size_t)> rec = [&](size_t k) {
        if (k == n) {
          int e = 0, ysum = 0;
          for (size_t i = 0; i < n; ++i) {
            e += As.degree(as[i]) * (1 + ysum);
            ysum += gs.degree(Y[i]) - 1;
          }
          tuple.resize(n);
          for (size_t i = 0; i < n; ++i) tuple[i] = as[i] * dg + Y[i];
          std::vector<Index> chk(tuple);
          if (sort_sign(chk, odd) == 0) return;
          Rational s(sign_pow(e));
          for (auto& [b, cb] : prefix[n - 1])
            for (auto& [o, co] : vec) T.add_shifted(tuple, b * dg + o, s * cb * co);
          return;
        }
        Index start = (k > 0 && Y[k] == Y[k - 1]) ? as[k - 1] : 0;
        for (Index a = start; a < da; ++a) {
          as[k] = a;
          if (k == 0) {
            prefix[0] = SparseVec{{a, Rational(1)}};
          } else {
            prefix[k] = A.product(prefix[k - 1], SparseVec{{a, Rational(1)}});
            if (prefix[k].empty()) continue;
          }
          rec(k + 1);
        }
      };
      rec(0);
    }
  }
  return T;
}

// ---------------------------------------------------------------------------
// Maurer-Cartan

namespace {

// sum over multisets B of size k from the support of b of prod c / mult! times f(B)
void for_each_power_multiset(const SparseVec& b, size_t k,
                             const std::function<void(const std::vector<Index>&, const Rational&)>& f) {
  std::vector<Index> pick;
  std::function<void(size_t, Rational)> rec = [&](size_t start, Rational coeff) {
    if (pick.size() == k) {
      f(pick, coeff / multiplicity_factorial(pick));
      return;
    }
    for (size_t i = start; i < b.size(); ++i) {
      pick.push_back(b[i].first);
      rec(i, coeff * b[i].second);
      pick.pop_back();
    }
  };
  rec(0, Rational(1));
}

}  // namespace

SparseVec mc_residual(const LInftyStructure& g, const ArtinCoefficients& m, const SparseVec& alpha) {
  LInftyStructure T = tensor_with_algebra(m.algebra, g);
  const auto& sp = *T.space();
  for (auto& [i, c] : alpha)
    if (i >= sp.dim() || sp.degree(i) != 1)
      throw InputError("Maurer-Cartan element must have total degree 1");
  // the even element of the shifted space corresponding to alpha is -alpha
  SparseVec b = sparse_scaled(alpha, Rational(-1));
  SparseAccumulator acc;
  for (auto& [n, br] : T.brackets())
    for_each_power_multiset(b, n, [&](const std::vector<Index>& B, const Rational& c) {
      for (auto& [o, v] : br.value(B)) acc.add(o, c * v);
    });
  return sparse_scaled(acc.take(), Rational(-1));
}

LInftyStructure twist(const LInftyStructure& g, const SparseVec& beta) {
  const auto& sp = *g.space();
  for (auto& [i, c] : beta)
    if (i >= sp.dim() || sp.degree(i) != 1) throw InputError("twisting element must have degree 1");
  SparseVec b = sparse_scaled(beta, Rational(-1));
  // curvature sum_k (1/k!) l_k(b^k) must vanish
  {
    SparseAccumulator acc;
    for (auto& [n, br] : g.brackets())
      for_each_power_multiset(b, n, [&](const std::vector<Index>& B, const Rational& c) {
        for (auto& [o, v] : br.value(B)) acc.add(o, c * v);
      });
    SparseVec curv = acc.take();
    if (!curv.empty())
      throw StructuralError("twisting element is not Maurer-Cartan: residual in " + sp.label(curv.front().first));
  }
  std::map<Index, Rational> bc(b.begin(), b.end());
  LInftyStructure t(g.space());
  t.set_window_truncated(g.window_truncated());
  for (auto& [m, br] : g.brackets())
    for (auto& [K, vec] : br.entries()) {
      // split K into a sub-multiset B from the support of b and the rest Y;
      // b is even, so l_m(b^k, Y) = (k!/mult_B!) prod c * l_m(K)
      std::vector<std::pair<Index, int>> groups;
      for (Index x : K) {
        if (!groups.empty() && groups.back().first == x) {
          ++groups.back().second;
        } else {
          groups.push_back({x, 1});
        }
      }
      std::vector<int> take(groups.size(), 0);
      std::function<void(size_t)> rec = [&](size_t gi) {
        if (gi == groups.size()) {
          size_t k = 0;
          Rational c(1);
          std::vector<Index> Y;
          for (size_t i = 0; i < groups.size(); ++i) {
            k += take[i];
            if (take[i]) {
              Rational p(1);
              for (int r = 0; r < take[i]; ++r) p *= bc.at(groups[i].first);
              c *= p / factorial(take[i]);
            }
            for (int r = take[i]; r < groups[i].second; ++r) Y.push_back(groups[i].first);
          }
          if (Y.empty()) return;
          for (auto& [o, v] : vec) t.add_shifted(Y, o, c * v);
          return;
        }
        int maxt = bc.count(groups[gi].first) ? groups[gi].second : 0;
        for (int r = 0; r <= maxt; ++r) {
          take[gi] = r;
          rec(gi + 1);
        }
        take[gi] = 0;
      };
      rec(0);
    }
  // windows: every twisted bracket hides up to (max arity - 1) copies of b
  if (sp.window() && !b.empty()) {
    auto s = std::make_shared<GradedVectorSpace>(sp);
    WeightWindow w = *sp.window();
    const auto& wb = w.weights[b.front().first];
    for (auto& [i, c] : b)
      if (w.weights[i] != wb) throw InputError("twisting element must be homogeneous in the window weights");
    w.hidden = wb;
    w.hidden_count = static_cast<int>(g.max_arity()) - 1;
    s->set_window(std::move(w));
    LInftyStructure r{SpacePtr(s)};
    r.set_window_truncated(g.window_truncated());
    for (auto& [n, br] : t.brackets())
      for (auto& [K, vec] : br.entries())
        for (auto& [o, v] : vec) r.add_shifted(K, o, v);
    return r;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Modules

namespace {

struct TotalSpace {
  SpacePtr space;
  size_t gdim;
};

TotalSpace total_space_of(const LInftyStructure& g, const GradedVectorSpace& v) {
  // v[-1]: an element of v of degree d sits in degree d + 1
  return {direct_sum(*g.space(), v.shifted(-1)), g.dim()};
}

LInftyStructure assemble_total(const LInftyStructure& g, const LInftyModule& v, const TotalSpace& ts) {
  LInftyStructure T(ts.space);
  T.set_window_truncated(g.window_truncated());
  for (auto& [n, br] : g.brackets())
    for (auto& [K, vec] : br.entries())
      for (auto& [o, c] : vec) T.add_shifted(K, o, c);
  Index off = static_cast<Index>(ts.gdim);
  for (auto& [n, act] : v.actions) {
    if (act.arity() != n + 1) throw InputError("module action of arity mismatch");
    for (auto& [key, vec] : act.entries()) {
      // canonical copies only: g-part nondecreasing
      bool sorted = std::is_sorted(key.begin(), key.end() - 1);
      if (!sorted) continue;
      std::vector<Index> t(key);
      t.back() += off;
      for (auto& [o, c] : vec) T.add_shifted(t, o + off, c);
    }
  }
  return T;
}

}  // namespace

CheckResult LInftyModule::check(size_t max_arity) const {
  CheckResult r;
  r.name = "module_relations";
  r.bounds["max_arity"] = static_cast<long>(max_arity);
  auto ts = total_space_of(base, *space);
  const auto& tsp = *ts.space;
  auto odd = w_parity(tsp);
  // actions must be graded-symmetric in the g slots
  for (auto& [n, act] : actions) {
    if (act.arity() != n + 1) throw InputError("module action arity mismatch");
    for (auto& [key, vec] : act.entries()) {
      std::vector<Index> gpart(key.begin(), key.end() - 1);
      int s = sort_sign(gpart, odd);
      std::vector<Index> canon(gpart);
      canon.push_back(key.back());
      SparseVec cv = s == 0 ? SparseVec{} : act.value(canon);
      SparseVec diff = vec;
      if (s != 0) sparse_axpy(diff, Rational(-s), cv);
      if (!diff.empty()) {
        std::vector<std::string> in;
        for (size_t i = 0; i + 1 < key.size(); ++i) in.push_back(base.space()->label(key[i]));
        in.push_back(space->label(key.back()));
        r.fail(Witness{in, space->label(diff.front().first), diff.front().second, "action symmetry"});
      }
    }
  }
  LInftyStructure T = assemble_total(base, *this, ts);
  bool classify = T.window_truncated() && tsp.window().has_value();
  Index off = static_cast<Index>(ts.gdim);
  report_residuals(r, tsp, classify, relation_residuals(T, max_arity), [&](const std::vector<Index>& M) {
    return std::count_if(M.begin(), M.end(), [&](Index i) { return i >= off; }) == 1;
  });
  return r;
}

LInftyModule adjoint_module(const LInftyStructure& g, int k, const std::string& suffix) {
  const auto& gs = *g.space();
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (Index i = 0; i < gs.dim(); ++i) {
    labels.push_back(gs.label(i) + suffix);
    degrees.push_back(gs.degree(i) - k);
  }
  auto vs = std::make_shared<GradedVectorSpace>(labels, degrees);
  if (gs.window()) vs->set_window(*gs.window());
  LInftyModule mod;
  mod.base = g;
  mod.space = vs;
  auto odd = w_parity(gs);
  int eps = 1 - k;  // degree of the formal parameter: v element e x has W-degree |e| + |x|_W
  for (auto& [m, br] : g.brackets()) {
    size_t n = m - 1;
    std::vector<SpacePtr> ins(n, g.space());
    ins.push_back(mod.space);
    auto it = mod.actions.find(n);
    if (it == mod.actions.end())
      it = mod.actions.emplace(n, MultilinearMap(ins, mod.space, 1 - static_cast<int>(n))).first;
    MultilinearMap& act = it->second;
    for (auto& [K, vec] : br.entries())
      for (size_t p = 0; p < K.size(); ++p) {
        if (p > 0 && K[p] == K[p - 1]) continue;
        std::vector<Index> Y(K);
        Index t = K[p];
        Y.erase(Y.begin() + static_cast<long>(p));
        std::vector<Index> seq(Y);
        seq.push_back(t);
        std::vector<Index> chk(seq);
        int s = sort_sign(chk, odd);
        if (s == 0) continue;
        for_each_arrangement(Y, odd, [&](const std::vector<Index>& arr, int sa) {
          if (sa == 0) return;
          int ysum = 0;
          for (Index y : arr) ysum += gs.degree(y) - 1;
          int sign = s * sa * sign_pow(eps * (1 + ysum));
          std::vector<Index> in(arr);
          in.push_back(t);
          for (auto& [o, c] : vec) act.add(in, o, sign > 0 ? c : -c);
        });
      }
  }
  return mod;
}

LInftyStructure semidirect_total_space(const LInftyStructure& g, const LInftyModule& v) {
  CheckResult r = v.check(std::max<size_t>(2, g.max_arity() + 1));
  if (!r.passed) {
    const auto& w = r.witnesses.front();
    std::string t;
    for (auto& s : w.inputs) t += (t.empty() ? "" : ",") + s;
    throw StructuralError("module relations fail at (" + t + ") -> " + w.output);
  }
  return assemble_total(g, v, total_space_of(g, *v.space));
}

// ---------------------------------------------------------------------------
// Strict maps

SparseVec apply_linear(const MultilinearMap& f, const SparseVec& v) {
  if (f.arity() != 1) throw InputError("apply_linear needs an arity-1 map");
  SparseAccumulator acc;
  for (auto& [i, c] : v)
    for (auto& [o, co] : f.value({i})) acc.add(o, c * co);
  return acc.take();
}

StrictMapReport strict_map_check(const MultilinearMap& f, const LInftyStructure& source,
                                 const LInftyStructure& target, size_t max_arity) {
  if (f.arity() != 1 || f.degree() != 0) throw InputError("strict map must be linear of degree 0");
  if (!same_space(f.inputs()[0], source.space()) || !same_space(f.output(), target.space()))
    throw InputError("strict map spaces do not match the structures");
  StrictMapReport rep;
  rep.compatibility.name = "strict_map";
  rep.compatibility.bounds["max_arity"] = static_cast<long>(max_arity);
  const auto& ss = *source.space();
  const auto& ts = *target.space();
  size_t sd = ss.dim();
  std::vector<SparseVec> img(sd);
  for (Index i = 0; i < sd; ++i) img[i] = f.value({i});
  // injectivity by rank
  {
    Matrix M(ts.dim(), sd);
    for (Index i = 0; i < sd; ++i)
      for (auto& [o, c] : img[i]) M(o, i) = c;
    rep.injective = M.rank() == sd;
  }
  auto odd = w_parity(ss);
  bool classify = (source.window_truncated() || target.window_truncated()) && ts.window().has_value();
  for (size_t n = 1; n <= max_arity; ++n) {
    bool src = source.has_bracket(n) && !source.bracket(n).is_zero();
    bool tgt = target.has_bracket(n) && !target.bracket(n).is_zero();
    if (!src && !tgt) continue;
    enumerate_monomials(sd, n, odd, [&](const Monomial& m) {
      std::vector<Index> key(m.begin(), m.end());
      SparseVec lhs = apply_linear(f, source.shifted_value(key));
      // l^tgt_n(f x_1, .., f x_n): f has degree 0, no signs
      SparseAccumulator acc;
      std::vector<Index> t(n);
      std::function<void(size_t, Rational)> rec = [&](size_t k, Rational c) {
        if (k == n) {
          for (auto& [o, v] : target.shifted_value(t)) acc.add(o, c * v);
          return;
        }
        for (auto& [j, cj] : img[key[k]]) {
          t[k] = j;
          rec(k + 1, c * cj);
        }
      };
      if (tgt) rec(0, Rational(1));
      sparse_axpy(lhs, Rational(-1), acc.take());
      if (lhs.empty()) return;
      if (classify) {
        // images of basis vectors are single elements in all uses; weigh by them
        std::vector<Index> tt;
        for (Index i : key)
          if (!img[i].empty()) tt.push_back(img[i].front().first);
        if (!ts.window()->admissible(weight_ptrs(*ts.window(), tt))) {
          rep.compatibility.window_bounded += lhs.size();
          return;
        }
      }
      for (auto& [o, v] : lhs) rep.compatibility.fail(Witness{labels_of(ss, key), ts.label(o), v, ""});
    });
  }
  return rep;
}

}  // namespace bvkit
