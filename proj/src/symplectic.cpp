#include "bvkit/symplectic.hpp"

#include <algorithm>
#include <numeric>

#include "bvkit/errors.hpp"

namespace bvkit {

namespace {

std::vector<bool> w_parity(const GradedVectorSpace& sp) {
  std::vector<bool> odd(sp.dim());
  for (Index i = 0; i < sp.dim(); ++i) odd[i] = ((sp.degree(i) - 1) & 1) != 0;
  return odd;
}

std::vector<std::string> labels_of(const GradedVectorSpace& sp, const std::vector<Index>& t) {
  std::vector<std::string> r;
  for (Index i : t) r.push_back(sp.label(i));
  return r;
}

struct UnionFind {
  std::vector<Index> p;
  explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  Index find(Index x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void join(Index a, Index b) { p[find(a)] = find(b); }
};

}  // namespace

ShiftedSymplecticStructure::ShiftedSymplecticStructure(SpacePtr space, int shift, Entries omega)
    : space_(std::move(space)), shift_(shift) {
  if (!space_) throw InputError("symplectic structure needs a space");
  const auto& sp = *space_;
  size_t n = sp.dim();
  for (auto& [ij, c] : omega) {
    if (ij.first >= n || ij.second >= n) throw InputError("pairing index out of range");
    if (!c.is_zero()) omega_[ij] = c;
  }
  g_rows_.assign(n, {});
  for (auto& [ij, c] : omega_) {
    Rational v = sp.degree(ij.first) & 1 ? -c : c;
    g_rows_[ij.first].push_back({ij.second, v});
  }
  vars_ = coordinate_variables(sp);

  // invert G block by block over the connected components of its support
  UnionFind uf(n);
  for (auto& [ij, c] : omega_) uf.join(ij.first, ij.second);
  std::map<Index, std::vector<Index>> comps;
  for (Index i = 0; i < n; ++i) comps[uf.find(i)].push_back(i);
  PoissonTensor P(vars_);
  for (auto& [root, C] : comps) {
    (void)root;
    size_t k = C.size();
    Matrix M(k, k);
    for (size_t r = 0; r < k; ++r)
      for (auto& [j, v] : g_rows_[C[r]]) {
        auto it = std::lower_bound(C.begin(), C.end(), j);
        M(r, static_cast<size_t>(it - C.begin())) = v;
      }
    auto inv = M.inverse();
    if (!inv) {
      Matrix K = M.kernel();
      SparseVec w;
      for (size_t r = 0; r < k; ++r)
        if (!K(r, 0).is_zero()) w.push_back({C[r], K(r, 0)});
      kernel_ = w;
      return;
    }
    for (size_t r = 0; r < k; ++r)
      for (size_t c = 0; c < k; ++c)
        if (!(*inv)(r, c).is_zero()) P.set(C[c], C[r], (*inv)(r, c));
  }
  poisson_ = std::move(P);
}

Rational ShiftedSymplecticStructure::omega(Index i, Index j) const {
  auto it = omega_.find({i, j});
  return it == omega_.end() ? Rational(0) : it->second;
}

Rational ShiftedSymplecticStructure::w_form(Index i, Index j) const {
  Rational c = omega(i, j);
  return space_->degree(i) & 1 ? -c : c;
}

Rational ShiftedSymplecticStructure::omega(const SparseVec& x, const SparseVec& y) const {
  Rational r(0);
  for (auto& [i, a] : x)
    for (auto& [j, b] : y) r += a * b * omega(i, j);
  return r;
}

const PoissonTensor& ShiftedSymplecticStructure::poisson_tensor() const {
  if (!poisson_) throw StructuralError("pairing is degenerate");
  return *poisson_;
}

ShiftedSymplecticStructure symmetric_pairing(SpacePtr space, int shift,
                                             const std::vector<std::tuple<Index, Index, Rational>>& entries) {
  ShiftedSymplecticStructure::Entries e;
  for (auto& [i, j, c] : entries) {
    if (i >= space->dim() || j >= space->dim()) throw InputError("pairing index out of range");
    e[{i, j}] += c;
    if (i != j) e[{j, i}] += c * Rational(sign_pow(space->degree(i) * space->degree(j)));
  }
  return ShiftedSymplecticStructure(std::move(space), shift, std::move(e));
}

SymplecticReport check_symplectic(const LInftyStructure& g, const ShiftedSymplecticStructure& omega,
                                  size_t max_arity) {
  SymplecticReport rep;
  rep.symmetry.name = "symplectic_symmetry";
  rep.nondegeneracy.name = "symplectic_nondegeneracy";
  rep.invariance.name = "symplectic_invariance";
  if (!same_space(g.space(), omega.space())) throw InputError("pairing and structure live on different spaces");
  const auto& sp = *omega.space();
  int n = omega.shift();

  for (auto& [ij, c] : omega.entries()) {
    auto [i, j] = ij;
    int di = sp.degree(i), dj = sp.degree(j);
    if (di + dj != 2 - n) {
      rep.symmetry.fail(Witness{{sp.label(i), sp.label(j)}, "", c, "pairs degrees " + std::to_string(di) + " and " +
                                                                     std::to_string(dj) + " at shift " +
                                                                     std::to_string(n)});
      continue;
    }
    Rational want = c * Rational(sign_pow(di * dj));
    Rational got = omega.omega(j, i);
    if (got != want) rep.symmetry.fail(Witness{{sp.label(j), sp.label(i)}, "", got - want, "not graded-symmetric"});
  }

  for (auto& [d, idx] : sp.components()) {
    size_t other = sp.dimension(2 - n - d);
    if (idx.size() != other)
      rep.nondegeneracy.fail(Witness{{sp.label(idx[0])}, "", Rational(static_cast<long>(idx.size())),
                                     "degree " + std::to_string(d) + " has dimension " + std::to_string(idx.size()) +
                                         " but pairs with dimension " + std::to_string(other)});
  }
  if (!omega.invertible()) {
    const auto& w = *omega.kernel_witness();
    for (auto& [i, c] : w) rep.nondegeneracy.fail(Witness{{sp.label(i)}, "", c, "kernel vector component"});
  }

  // invariance
  auto odd = w_parity(sp);
  std::vector<SparseVec> G(sp.dim());
  for (auto& [ij, c] : omega.entries()) G[ij.first].push_back({ij.second, omega.w_form(ij.first, ij.second)});
  bool classify = g.window_truncated() && sp.window().has_value();
  auto bounded = [&](const std::vector<Index>& M) {
    if (!classify) return false;
    std::vector<const std::vector<int>*> w;
    for (Index i : M) w.push_back(&sp.window()->weights[i]);
    return !sp.window()->admissible(w);
  };
  for (auto& [ar, br] : g.brackets()) {
    if (ar > max_arity) continue;
    std::map<std::pair<std::vector<Index>, Index>, Rational> raw;
    for (auto& [K, vec] : br.entries())
      for (auto& [o, c] : vec)
        for (auto& [y, gy] : G[o]) raw[{K, y}] += c * gy;
    std::map<std::vector<Index>, std::map<Index, Rational>> vals;
    for (auto& [ky, v] : raw) {
      if (v.is_zero()) continue;
      std::vector<Index> seq = ky.first;
      seq.push_back(ky.second);
      int s = sort_sign(seq, odd);
      if (s == 0) {
        if (bounded(seq))
          ++rep.invariance.window_bounded;
        else
          rep.invariance.fail(Witness{labels_of(sp, seq), "", v, "repeated odd input"});
        continue;
      }
      vals[seq][ky.second] = s > 0 ? v : -v;
    }
    for (auto& [M, byp] : vals) {
      Rational ref = byp.count(M.front()) ? byp.at(M.front()) : Rational(0);
      for (size_t p = 1; p < M.size(); ++p) {
        if (M[p] == M[p - 1]) continue;
        Rational v = byp.count(M[p]) ? byp.at(M[p]) : Rational(0);
        if (v == ref) continue;
        if (bounded(M)) {
          ++rep.invariance.window_bounded;
        } else {
          rep.invariance.fail(Witness{labels_of(sp, M), sp.label(M[p]), v - ref,
                                      "arity " + std::to_string(ar) + " form not symmetric"});
        }
        break;
      }
    }
  }
  rep.invariance.bounds["max_arity"] = static_cast<long>(max_arity);
  return rep;
}

ActionFunctional::ActionFunctional(Polynomial S, int shift) : S_(std::move(S)), shift_(shift) {
  for (auto& [m, c] : S_.terms()) {
    if (m.size() < 2) throw InputError("action functional has a term of polynomial degree " + std::to_string(m.size()));
    int d = monomial_degree(m, *S_.vars());
    if (d != shift + 1)
      throw InputError("action term " + S_.monomial_str(m) + " has degree " + std::to_string(d) + ", expected " +
                       std::to_string(shift + 1));
  }
}

ActionFunctional action_from_brackets(const LInftyStructure& g, const ShiftedSymplecticStructure& omega) {
  auto rep = check_symplectic(g, omega, g.max_arity());
  if (!rep.invariance.passed) throw StructuralError("pairing is not invariant; the action is not defined");
  const auto& vars = omega.vars();
  const auto& odd = vars->odd_flags();
  VectorField Q = to_vector_field(g, vars);
  // Euler: m S_m = sum_{a,j} G_aj Q^j_{(m-1)} x^a
  std::vector<std::vector<std::pair<Index, Rational>>> cols(vars->size());
  for (auto& [ij, c] : omega.entries()) cols[ij.second].push_back({ij.first, omega.w_form(ij.first, ij.second)});
  Polynomial S(vars);
  Monomial xa, prod;
  for (Index j = 0; j < vars->size(); ++j) {
    if (Q.comp[j].is_zero()) continue;
    for (auto& [a, gaj] : cols[j]) {
      xa.assign(1, a);
      for (auto& [m, c] : Q.comp[j].terms()) {
        int s = monomial_product(m, xa, odd, prod);
        if (!s) continue;
        Rational v = gaj * c / Rational(static_cast<long>(m.size() + 1));
        S.add_term(prod, s > 0 ? v : -v);
      }
    }
  }
  return ActionFunctional(std::move(S), omega.shift());
}

VectorField hamiltonian_field(const ActionFunctional& S, const ShiftedSymplecticStructure& omega) {
  const auto& vars = omega.vars();
  if (S.polynomial().vars() && S.polynomial().vars().get() != vars.get() && !S.is_zero())
    throw InputError("action is not written in the pairing's coordinates");
  if (S.shift() != omega.shift()) throw InputError("action and pairing have different shifts");
  VectorField Q(vars);
  if (S.is_zero()) return Q;
  const auto& P = omega.poisson_tensor();
  for (Index j = 0; j < vars->size(); ++j)
    Q.comp[j] = poisson_bracket(P, S.polynomial(), Polynomial::variable(vars, j));
  return Q;
}

LInftyStructure hamiltonian_vf(const ActionFunctional& S, const ShiftedSymplecticStructure& omega) {
  return from_vector_field(hamiltonian_field(S, omega), omega.space());
}

Polynomial cme_residual(const ActionFunctional& S, const ShiftedSymplecticStructure& omega) {
  if (S.is_zero()) return Polynomial(omega.vars());
  return poisson_bracket(omega.poisson_tensor(), S.polynomial(), S.polynomial());
}

CheckResult check_cme(const ActionFunctional& S, const ShiftedSymplecticStructure& omega) {
  CheckResult r;
  r.name = "classical_master_equation";
  report_polynomial_residual(r, cme_residual(S, omega), "{S,S}");
  return r;
}

TruncatedObservable poisson_bracket(const TruncatedObservable& f, const TruncatedObservable& h,
                                    const ShiftedSymplecticStructure& omega) {
  TruncatedObservable r;
  r.max_length = std::min(f.max_length, h.max_length);
  r.truncated = f.truncated || h.truncated;
  Polynomial full = poisson_bracket(omega.poisson_tensor(), f.f, h.f);
  size_t L = r.max_length;
  r.f = full.filter([L](const Monomial& m) { return m.size() <= L; });
  if (r.f.size() != full.size()) r.truncated = true;
  return r;
}

}  // namespace bvkit
