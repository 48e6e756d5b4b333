#include "bvkit/centre.hpp"

#include <algorithm>
#include <sstream>

#include "bvkit/errors.hpp"

namespace bvkit {

namespace {

std::vector<bool> w_parity(const GradedVectorSpace& sp) {
  std::vector<bool> odd(sp.dim());
  for (Index i = 0; i < sp.dim(); ++i) odd[i] = ((sp.degree(i) - 1) & 1) != 0;
  return odd;
}

void add_into(LInftyStructure& T, const LInftyStructure& S) {
  for (auto& [n, br] : S.brackets()) {
    if (!T.has_bracket(n)) T.set_bracket(n, T.empty_bracket(n));
    for (auto& [K, vec] : br.entries())
      for (auto& [o, c] : vec) T.add_shifted(K, o, c);
  }
}

LInftyStructure hamiltonian_brackets(const CotangentFrame& frame, const Polynomial& F) {
  if (F.is_zero()) return LInftyStructure(frame.total());
  return hamiltonian_vf(ActionFunctional(F, frame.shift()), frame.canonical());
}

Polynomial function_of_structure(const CotangentFrame& frame, const LInftyStructure& l) {
  return frame.function_of(to_vector_field(l, frame.base_vars()));
}

// Structure constants of two structures on spaces with the same basis.
void compare_structures(CheckResult& r, const LInftyStructure& got, const LInftyStructure& want) {
  std::set<size_t> arities;
  for (auto& [n, br] : got.brackets()) arities.insert(n);
  for (auto& [n, br] : want.brackets()) arities.insert(n);
  const auto& sp = *want.space();
  for (size_t n : arities) {
    std::map<std::vector<Index>, SparseVec> a, b;
    if (got.has_bracket(n)) a = got.bracket(n).entries();
    if (want.has_bracket(n)) b = want.bracket(n).entries();
    std::set<std::vector<Index>> keys;
    for (auto& [k, v] : a) keys.insert(k);
    for (auto& [k, v] : b) keys.insert(k);
    for (auto& k : keys) {
      SparseVec d = a.count(k) ? a[k] : SparseVec{};
      if (b.count(k)) sparse_axpy(d, Rational(-1), b[k]);
      if (d.empty()) continue;
      std::vector<std::string> in;
      for (Index i : k) in.push_back(sp.label(i));
      r.fail(Witness{in, sp.label(d.front().first), d.front().second, "bracket l_" + std::to_string(n)});
    }
  }
}

}  // namespace

LInftyModule coadjoint_module(const LInftyStructure& l, int n) {
  auto frame = make_frame(l.space(), n);
  const auto& ls = *l.space();
  size_t m = ls.dim();
  std::vector<std::string> labels;
  std::vector<int> degrees;
  auto star = dual_suffix(ls);
  for (Index a = 0; a < m; ++a) {
    labels.push_back(ls.label(a) + star);
    degrees.push_back(1 - n - ls.degree(a));
  }
  LInftyModule mod;
  mod.base = l;
  auto vs = std::make_shared<GradedVectorSpace>(labels, degrees);
  if (ls.window()) {
    WeightWindow w = *ls.window();
    for (auto& wt : w.weights)
      for (int& c : wt) c = -c;
    vs->set_window(std::move(w));
  }
  mod.space = vs;
  auto H = hamiltonian_brackets(*frame, function_of_structure(*frame, l));
  auto odd = w_parity(ls);
  for (auto& [arity, br] : H.brackets()) {
    size_t k = arity - 1;
    std::vector<SpacePtr> ins(k, l.space());
    ins.push_back(mod.space);
    MultilinearMap act(ins, mod.space, 1 - static_cast<int>(k));
    for (auto& [K, vec] : br.entries()) {
      size_t duals = static_cast<size_t>(std::count_if(K.begin(), K.end(), [&](Index i) { return i >= m; }));
      if (duals == 0) continue;  // the brackets of l itself
      if (duals > 1) throw StructuralError("cotangent brackets with two dual inputs");
      std::vector<Index> gpart(K.begin(), K.end() - 1);
      Index v = K.back() - m;
      for (auto& [o, c] : vec) {
        if (o < m) throw StructuralError("coadjoint action leaves the dual");
        for_each_arrangement(gpart, odd, [&](const std::vector<Index>& arr, int s) {
          if (s == 0) return;
          std::vector<Index> in(arr);
          in.push_back(v);
          act.add(in, o - m, c * Rational(s));
        });
      }
    }
    mod.actions.emplace(k, std::move(act));
  }
  return mod;
}

MultilinearMap TwistedCotangent::zero_section() const {
  MultilinearMap f(base.space(), 1, structure.space(), 0);
  for (Index a = 0; a < base.dim(); ++a) f.add({a}, a, Rational(1));
  return f;
}

LInftyStructure assemble_cotangent(const LInftyStructure& l, const HomotopyPoissonStructure& pi) {
  const auto& frame = *pi.frame;
  if (!same_space(l.space(), frame.base())) throw InputError("structure and polyvectors live on different spaces");
  auto semidirect = semidirect_total_space(l, coadjoint_module(l, frame.shift()));
  LInftyStructure T(frame.total());
  T.set_window_truncated(l.window_truncated());
  add_into(T, semidirect);
  add_into(T, hamiltonian_brackets(frame, pi.total()));
  return T;
}

TwistedCotangent twisted_cotangent(const LInftyStructure& l, const HomotopyPoissonStructure& pi, int n) {
  if (pi.frame->shift() != n) throw InputError("polyvectors live on T*[" + std::to_string(pi.frame->shift()) + "]");
  auto rep = check_homotopy_poisson(l, pi);
  if (!rep.result.passed) {
    for (auto& [kj, r] : rep.residual)
      if (!r.is_zero()) {
        std::ostringstream os;
        os << "not homotopy Poisson: residual at arity " << kj.first << ", " << kj.second << "-vector";
        throw StructuralError(os.str());
      }
    throw StructuralError("not homotopy Poisson");
  }
  TwistedCotangent tc;
  tc.base = l;
  tc.pi = pi;
  tc.frame = pi.frame;
  tc.coadjoint = coadjoint_module(l, n);
  tc.structure = assemble_cotangent(l, pi);
  return tc;
}

UniversalBulk universal_bulk(const LInftyStructure& l, const HomotopyPoissonStructure& pi, int n) {
  UniversalBulk ub;
  ub.centre = twisted_cotangent(l, pi, n);
  auto I = interval_model();
  ub.bulk = present_tensor(I, ub.centre.structure);
  ub.omega = aksz_symplectic(I, ub.centre.omega());
  return ub;
}

RoundtripReport roundtrip_check(const LInftyStructure& l, const HomotopyPoissonStructure& pi, int n) {
  RoundtripReport rep;
  rep.phase_space.name = "phase_space";
  rep.structure.name = "boundary_structure";
  rep.poisson.name = "boundary_poisson";
  auto ub = universal_bulk(l, pi, n);
  const auto& Z = ub.centre;
  auto ps = extract_phase_space(ub.bulk, ub.omega);
  if (ps.omega.entries() != Z.omega().entries() || ps.omega.shift() != n)
    rep.phase_space.fail(Witness{{}, "", Rational(0), "phase space pairing is not omega_can"});
  if (!(ps.structure == Z.structure))
    rep.phase_space.fail(Witness{{}, "", Rational(0), "phase space is not the higher Poisson centre"});
  if (!ps.report.passed()) rep.phase_space.fail(Witness{{}, "", Rational(0), "phase space is not symplectic"});

  const auto& ls = *l.space();
  const auto& zs = *Z.structure.space();
  std::vector<std::string> plus, minus;
  for (Index a = 0; a < ls.dim(); ++a) {
    plus.push_back(zs.label(Z.frame->x(a)));
    minus.push_back(zs.label(Z.frame->xi(a)));
  }
  size_t max_j = 4;
  for (auto& [j, p] : pi.components) max_j = std::max(max_j, j);
  auto bt = boundary_theory(split_by_labels(ps.structure, ps.omega, plus, minus), max_j);
  if (!bt.decomposition.higher_vanish)
    rep.poisson.fail(Witness{{}, "", Rational(0), "action has components above the polyvector bound"});

  // the boundary lives on its own copy of l; compare constants by index
  LInftyStructure induced(l.space());
  add_into(induced, bt.structure);
  compare_structures(rep.structure, induced, l);

  std::set<size_t> js;
  for (auto& [j, p] : pi.components) js.insert(j);
  for (auto& [j, p] : bt.pi.components) js.insert(j);
  const auto& vars = *pi.frame->vars();
  for (size_t j : js) {
    Polynomial d(pi.frame->vars());
    if (auto it = bt.pi.components.find(j); it != bt.pi.components.end())
      for (auto& [m, c] : it->second.terms()) d.add_term(m, c);
    if (auto it = pi.components.find(j); it != pi.components.end()) d -= it->second;
    for (auto& [m, c] : d.sorted_terms()) {
      std::vector<std::string> in;
      for (Index v : m) in.push_back(vars[v].name);
      rep.poisson.fail(Witness{in, "Pi_" + std::to_string(j), c, ""});
    }
  }
  return rep;
}

TrivialityReport cohomology_report(const LInftyStructure& g) {
  TrivialityReport rep;
  rep.acyclic.name = "acyclic";
  const auto& sp = *g.space();
  auto comps = sp.components();
  // rank of l_1 out of each degree
  std::map<int, size_t> rank;
  for (auto& [d, src] : comps) {
    auto it = comps.find(d + 1);
    if (it == comps.end()) {
      rank[d] = 0;
      continue;
    }
    const auto& tgt = it->second;
    Matrix M(tgt.size(), src.size());
    for (size_t c = 0; c < src.size(); ++c)
      for (auto& [o, v] : g.lie_value({src[c]})) {
        auto pos = std::lower_bound(tgt.begin(), tgt.end(), o) - tgt.begin();
        M(static_cast<size_t>(pos), c) = v;
      }
    rank[d] = M.rank();
  }
  for (auto& [d, src] : comps) {
    long h = static_cast<long>(src.size()) - static_cast<long>(rank[d]);
    if (auto it = rank.find(d - 1); it != rank.end()) h -= static_cast<long>(it->second);
    rep.cohomology[d] = h;
    if (h != 0)
      rep.acyclic.fail(Witness{{"degree " + std::to_string(d)}, "H", Rational(h), "nonzero cohomology of l_1"});
  }
  return rep;
}

TrivialityReport triviality_check(const LInftyStructure& g, const ShiftedSymplecticStructure& omega) {
  auto pi = poisson_bivector(omega);
  if (!same_space(g.space(), pi.frame->base())) throw InputError("pairing lives on a different space");
  auto tc = twisted_cotangent(g, pi, omega.shift() + 1);
  return cohomology_report(tc.structure);
}

}  // namespace bvkit
