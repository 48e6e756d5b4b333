#include "bvkit/boundary.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "bvkit/errors.hpp"

namespace bvkit {

namespace {

int vector_degree(const GradedVectorSpace& sp, const SparseVec& v) {
  if (v.empty()) throw InputError("splitting vector is zero");
  int d = sp.degree(v.front().first);
  for (auto& [i, c] : v)
    if (sp.degree(i) != d) throw InputError("splitting vector is not homogeneous");
  return d;
}

// Coefficients of vectors of g in the span of a fixed homogeneous family,
// solved degree by degree on a set of independent coordinate rows.
class SpanCoordinates {
 public:
  SpanCoordinates(const GradedVectorSpace& sp, const std::vector<SparseVec>& vecs) : sp_(sp), vecs_(vecs) {
    for (size_t v = 0; v < vecs.size(); ++v) blocks_[vector_degree(sp, vecs[v])].members.push_back(v);
    auto comps = sp.components();
    for (auto& [d, b] : blocks_) {
      auto it = comps.find(d);
      if (it == comps.end()) {
        independent_ = false;
        continue;
      }
      const auto& rows = it->second;
      Matrix A(rows.size(), b.members.size());
      for (size_t c = 0; c < b.members.size(); ++c)
        for (auto& [i, x] : vecs[b.members[c]]) {
          auto pos = std::lower_bound(rows.begin(), rows.end(), i) - rows.begin();
          A(static_cast<size_t>(pos), c) = x;
        }
      auto pick = A.independent_rows();
      if (pick.size() < b.members.size()) {
        independent_ = false;
        continue;
      }
      Matrix sub(pick.size(), pick.size());
      for (size_t r = 0; r < pick.size(); ++r) {
        b.rows.push_back(rows[pick[r]]);
        for (size_t c = 0; c < pick.size(); ++c) sub(r, c) = A(pick[r], c);
      }
      b.inverse = *sub.inverse();
    }
  }

  bool independent() const { return independent_; }

  // c with sum_v c_v vecs[v] = x, or nullopt outside the span.
  std::optional<SparseVec> coordinates(const SparseVec& x) const {
    SparseAccumulator acc;
    std::map<int, SparseVec> parts;
    for (auto& [i, c] : x) parts[sp_.degree(i)].push_back({i, c});
    for (auto& [d, part] : parts) {
      auto it = blocks_.find(d);
      if (it == blocks_.end() || it->second.rows.empty()) return std::nullopt;
      const auto& b = it->second;
      size_t m = b.members.size();
      std::vector<Rational> rhs(m);
      for (size_t r = 0; r < m; ++r) rhs[r] = sparse_coeff(part, b.rows[r]);
      SparseVec back;
      for (size_t c = 0; c < m; ++c) {
        Rational v;
        for (size_t r = 0; r < m; ++r)
          if (!rhs[r].is_zero()) v += b.inverse(c, r) * rhs[r];
        if (v.is_zero()) continue;
        acc.add(static_cast<Index>(b.members[c]), v);
        sparse_axpy(back, v, vecs_[b.members[c]]);
      }
      if (back != part) return std::nullopt;
    }
    return acc.take();
  }

 private:
  struct Block {
    std::vector<size_t> members;
    std::vector<Index> rows;
    Matrix inverse;
  };
  const GradedVectorSpace& sp_;
  std::vector<SparseVec> vecs_;
  std::map<int, Block> blocks_;
  bool independent_ = true;
};

// l_n(v_1, .., v_n) for arbitrary vectors, by multilinearity.
SparseVec bracket_on_vectors(const LInftyStructure& g, size_t n, const std::vector<const SparseVec*>& args) {
  SparseAccumulator acc;
  std::vector<Index> idx(n);
  std::function<void(size_t, Rational)> rec = [&](size_t k, Rational c) {
    if (k == n) {
      for (auto& [o, v] : g.shifted_value(idx)) acc.add(o, c * v);
      return;
    }
    for (auto& [i, x] : *args[k]) {
      idx[k] = i;
      rec(k + 1, c * x);
    }
  };
  rec(0, Rational(1));
  return acc.take();
}

void for_each_multiset(size_t r, size_t n, const std::vector<bool>& odd,
                       const std::function<void(const std::vector<Index>&)>& f) {
  std::vector<Index> key;
  std::function<void(Index)> rec = [&](Index start) {
    if (key.size() == n) {
      f(key);
      return;
    }
    for (Index v = start; v < r; ++v) {
      if (!key.empty() && key.back() == v && odd[v]) continue;
      key.push_back(v);
      rec(v);
      key.pop_back();
    }
  };
  rec(0);
}

std::vector<bool> w_parity(const GradedVectorSpace& sp) {
  std::vector<bool> odd(sp.dim());
  for (Index i = 0; i < sp.dim(); ++i) odd[i] = ((sp.degree(i) - 1) & 1) != 0;
  return odd;
}

std::vector<std::string> default_labels(const GradedVectorSpace& sp, const std::vector<SparseVec>& vecs,
                                        const std::string& prefix) {
  std::vector<std::string> out;
  for (size_t i = 0; i < vecs.size(); ++i) {
    const auto& v = vecs[i];
    if (v.size() == 1 && v.front().second == Rational(1))
      out.push_back(sp.label(v.front().first));
    else
      out.push_back(prefix + std::to_string(i));
  }
  return out;
}

std::string first_monomial(const Polynomial& p) {
  auto t = p.sorted_terms();
  if (t.empty()) return "";
  return t.front().second.str() + " " + p.monomial_str(t.front().first);
}

}  // namespace

SpacePtr LagrangianSplitting::plus_space() const {
  const auto& sp = *ambient.space();
  std::vector<std::string> labels = plus_labels;
  if (labels.size() != plus.size()) labels = default_labels(sp, plus, "p");
  std::vector<int> degrees;
  for (auto& v : plus) degrees.push_back(vector_degree(sp, v));
  auto out = std::make_shared<GradedVectorSpace>(labels, degrees);
  if (sp.window()) {
    WeightWindow w = *sp.window();
    w.weights.clear();
    bool ok = true;
    for (auto& v : plus) {
      const auto& first = sp.window()->weights[v.front().first];
      for (auto& [i, c] : v)
        if (sp.window()->weights[i] != first) ok = false;
      w.weights.push_back(first);
    }
    if (ok) out->set_window(std::move(w));
  }
  return out;
}

MultilinearMap LagrangianSplitting::inclusion() const {
  auto ps = plus_space();
  MultilinearMap f(ps, 1, ambient.space(), 0);
  for (Index a = 0; a < plus.size(); ++a) f.add({a}, plus[a]);
  return f;
}

LagrangianSplitting split_by_labels(const LInftyStructure& g, const ShiftedSymplecticStructure& omega,
                                    const std::vector<std::string>& plus, const std::vector<std::string>& minus) {
  LagrangianSplitting s;
  s.ambient = g;
  s.omega = omega;
  const auto& sp = *g.space();
  for (auto& l : plus) {
    s.plus.push_back({{sp.index_of(l), Rational(1)}});
    s.plus_labels.push_back(l);
  }
  for (auto& l : minus) {
    s.minus.push_back({{sp.index_of(l), Rational(1)}});
    s.minus_labels.push_back(l);
  }
  return s;
}

LInftyStructure induced_structure(const LagrangianSplitting& s) {
  auto ps = s.plus_space();
  LInftyStructure out(ps);
  out.set_window_truncated(s.ambient.window_truncated());
  SpanCoordinates span(*s.ambient.space(), s.plus);
  if (!span.independent()) throw StructuralError("l+ vectors are linearly dependent");
  auto odd = w_parity(*ps);
  for (auto& [n, br] : s.ambient.brackets()) {
    out.set_bracket(n, out.empty_bracket(n));
    if (br.is_zero()) continue;
    for_each_multiset(s.plus.size(), n, odd, [&](const std::vector<Index>& key) {
      std::vector<const SparseVec*> args;
      for (Index a : key) args.push_back(&s.plus[a]);
      auto v = bracket_on_vectors(s.ambient, n, args);
      if (v.empty()) return;
      auto c = span.coordinates(v);
      if (!c) return;  // leaves l+; the closure check reports it
      for (auto& [o, x] : *c) out.add_shifted(key, o, x);
    });
  }
  return out;
}

SplittingReport check_splitting(const LagrangianSplitting& s, size_t max_arity) {
  SplittingReport rep;
  rep.complement.name = "complement";
  rep.isotropy.name = "isotropy";
  rep.closure.name = "closure";
  rep.identification.name = "identification";
  rep.closure.bounds["max_arity"] = static_cast<long>(max_arity);
  const auto& sp = *s.ambient.space();
  auto plus_labels = s.plus_labels.size() == s.plus.size() ? s.plus_labels : default_labels(sp, s.plus, "p");
  auto minus_labels = s.minus_labels.size() == s.minus.size() ? s.minus_labels : default_labels(sp, s.minus, "m");

  // complement: dimensions per degree, then independence of l+ and l- together
  std::map<int, long> count;
  for (auto& [d, idx] : sp.components()) count[d] -= static_cast<long>(idx.size());
  for (auto& v : s.plus) ++count[vector_degree(sp, v)];
  for (auto& v : s.minus) ++count[vector_degree(sp, v)];
  for (auto& [d, c] : count)
    if (c != 0) {
      std::ostringstream os;
      os << "degree " << d << ": l+ and l- have " << (c > 0 ? "+" : "") << c << " vectors against g";
      rep.complement.fail(Witness{{"degree " + std::to_string(d)}, "dimension", Rational(c), os.str()});
    }
  if (rep.complement.passed) {
    std::vector<SparseVec> all = s.plus;
    all.insert(all.end(), s.minus.begin(), s.minus.end());
    if (!SpanCoordinates(sp, all).independent())
      rep.complement.fail(Witness{{}, "", Rational(0), "l+ and l- intersect"});
  }

  // isotropy
  auto iso = [&](const std::vector<SparseVec>& vs, const std::vector<std::string>& ls) {
    for (size_t i = 0; i < vs.size(); ++i)
      for (size_t j = i; j < vs.size(); ++j) {
        Rational w = s.omega.omega(vs[i], vs[j]);
        if (!w.is_zero()) rep.isotropy.fail(Witness{{ls[i], ls[j]}, "omega", w, ""});
      }
  };
  iso(s.plus, plus_labels);
  iso(s.minus, minus_labels);

  // closure: the inclusion is a strict map from the induced brackets
  SpanCoordinates span(sp, s.plus);
  if (!span.independent()) {
    rep.closure.fail(Witness{{}, "", Rational(0), "l+ vectors are linearly dependent"});
  } else {
    auto induced = induced_structure(s);
    auto sm = strict_map_check(s.inclusion(), induced, s.ambient, max_arity);
    std::string name = rep.closure.name;
    auto bounds = rep.closure.bounds;
    rep.closure = sm.compatibility;
    rep.closure.name = name;
    rep.closure.bounds = bounds;
  }

  // omega: l- -> l+*[n-2] is an isomorphism
  Matrix W(s.minus.size(), s.plus.size());
  for (size_t j = 0; j < s.minus.size(); ++j)
    for (size_t a = 0; a < s.plus.size(); ++a) W(j, a) = s.omega.omega(s.minus[j], s.plus[a]);
  size_t rk = W.rank();
  if (s.minus.size() != s.plus.size() || rk != s.plus.size()) {
    std::ostringstream os;
    os << "rank " << rk << " for dim l- = " << s.minus.size() << ", dim l+ = " << s.plus.size();
    rep.identification.fail(Witness{{}, "rank", Rational(static_cast<long>(rk)), os.str()});
  }
  return rep;
}

std::vector<SparseVec> suggest_complement(const LInftyStructure& g, const ShiftedSymplecticStructure& omega,
                                          const std::vector<SparseVec>& plus) {
  const auto& sp = *g.space();
  for (size_t i = 0; i < plus.size(); ++i)
    for (size_t j = i; j < plus.size(); ++j)
      if (!omega.omega(plus[i], plus[j]).is_zero()) throw StructuralError("l+ is not isotropic");
  if (2 * plus.size() != sp.dim()) throw StructuralError("l+ is not half-dimensional");
  if (!SpanCoordinates(sp, plus).independent()) throw StructuralError("l+ vectors are linearly dependent");

  // coordinate complement, greedily per degree
  std::vector<SparseVec> comp;
  std::vector<SparseVec> acc = plus;
  for (auto& [d, idx] : sp.components())
    for (Index k : idx) {
      acc.push_back({{k, Rational(1)}});
      if (SpanCoordinates(sp, acc).independent())
        comp.push_back(acc.back());
      else
        acc.pop_back();
    }
  // c_j + sum_a t_ja p_a isotropic: linear in t
  std::vector<std::pair<size_t, size_t>> unknowns;
  for (size_t j = 0; j < comp.size(); ++j)
    for (size_t a = 0; a < plus.size(); ++a)
      if (vector_degree(sp, comp[j]) == vector_degree(sp, plus[a])) unknowns.push_back({j, a});
  std::map<std::pair<size_t, size_t>, size_t> col;
  for (size_t u = 0; u < unknowns.size(); ++u) col[unknowns[u]] = u;
  std::vector<std::pair<size_t, size_t>> eqs;
  for (size_t i = 0; i < comp.size(); ++i)
    for (size_t j = i; j < comp.size(); ++j) eqs.push_back({i, j});
  Matrix A(eqs.size(), unknowns.size());
  std::vector<Rational> b(eqs.size());
  for (size_t e = 0; e < eqs.size(); ++e) {
    auto [i, j] = eqs[e];
    b[e] = -omega.omega(comp[i], comp[j]);
    for (size_t a = 0; a < plus.size(); ++a) {
      if (auto it = col.find({j, a}); it != col.end()) A(e, it->second) += omega.omega(comp[i], plus[a]);
      if (auto it = col.find({i, a}); it != col.end()) A(e, it->second) += omega.omega(plus[a], comp[j]);
    }
  }
  auto t = A.solve(b);
  if (!t) throw StructuralError("no isotropic complement found");
  std::vector<SparseVec> out = comp;
  for (size_t u = 0; u < unknowns.size(); ++u) {
    auto [j, a] = unknowns[u];
    if (!(*t)[u].is_zero()) sparse_axpy(out[j], (*t)[u], plus[a]);
  }
  return out;
}

Polynomial ActionDecomposition::component(size_t j) const {
  auto it = components.find(j);
  return it == components.end() ? Polynomial(frame->vars()) : it->second;
}

Polynomial ActionDecomposition::reassemble(const Polynomial& F) const {
  return substitute(F, to_ambient, action.polynomial().vars() ? action.polynomial().vars() : to_ambient.front().vars());
}

ActionDecomposition decompose_action(const LagrangianSplitting& s, size_t max_j) {
  auto rep = check_splitting(s);
  for (auto* r : rep.all())
    if (!r->passed) {
      std::string w = r->witnesses.empty() ? "" : r->witnesses.front().note;
      if (w.empty() && !r->witnesses.empty())
        for (auto& l : r->witnesses.front().inputs) w += (w.empty() ? "" : ",") + l;
      throw StructuralError("splitting fails " + r->name + (w.empty() ? "" : ": " + w));
    }
  const auto& sp = *s.ambient.space();
  size_t N = sp.dim(), r = s.plus.size();
  int n = s.shift();

  ActionDecomposition dec;
  dec.max_j = max_j;
  dec.frame = make_frame(s.plus_space(), n);
  const auto& frame = *dec.frame;
  dec.action = action_from_brackets(s.ambient, s.omega);
  const auto& ambient_vars = s.omega.vars();

  std::vector<SparseVec> all = s.plus;
  all.insert(all.end(), s.minus.begin(), s.minus.end());
  SpanCoordinates span(sp, all);
  // u^v = sum_k inv[k][v] x^k
  std::vector<SparseVec> inv(N);
  for (Index k = 0; k < N; ++k) inv[k] = *span.coordinates({{k, Rational(1)}});
  std::vector<SparseVec> coord(N);  // coordinate functional of vector v on the x^k
  for (Index k = 0; k < N; ++k)
    for (auto& [v, c] : inv[k]) coord[v].push_back({k, c});
  for (auto& c : coord) std::sort(c.begin(), c.end());

  // K_ja = {z^j, y^a}
  const auto& P = s.omega.poisson_tensor();
  Matrix K(r, r);
  for (size_t j = 0; j < r; ++j)
    for (auto& [k, ck] : coord[r + j])
      for (auto& [l, pkl] : P.rows()[k])
        for (size_t a = 0; a < r; ++a) {
          Rational cl = sparse_coeff(coord[a], l);
          if (!cl.is_zero()) K(j, a) += ck * pkl * cl;
        }
  auto T = K.inverse();
  if (!T) throw StructuralError("l- does not pair perfectly with l+");

  const auto& fv = frame.vars();
  dec.to_frame.assign(N, Polynomial(fv));
  for (size_t a = 0; a < r; ++a)
    for (auto& [k, c] : s.plus[a]) dec.to_frame[k] += Polynomial::variable(fv, frame.x(Index(a)), c);
  for (size_t j = 0; j < r; ++j)
    for (auto& [k, c] : s.minus[j])
      for (size_t a = 0; a < r; ++a)
        if (!K(j, a).is_zero()) dec.to_frame[k] += Polynomial::variable(fv, frame.xi(Index(a)), c * K(j, a));

  dec.to_ambient.assign(2 * r, Polynomial(ambient_vars));
  for (size_t a = 0; a < r; ++a) {
    for (auto& [k, c] : coord[a]) dec.to_ambient[frame.x(Index(a))] += Polynomial::variable(ambient_vars, k, c);
    for (size_t j = 0; j < r; ++j)
      if (!(*T)(a, j).is_zero())
        for (auto& [k, c] : coord[r + j])
          dec.to_ambient[frame.xi(Index(a))] += Polynomial::variable(ambient_vars, k, (*T)(a, j) * c);
  }

  auto S = substitute(dec.action.polynomial(), dec.to_frame, fv);
  for (auto& [m, c] : S.terms()) {
    size_t j = frame.fibre_degree(m);
    if (j > max_j) {
      dec.higher_vanish = false;
      continue;
    }
    dec.components.try_emplace(j, fv).first->second.add_term(m, c);
  }
  return dec;
}

BoundaryTheory boundary_theory(const LagrangianSplitting& s, size_t max_j) {
  BoundaryTheory bt;
  bt.decomposition = decompose_action(s, max_j);
  const auto& dec = bt.decomposition;
  const auto& frame = dec.frame;
  auto S0 = dec.component(0);
  if (!S0.is_zero()) throw StructuralError("S_0 does not vanish: " + first_monomial(S0));
  bt.structure = induced_structure(s);
  auto FQ = frame->function_of(to_vector_field(bt.structure, frame->base_vars()));
  auto diff = dec.component(1) - FQ;
  if (!diff.is_zero()) throw StructuralError("S_1 differs from the induced brackets at " + first_monomial(diff));
  std::map<size_t, Polynomial> comps;
  for (auto& [j, p] : dec.components)
    if (j >= 2 && !p.is_zero()) comps.emplace(j, p);
  bt.pi = HomotopyPoissonStructure(frame, std::move(comps));
  bt.check = check_homotopy_poisson(bt.structure, bt.pi);
  bt.check.result.bounds["max_polyvector"] = static_cast<long>(max_j);
  return bt;
}

PhaseSpace extract_phase_space(const TensorPresentation& bulk, const ShiftedSymplecticStructure& omega_bulk) {
  if (bulk.model.name != "interval") throw InputError("bulk is not presented as interval (x) Y");
  if (!same_space(omega_bulk.space(), bulk.total.space()))
    throw InputError("bulk pairing lives on a different space");
  if (!(tensor_linfty(bulk.model, bulk.factor) == bulk.total))
    throw InputError("bulk structure is not the recorded tensor product");
  const auto& Y = bulk.factor;
  const auto& ys = *Y.space();
  size_t dy = ys.dim();
  Index one = bulk.model.unit, dt = bulk.model.index("dt");
  ShiftedSymplecticStructure::Entries e;
  for (Index x = 0; x < dy; ++x)
    for (Index y = 0; y < dy; ++y) {
      Rational w = omega_bulk.omega(tensor_index(dy, one, x), tensor_index(dy, dt, y));
      if (!w.is_zero()) e[{x, y}] = ys.degree(x) & 1 ? w : -w;
    }
  PhaseSpace ps;
  ps.structure = Y;
  ps.omega = ShiftedSymplecticStructure(Y.space(), omega_bulk.shift() + 1, e);
  auto back = aksz_symplectic(bulk.model, ps.omega);
  if (back.entries() != omega_bulk.entries()) throw InputError("bulk pairing is not of the form I (x) omega");
  ps.report = check_symplectic(Y, ps.omega);
  return ps;
}

}  // namespace bvkit
