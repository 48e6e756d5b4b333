#include "bvkit/cdga.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "bvkit/errors.hpp"

namespace bvkit {

namespace {

SparseVec unit_vec(Index i) { return SparseVec{{i, Rational(1)}}; }

// Exterior algebra on degree-1 generators. Basis: subsets ordered by size,
// then lexicographically; label = generator names concatenated, "1" if empty.
struct Exterior {
  std::vector<unsigned> masks;
  std::map<unsigned, Index> index;
};

Exterior exterior_basis(size_t k) {
  Exterior e;
  for (size_t sz = 0; sz <= k; ++sz) {
    std::vector<unsigned> level;
    for (unsigned m = 0; m < (1u << k); ++m)
      if (static_cast<size_t>(__builtin_popcount(m)) == sz) level.push_back(m);
    std::sort(level.begin(), level.end(), [](unsigned x, unsigned y) {
      // lexicographic in the generator sequence
      for (unsigned b = 1; b; b <<= 1) {
        if ((x & b) != (y & b)) return (x & b) != 0;
      }
      return false;
    });
    for (unsigned m : level) {
      e.index[m] = static_cast<Index>(e.masks.size());
      e.masks.push_back(m);
    }
  }
  return e;
}

CdgaModel exterior_model(const std::string& name, const std::vector<std::string>& gens,
                         const std::map<size_t, std::vector<std::pair<unsigned, Rational>>>& dgen) {
  size_t k = gens.size();
  Exterior e = exterior_basis(k);
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (unsigned m : e.masks) {
    std::string l;
    for (size_t i = 0; i < k; ++i)
      if (m >> i & 1) l += gens[i];
    labels.push_back(l.empty() ? "1" : l);
    degrees.push_back(__builtin_popcount(m));
  }
  CdgaModel A;
  A.name = name;
  A.algebra = GradedAlgebra(make_space(labels, degrees));
  size_t n = e.masks.size();
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      unsigned mx = e.masks[x], my = e.masks[y];
      if (mx & my) continue;
      int inv = 0;
      for (size_t i = 0; i < k; ++i)
        if (mx >> i & 1)
          for (size_t j = 0; j < i; ++j)
            if (my >> j & 1) ++inv;
      A.algebra.set_product(x, y, SparseVec{{e.index.at(mx | my), Rational(sign_pow(inv))}});
    }
  // extend d from the generators as a derivation
  for (Index x = 0; x < n; ++x) {
    unsigned m = e.masks[x];
    SparseVec dx;
    int pos = 0;
    for (size_t i = 0; i < k; ++i) {
      if (!(m >> i & 1)) continue;
      auto it = dgen.find(i);
      if (it != dgen.end()) {
        unsigned before = m & ((1u << i) - 1), after = m & ~((2u << i) - 1);
        SparseVec dg;
        for (auto& [mask, c] : it->second) dg.push_back({e.index.at(mask), c});
        std::sort(dg.begin(), dg.end(), [](auto& p, auto& q) { return p.first < q.first; });
        SparseVec t = A.algebra.product(A.algebra.product(unit_vec(e.index.at(before)), dg),
                                        unit_vec(e.index.at(after)));
        sparse_axpy(dx, Rational(sign_pow(pos)), t);
      }
      ++pos;
    }
    A.algebra.set_differential(x, dx);
  }
  A.unit = 0;
  A.dimension = static_cast<int>(k);
  A.integral = SparseVec{{static_cast<Index>(n - 1), Rational(1)}};
  return A;
}

std::vector<std::string> labels_of(const GradedVectorSpace& sp, std::initializer_list<Index> t) {
  std::vector<std::string> r;
  for (Index i : t) r.push_back(sp.label(i));
  return r;
}

}  // namespace

Rational CdgaModel::integrate(const SparseVec& v) const {
  Rational r(0);
  size_t i = 0, j = 0;
  while (i < v.size() && j < integral.size()) {
    if (v[i].first == integral[j].first) {
      r += v[i].second * integral[j].second;
      ++i;
      ++j;
    } else if (v[i].first < integral[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return r;
}

ModelProduct multiply(const CdgaModel& A, const SparseVec& a, const SparseVec& b) {
  ModelProduct r;
  r.value = A.algebra.product(a, b);
  for (auto& [i, ci] : a)
    for (auto& [j, cj] : b)
      if (!A.algebra.product_exact(i, j)) r.exact = false;
  return r;
}

ModelProduct apply_differential(const CdgaModel& A, const SparseVec& a) {
  ModelProduct r;
  r.value = A.algebra.differential(a);
  for (auto& [i, c] : a)
    if (!A.algebra.differential_exact(i)) r.exact = false;
  return r;
}

CdgaReport check_model(const CdgaModel& A) {
  CdgaReport rep;
  const auto& sp = A.space();
  size_t n = sp.dim();
  rep.axioms = A.algebra.check_axioms();
  rep.unit.name = "cdga_unit";
  rep.stokes.name = "cdga_stokes";
  rep.poincare.name = "cdga_poincare";
  rep.bigrading.name = "cdga_bigrading";

  if (A.unit >= n || sp.degree(A.unit) != 0) {
    rep.unit.fail(Witness{{}, "", Rational(0), "unit index is not a degree 0 basis element"});
  } else {
    for (Index a = 0; a < n; ++a) {
      SparseVec e = unit_vec(a);
      if (A.algebra.product(A.unit, a) != e)
        rep.unit.fail(Witness{labels_of(sp, {A.unit, a}), sp.label(a), Rational(1), "1 * a != a"});
      if (A.algebra.product(a, A.unit) != e)
        rep.unit.fail(Witness{labels_of(sp, {a, A.unit}), sp.label(a), Rational(1), "a * 1 != a"});
    }
    if (!A.algebra.d[A.unit].empty())
      rep.unit.fail(Witness{{sp.label(A.unit)}, sp.label(A.algebra.d[A.unit].front().first),
                            A.algebra.d[A.unit].front().second, "d(1) != 0"});
  }

  for (auto& [i, c] : A.integral)
    if (sp.degree(i) != A.dimension)
      rep.stokes.fail(Witness{{sp.label(i)}, "", c, "integral is nonzero off the top degree"});
  for (Index a = 0; a < n; ++a) {
    Rational v = A.integrate(A.algebra.d[a]);
    if (!v.is_zero()) rep.stokes.fail(Witness{{sp.label(a)}, "", v, "I(d a) != 0"});
  }

  auto comps = sp.components();
  for (auto& [p, idx] : comps) {
    auto it = comps.find(A.dimension - p);
    size_t m = it == comps.end() ? 0 : it->second.size();
    if (m != idx.size()) {
      rep.poincare.fail(Witness{{sp.label(idx.front())}, "", Rational(static_cast<long>(idx.size())),
                                "degree " + std::to_string(p) + " has dimension " + std::to_string(idx.size()) +
                                    ", complementary degree has " + std::to_string(m)});
      continue;
    }
    const auto& other = it->second;
    Matrix M(idx.size(), m);
    for (size_t r = 0; r < idx.size(); ++r)
      for (size_t c = 0; c < m; ++c) M(r, c) = A.pairing(idx[r], other[c]);
    if (M.rank() != idx.size()) {
      Matrix K = M.transpose().kernel();
      std::vector<std::string> in;
      Rational v(0);
      for (size_t r = 0; r < idx.size(); ++r)
        if (!K(r, 0).is_zero()) {
          in.push_back(sp.label(idx[r]));
          if (v.is_zero()) v = K(r, 0);
        }
      rep.poincare.fail(Witness{in, "", v, "pairing degenerate in degree " + std::to_string(p)});
    }
  }

  if (A.bigraded()) {
    auto& bg = rep.bigrading;
    if (A.bidegree.size() != n || A.del.size() != n || A.delbar.size() != n) {
      bg.fail(Witness{{}, "", Rational(0), "bigrading tables do not cover the basis"});
      return rep;
    }
    auto apply = [&](const std::vector<SparseVec>& D, const SparseVec& v) {
      SparseAccumulator acc;
      for (auto& [i, c] : v)
        for (auto& [o, co] : D[i]) acc.add(o, c * co);
      return acc.take();
    };
    for (Index a = 0; a < n; ++a) {
      auto [p, q] = A.bidegree[a];
      if (p + q != sp.degree(a)) bg.fail(Witness{{sp.label(a)}, "", Rational(p + q), "bidegree sum != degree"});
      for (auto& [o, c] : A.del[a])
        if (A.bidegree[o] != std::make_pair(p + 1, q)) bg.fail(Witness{{sp.label(a)}, sp.label(o), c, "del bidegree"});
      for (auto& [o, c] : A.delbar[a])
        if (A.bidegree[o] != std::make_pair(p, q + 1))
          bg.fail(Witness{{sp.label(a)}, sp.label(o), c, "delbar bidegree"});
      SparseVec sum = A.del[a];
      sparse_axpy(sum, Rational(1), A.delbar[a]);
      sparse_axpy(sum, Rational(-1), A.algebra.d[a]);
      if (!sum.empty()) bg.fail(Witness{{sp.label(a)}, sp.label(sum.front().first), sum.front().second, "d != del + delbar"});
      SparseVec e = unit_vec(a);
      SparseVec dd = apply(A.del, apply(A.del, e));
      if (!dd.empty()) bg.fail(Witness{{sp.label(a)}, sp.label(dd.front().first), dd.front().second, "del^2"});
      SparseVec bb = apply(A.delbar, apply(A.delbar, e));
      if (!bb.empty()) bg.fail(Witness{{sp.label(a)}, sp.label(bb.front().first), bb.front().second, "delbar^2"});
      SparseVec ac = apply(A.del, apply(A.delbar, e));
      sparse_axpy(ac, Rational(1), apply(A.delbar, apply(A.del, e)));
      if (!ac.empty())
        bg.fail(Witness{{sp.label(a)}, sp.label(ac.front().first), ac.front().second, "del delbar + delbar del"});
    }
    // products respect the bigrading
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        for (auto& [o, c] : A.algebra.product(a, b))
          if (A.bidegree[o] !=
              std::make_pair(A.bidegree[a].first + A.bidegree[b].first, A.bidegree[a].second + A.bidegree[b].second))
            bg.fail(Witness{labels_of(sp, {a, b}), sp.label(o), c, "product bidegree"});
  }
  return rep;
}

CdgaModel point_model() {
  CdgaModel A;
  A.name = "point";
  A.algebra = GradedAlgebra(make_space({"1"}, {0}));
  A.algebra.set_product(0, 0, unit_vec(0));
  A.unit = 0;
  A.dimension = 0;
  A.integral = unit_vec(0);
  return A;
}

CdgaModel interval_model() {
  CdgaModel A;
  A.name = "interval";
  A.algebra = GradedAlgebra(make_space({"1", "dt"}, {0, 1}));
  A.algebra.set_product(0, 0, unit_vec(0));
  A.algebra.set_product(0, 1, unit_vec(1));
  A.algebra.set_product(1, 0, unit_vec(1));
  A.unit = 0;
  A.dimension = 1;
  A.integral = unit_vec(1);
  return A;
}

CdgaModel torus_model() { return exterior_model("torus", {"a", "b"}, {}); }

CdgaModel heisenberg_model() {
  // dc = ab
  return exterior_model("heisenberg", {"a", "b", "c"}, {{2, {{0b011u, Rational(1)}}}});
}

CdgaModel laurent_dolbeault_model(int N) {
  if (N < 2) throw InputError("laurent model needs window radius N >= 2");
  const int span = 2 * N;
  auto idx = [&](int a, int b, int e, int f) -> Index {
    return static_cast<Index>((((a + N) * span + (b + N)) * 2 + e) * 2 + f);
  };
  auto inside = [&](int a) { return a >= -N && a <= N - 1; };
  static const char* suffix[2][2] = {{"", "_dw"}, {"_dz", "_dzdw"}};
  std::vector<std::string> labels;
  std::vector<int> degrees;
  std::vector<std::vector<int>> weights;
  std::vector<std::pair<int, int>> bideg;
  for (int a = -N; a < N; ++a)
    for (int b = -N; b < N; ++b)
      for (int e = 0; e < 2; ++e)
        for (int f = 0; f < 2; ++f) {
          labels.push_back("z" + std::to_string(a) + "_w" + std::to_string(b) + suffix[e][f]);
          degrees.push_back(e + f);
          weights.push_back({a + e, b + f});
          bideg.push_back({e, f});
        }
  auto sp = std::make_shared<GradedVectorSpace>(labels, degrees);
  sp->set_window(WeightWindow{weights, {-N + 1, -N + 1}, {N - 1, N - 1}, {}, 0});

  CdgaModel A;
  A.name = "laurent(" + std::to_string(N) + ")";
  A.algebra = GradedAlgebra(sp);
  A.bidegree = bideg;
  size_t n = sp->dim();
  A.del.assign(n, {});
  A.delbar.assign(n, {});
  for (int a = -N; a < N; ++a)
    for (int b = -N; b < N; ++b)
      for (int e = 0; e < 2; ++e)
        for (int f = 0; f < 2; ++f) {
          Index x = idx(a, b, e, f);
          for (int a2 = -N; a2 < N; ++a2)
            for (int b2 = -N; b2 < N; ++b2)
              for (int e2 = 0; e2 < 2; ++e2)
                for (int f2 = 0; f2 < 2; ++f2) {
                  if ((e && e2) || (f && f2)) continue;
                  Index y = idx(a2, b2, e2, f2);
                  int s = sign_pow(f * e2);  // dw past dz
                  if (inside(a + a2) && inside(b + b2))
                    A.algebra.set_product(x, y, SparseVec{{idx(a + a2, b + b2, e | e2, f | f2), Rational(s)}});
                  else
                    A.algebra.set_product(x, y, {}, false);
                }
          // del = dz d/dz, delbar = dw d/dw (dw moves past a dz)
          bool exact = true;
          if (!e && a != 0) {
            if (inside(a - 1))
              A.del[x] = SparseVec{{idx(a - 1, b, 1, f), Rational(a)}};
            else
              exact = false;
          }
          if (!f && b != 0) {
            if (inside(b - 1))
              A.delbar[x] = SparseVec{{idx(a, b - 1, e, 1), Rational(b * sign_pow(e))}};
            else
              exact = false;
          }
          SparseVec dx = A.del[x];
          sparse_axpy(dx, Rational(1), A.delbar[x]);
          A.algebra.set_differential(x, dx, exact);
        }
  A.unit = idx(0, 0, 0, 0);
  A.dimension = 2;
  A.integral = SparseVec{{idx(-1, -1, 1, 1), Rational(1)}};
  return A;
}

CdgaModel tensor_models(const CdgaModel& A, const CdgaModel& B) {
  const auto& as = A.space();
  const auto& bs = B.space();
  size_t na = as.dim(), nb = bs.dim();
  auto full = [&](Index a, Index b) { return as.label(a) + "." + bs.label(b); };
  auto shortl = [&](Index a, Index b) {
    if (a == A.unit && b == B.unit) return std::string("1");
    if (b == B.unit) return as.label(a);
    if (a == A.unit) return bs.label(b);
    return full(a, b);
  };
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (Index a = 0; a < na; ++a)
    for (Index b = 0; b < nb; ++b) {
      labels.push_back(shortl(a, b));
      degrees.push_back(as.degree(a) + bs.degree(b));
    }
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    for (Index a = 0; a < na; ++a)
      for (Index b = 0; b < nb; ++b) labels[a * nb + b] = full(a, b);
  auto sp = std::make_shared<GradedVectorSpace>(labels, degrees);
  if (as.window() || bs.window()) {
    size_t ca = as.window() ? as.window()->components() : 0;
    size_t cb = bs.window() ? bs.window()->components() : 0;
    WeightWindow w;
    if (ca) {
      w.lo = as.window()->lo;
      w.hi = as.window()->hi;
    }
    if (cb) {
      w.lo.insert(w.lo.end(), bs.window()->lo.begin(), bs.window()->lo.end());
      w.hi.insert(w.hi.end(), bs.window()->hi.begin(), bs.window()->hi.end());
    }
    for (Index a = 0; a < na; ++a)
      for (Index b = 0; b < nb; ++b) {
        std::vector<int> v;
        if (ca) v = as.window()->weights[a];
        if (cb) v.insert(v.end(), bs.window()->weights[b].begin(), bs.window()->weights[b].end());
        w.weights.push_back(std::move(v));
      }
    sp->set_window(std::move(w));
  }

  CdgaModel T;
  T.name = A.name + "*" + B.name;
  T.algebra = GradedAlgebra(sp);
  auto id = [&](Index a, Index b) { return static_cast<Index>(a * nb + b); };
  for (Index a = 0; a < na; ++a)
    for (Index b = 0; b < nb; ++b)
      for (Index a2 = 0; a2 < na; ++a2)
        for (Index b2 = 0; b2 < nb; ++b2) {
          const SparseVec& pa = A.algebra.product(a, a2);
          const SparseVec& pb = B.algebra.product(b, b2);
          bool exact = A.algebra.product_exact(a, a2) && B.algebra.product_exact(b, b2);
          Rational s(sign_pow(bs.degree(b) * as.degree(a2)));
          SparseAccumulator acc;
          for (auto& [o, c] : pa)
            for (auto& [p, d] : pb) acc.add(id(o, p), s * c * d);
          T.algebra.set_product(id(a, b), id(a2, b2), acc.take(), exact);
        }
  for (Index a = 0; a < na; ++a)
    for (Index b = 0; b < nb; ++b) {
      SparseAccumulator acc;
      for (auto& [o, c] : A.algebra.d[a]) acc.add(id(o, b), c);
      for (auto& [p, c] : B.algebra.d[b]) acc.add(id(a, p), Rational(sign_pow(as.degree(a))) * c);
      T.algebra.set_differential(id(a, b), acc.take(),
                                 A.algebra.differential_exact(a) && B.algebra.differential_exact(b));
    }
  T.unit = id(A.unit, B.unit);
  T.dimension = A.dimension + B.dimension;
  for (auto& [a, ca] : A.integral)
    for (auto& [b, cb] : B.integral) T.integral.push_back({id(a, b), ca * cb});
  std::sort(T.integral.begin(), T.integral.end(), [](auto& p, auto& q) { return p.first < q.first; });
  return T;
}

CdgaModel model_by_name(const std::string& name) {
  auto star = name.find('*');
  if (star != std::string::npos)
    return tensor_models(model_by_name(name.substr(0, star)), model_by_name(name.substr(star + 1)));
  if (name == "point") return point_model();
  if (name == "interval") return interval_model();
  if (name == "torus") return torus_model();
  if (name == "heisenberg") return heisenberg_model();
  static const std::regex laurent(R"(laurent\((\d+)\))");
  std::smatch m;
  if (std::regex_match(name, m, laurent)) return laurent_dolbeault_model(std::stoi(m[1]));
  throw InputError("unknown model '" + name + "'");
}

LInftyStructure tensor_linfty(const CdgaModel& A, const LInftyStructure& g) {
  return tensor_with_algebra(A.algebra, g);
}

MultilinearMap tensor_linear_map(const CdgaModel& A, const MultilinearMap& f) {
  if (f.arity() != 1 || f.degree() != 0) throw InputError("tensor_linear_map needs a degree 0 linear map");
  const auto& src = *f.inputs()[0];
  const auto& tgt = *f.output();
  SpacePtr s = tensor_space(A.space(), src), t = tensor_space(A.space(), tgt);
  MultilinearMap r(s, 1, t, 0);
  size_t ns = src.dim(), nt = tgt.dim();
  for (auto& [in, out] : f.entries())
    for (Index a = 0; a < A.dim(); ++a)
      for (auto& [y, c] : out) r.add({tensor_index(ns, a, in[0])}, tensor_index(nt, a, y), c);
  return r;
}

ShiftedSymplecticStructure aksz_symplectic(const CdgaModel& A, const ShiftedSymplecticStructure& eta) {
  const auto& as = A.space();
  const auto& gs = *eta.space();
  size_t na = as.dim(), ng = gs.dim();
  SpacePtr space = tensor_space(as, gs);
  // pairs of basis elements with I(ab) != 0
  std::vector<std::vector<std::pair<Index, Rational>>> partners(na);
  for (Index a = 0; a < na; ++a)
    for (Index b = 0; b < na; ++b) {
      Rational v = A.pairing(a, b);
      if (!v.is_zero()) partners[a].push_back({b, v});
    }
  ShiftedSymplecticStructure::Entries e;
  for (auto& [xy, c] : eta.entries()) {
    auto [x, y] = xy;
    for (Index a = 0; a < na; ++a)
      for (auto& [b, I] : partners[a]) {
        // a|x is (-1)^{|a|} a (x) x on the g level
        int s = as.degree(a) + as.degree(b) + gs.degree(x) * as.degree(b);
        e[{tensor_index(ng, a, x), tensor_index(ng, b, y)}] = Rational(sign_pow(s)) * I * c;
      }
  }
  return ShiftedSymplecticStructure(space, eta.shift() - A.dimension, std::move(e));
}

TensorPresentation present_tensor(const CdgaModel& A, const LInftyStructure& g) {
  return TensorPresentation{A, g, tensor_linfty(A, g)};
}

}  // namespace bvkit
