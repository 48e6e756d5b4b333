#include "fixtures.hpp"

namespace fixture {

ShiftedSymplecticStructure lib_pairing(const SpacePtr& sp, int shift, const oracle::Pairing& w) {
  ShiftedSymplecticStructure::Entries e;
  for (auto& [ij, c] : w) e[{Index(ij.first), Index(ij.second)}] = c;
  return ShiftedSymplecticStructure(sp, shift, e);
}

oracle::LieTable metric_table(const Rational& t) {
  oracle::LieTable g;
  g.labels = {"e", "h", "f", "u", "v"};
  g.degrees = {0, 0, 0, 0, 0};
  std::map<std::tuple<int, int, int>, Rational> phi;
  auto put = [&](int x, int y, int z, const Rational& c) {
    phi[{x, y, z}] += c;
    phi[{y, z, x}] += c;
    phi[{z, x, y}] += c;
    phi[{y, x, z}] -= c;
    phi[{x, z, y}] -= c;
    phi[{z, y, x}] -= c;
  };
  put(0, 1, 2, Rational(-2));
  put(0, 1, 3, t);
  put(1, 2, 4, t);
  // inverse of the pairing
  std::map<int, std::pair<int, Rational>> inv = {{0, {2, Rational(1)}},
                                                 {2, {0, Rational(1)}},
                                                 {1, {1, Rational(1, 2)}},
                                                 {3, {3, Rational(1)}},
                                                 {4, {4, Rational(1)}}};
  for (int x = 0; x < 5; ++x)
    for (int y = x + 1; y < 5; ++y) {
      oracle::Vec v;
      for (int z = 0; z < 5; ++z) {
        auto it = phi.find({x, y, z});
        if (it == phi.end() || it->second.is_zero()) continue;
        oracle::add_to(v, it->second * inv[z].second, oracle::Vec{{inv[z].first, Rational(1)}});
      }
      if (!v.empty()) g.set(x, y, v);
    }
  return g;
}

oracle::Pairing metric_pairing() {
  auto w = oracle::sl2_trace();
  w[{3, 3}] = Rational(1);
  w[{4, 4}] = Rational(1);
  return w;
}

LagrangianSplitting make_splitting(const LInftyStructure& g, const ShiftedSymplecticStructure& w,
                                   std::vector<SparseVec> plus, std::vector<SparseVec> minus) {
  LagrangianSplitting s;
  s.ambient = g;
  s.omega = w;
  s.plus = std::move(plus);
  s.minus = std::move(minus);
  return s;
}

std::vector<SparseVec> randomize_complement(oracle::Rng& rng, const LInftyStructure& g,
                                            const ShiftedSymplecticStructure& w, const std::vector<SparseVec>& plus,
                                            const std::vector<SparseVec>& minus) {
  const auto& sp = *g.space();
  auto deg = [&](const SparseVec& v) { return sp.degree(v.front().first); };
  std::vector<std::pair<size_t, size_t>> unknowns;
  for (size_t j = 0; j < minus.size(); ++j)
    for (size_t a = 0; a < plus.size(); ++a)
      if (deg(minus[j]) == deg(plus[a])) unknowns.push_back({j, a});
  std::vector<std::pair<size_t, size_t>> eqs;
  for (size_t i = 0; i < minus.size(); ++i)
    for (size_t j = i; j < minus.size(); ++j) eqs.push_back({i, j});
  Matrix A(eqs.size(), unknowns.size());
  for (size_t e = 0; e < eqs.size(); ++e) {
    auto [i, j] = eqs[e];
    for (size_t u = 0; u < unknowns.size(); ++u) {
      auto [k, a] = unknowns[u];
      if (k == j) A(e, u) += w.omega(minus[i], plus[a]);
      if (k == i) A(e, u) += w.omega(plus[a], minus[j]);
    }
  }
  Matrix K = A.kernel();
  std::vector<Rational> t(unknowns.size());
  for (size_t c = 0; c < K.cols(); ++c) {
    Rational r = rng.coin(70) ? rng.nonzero() : Rational(0);
    for (size_t u = 0; u < unknowns.size(); ++u) t[u] += r * K(u, c);
  }
  auto out = minus;
  for (size_t u = 0; u < unknowns.size(); ++u) {
    auto [j, a] = unknowns[u];
    if (!t[u].is_zero()) sparse_axpy(out[j], t[u], plus[a]);
  }
  return out;
}

namespace {

struct LMono {
  int a, b, e, f;
};

}  // namespace

oracle::AlgebraTable laurent_table(int N, const CdgaModel& model, bool del_only) {
  static const char* suf[2][2] = {{"", "_dw"}, {"_dz", "_dzdw"}};
  auto label = [](const LMono& m) {
    return "z" + std::to_string(m.a) + "_w" + std::to_string(m.b) + suf[m.e][m.f];
  };
  auto inside = [&](const LMono& m) { return m.a >= -N && m.a < N && m.b >= -N && m.b < N; };
  std::vector<LMono> monos;
  for (int a = -N; a < N; ++a)
    for (int b = -N; b < N; ++b)
      for (int e = 0; e < 2; ++e)
        for (int f = 0; f < 2; ++f) monos.push_back({a, b, e, f});
  oracle::AlgebraTable t;
  size_t n = monos.size();
  t.labels.resize(n);
  t.degrees.resize(n);
  t.d.assign(n, {});
  std::map<std::string, int> pos;
  for (auto& m : monos) {
    int i = int(model.index(label(m)));
    pos[label(m)] = i;
    t.labels[i] = label(m);
    t.degrees[i] = m.e + m.f;
  }
  for (auto& x : monos)
    for (auto& y : monos) {
      if ((x.e && y.e) || (x.f && y.f)) continue;
      LMono p{x.a + y.a, x.b + y.b, x.e | y.e, x.f | y.f};
      if (!inside(p)) continue;
      int s = (x.f && y.e) ? -1 : 1;
      t.mult[{pos[label(x)], pos[label(y)]}] = {{pos[label(p)], Rational(s)}};
    }
  for (auto& x : monos) {
    int i = pos[label(x)];
    // d/dz then dz in front
    if (!x.e && x.a != 0) {
      LMono p{x.a - 1, x.b, 1, x.f};
      if (inside(p)) oracle::add_to(t.d[i], Rational(x.a), {{pos[label(p)], Rational(1)}});
    }
    if (!del_only && !x.f && x.b != 0) {
      LMono p{x.a, x.b - 1, x.e, 1};
      if (inside(p)) oracle::add_to(t.d[i], Rational(x.e ? -x.b : x.b), {{pos[label(p)], Rational(1)}});
    }
  }
  return t;
}

LaurentSl2Oracle::LaurentSl2Oracle(int N) {
  auto model = laurent_dolbeault_model(N);
  auto sl2 = oracle::sl2_table();
  auto A = laurent_table(N, model, false);
  full = oracle::tensor_lie_table(A, sl2);
  del = oracle::tensor_lie_table(laurent_table(N, model, true), sl2);
  oracle::Vec integral;
  for (size_t i = 0; i < A.labels.size(); ++i)
    if (A.labels[i] == "z-1_w-1_dzdw") integral[int(i)] = Rational(1);
  w = oracle::tensor_pairing(A, integral, sl2, oracle::sl2_trace());
  for (size_t i = 0; i < full.labels.size(); ++i) index[full.labels[i]] = int(i);
}

std::set<int> LaurentSl2Oracle::where(const std::function<bool(const std::string&, const std::string&)>& keep) const {
  std::set<int> out;
  for (auto& [l, i] : index) {
    auto bar = l.find('|');
    if (keep(l.substr(0, bar), l.substr(bar + 1))) out.insert(i);
  }
  return out;
}

Polynomial safe_part(const Polynomial& p, const GradedVectorSpace& sp) {
  const auto& w = *sp.window();
  Polynomial out(p.vars());
  for (auto& [m, c] : p.terms()) {
    bool ok = true;
    for (Index v : m)
      for (size_t k = 0; k < w.components(); ++k)
        ok = ok && w.weights[v][k] >= w.lo[k] && w.weights[v][k] <= w.hi[k];
    if (ok) out.add_term(m, c);
  }
  return out;
}

std::set<int> set_union(const std::set<int>& a, const std::set<int>& b) {
  std::set<int> u = a;
  u.insert(b.begin(), b.end());
  return u;
}

SparseVec to_lib(const oracle::AlgebraTable& A, size_t ng, const oracle::Vec& v) {
  SparseVec r;
  for (auto& [k, c] : v) r.push_back({Index(k), A.degrees[size_t(k) / ng] % 2 ? -c : c});
  return r;
}

oracle::Vec from_lib(const oracle::AlgebraTable& A, size_t ng, const SparseVec& v) {
  oracle::Vec r;
  for (auto& [k, c] : v) r[int(k)] = A.degrees[k / ng] % 2 ? -c : c;
  return r;
}

std::map<int, Matrix> ce_total(const CeComplex& ce) {
  // row/column offsets of each symmetric degree inside a cohomological degree
  std::map<int, std::map<int, size_t>> offset;
  std::map<int, size_t> size;
  for (auto& [cp, b] : ce.basis) {
    offset[cp.first][cp.second] = size[cp.first];
    size[cp.first] += b.size();
  }
  std::map<int, Matrix> out;
  for (auto& [c, n] : size) {
    if (!size.count(c + 1)) continue;
    Matrix D(size[c + 1], n);
    for (auto& [k, m] : ce.blocks) {
      auto [bc, p, q] = k;
      if (bc != c) continue;
      size_t r0 = offset[c + 1][q], c0 = offset[c][p];
      for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) D(r0 + i, c0 + j) = m(i, j);
    }
    out.emplace(c, std::move(D));
  }
  return out;
}

namespace {

Polynomial var(const CotangentFrame& f, Index v) { return Polynomial::variable(f.vars(), v); }

}  // namespace

Polynomial linear_bivector(const CotangentFrame& f, const oracle::LieTable& t) {
  Polynomial pi(f.vars());
  for (auto& [ij, v] : t.br) {
    if (ij.first >= ij.second) continue;
    for (auto& [k, c] : v)
      pi += var(f, f.x(Index(k))) * var(f, f.xi(Index(ij.first))) * var(f, f.xi(Index(ij.second))) * c;
  }
  return pi;
}

std::vector<Monomial> candidate_monomials(const CotangentFrame& f, size_t j, size_t base) {
  const auto& vars = *f.vars();
  std::vector<Monomial> out;
  Monomial m;
  std::function<void(Index, size_t, size_t)> rec = [&](Index start, size_t nx, size_t nxi) {
    if (nxi == j && nx <= base && monomial_degree(m, vars) == f.shift() + 1) out.push_back(m);
    for (Index v = start; v < vars.size(); ++v) {
      bool fib = f.is_fibre(v);
      if (fib ? nxi == j : nx == base) continue;
      if (!m.empty() && m.back() == v && (vars[v].degree & 1)) continue;
      m.push_back(v);
      rec(v, nx + !fib, nxi + fib);
      m.pop_back();
    }
  };
  rec(0, 0, 0);
  return out;
}

Instance random_instance(oracle::Rng& rng, bool strict) {
  LInftyStructure l;
  int n = rng.uniform(1, 3);
  switch (rng.uniform(0, 2)) {
    case 0: {
      size_t d = size_t(rng.uniform(2, 4));
      std::vector<std::string> labels;
      std::vector<int> deg;
      for (size_t i = 0; i < d; ++i) {
        labels.push_back("a" + std::to_string(i));
        deg.push_back(rng.uniform(-1, 1));
      }
      l = abelian(make_space(labels, deg));
      break;
    }
    case 1:
      l = abelian(make_space({"a", "b", "c"}, {0, 0, 0}));
      break;
    default:
      l = sl2_algebra();
  }
  auto f = make_frame(l.space(), n);
  std::map<size_t, Polynomial> comps;
  for (size_t j = 2; j <= (strict ? 2u : 3u); ++j) {
    auto monos = candidate_monomials(*f, j, 1);
    if (monos.empty()) continue;
    Polynomial p(f->vars());
    int terms = rng.uniform(1, 3);
    for (int t = 0; t < terms; ++t) p.add_term(rng.pick(monos), rng.nonzero());
    if (!p.is_zero()) comps.emplace(j, p);
  }
  return {l, HomotopyPoissonStructure(f, comps)};
}

std::vector<Monomial> monomials(const VariableSet& vars, size_t max_len) {
  std::vector<Monomial> out;
  Monomial m;
  std::function<void(Index)> rec = [&](Index start) {
    out.push_back(m);
    if (m.size() == max_len) return;
    for (Index v = start; v < vars.size(); ++v) {
      if (!m.empty() && m.back() == v && vars.odd(v)) continue;
      m.push_back(v);
      rec(v);
      m.pop_back();
    }
  };
  rec(0);
  return out;
}

Polynomial mono(const VarSetPtr& vars, const Monomial& m, const Rational& c) {
  Polynomial p(vars);
  p.add_term(m, c);
  return p;
}

int degree_of(const Polynomial& p) {
  const auto& t = p.sorted_terms();
  return t.empty() ? 0 : monomial_degree(t.front().first, *p.vars());
}

Polynomial random_homogeneous(oracle::Rng& rng, const CotangentFrame& f, int degree, size_t max_len, int percent) {
  Polynomial p(f.vars());
  for (auto& m : monomials(*f.vars(), max_len))
    if (monomial_degree(m, *f.vars()) == degree && rng.coin(percent)) p.add_term(m, rng.nonzero());
  return p;
}

FramePtr random_frame(oracle::Rng& rng) {
  size_t dim = static_cast<size_t>(rng.uniform(1, 3));
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (size_t i = 0; i < dim; ++i) {
    labels.push_back(std::string(1, char('a' + i)));
    degrees.push_back(rng.uniform(-1, 2));
  }
  return make_frame(make_space(labels, degrees), rng.uniform(-1, 3));
}

FramePtr classical_frame(size_t dim) {
  std::vector<std::string> labels = {"u", "v", "w"};
  labels.resize(dim);
  return make_frame(make_space(labels, std::vector<int>(dim, 1)), 1);
}

}  // namespace fixture
