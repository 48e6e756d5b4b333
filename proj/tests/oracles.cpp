#include "oracles.hpp"

#include <functional>

#include "bvkit/matrix.hpp"

namespace oracle {

using bvkit::Index;

void add_to(Vec& y, const Rational& a, const Vec& x) {
  for (auto& [k, v] : x) {
    Rational& t = y[k];
    t += a * v;
    if (t.is_zero()) y.erase(k);
  }
}

Vec scaled(const Vec& x, const Rational& a) {
  Vec r;
  add_to(r, a, x);
  return r;
}

bool is_zero(const Vec& x) { return x.empty(); }

Rational Rng::nonzero() {
  int n = 0;
  while (n == 0) n = uniform(-4, 4);
  return Rational(n, uniform(1, 3));
}

static int sgn(int e) { return (e & 1) ? -1 : 1; }

void LieTable::set(int i, int j, const Vec& v) {
  br[{i, j}] = v;
  br[{j, i}] = scaled(v, Rational(-sgn(degrees[i] * degrees[j])));
}

Vec LieTable::bracket(const Vec& x, const Vec& y) const {
  Vec r;
  for (auto& [i, a] : x)
    for (auto& [j, b] : y) {
      auto it = br.find({i, j});
      if (it != br.end()) add_to(r, a * b, it->second);
    }
  return r;
}

Vec LieTable::diff(const Vec& x) const {
  Vec r;
  if (d.empty()) return r;
  for (auto& [i, a] : x) add_to(r, a, d[i]);
  return r;
}

int LieTable::index(const std::string& l) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == l) return int(i);
  return -1;
}

LieTable sl2_table() {
  LieTable t;
  t.labels = {"e", "h", "f"};
  t.degrees = {0, 0, 0};
  t.set(1, 0, {{0, Rational(2)}});
  t.set(1, 2, {{2, Rational(-2)}});
  t.set(0, 2, {{1, Rational(1)}});
  return t;
}

LieTable broken_sl2_table() {
  LieTable t = sl2_table();
  t.set(1, 0, {{0, Rational(3)}});
  return t;
}

std::set<std::multiset<std::string>> jacobi_violations(const LieTable& t) {
  std::set<std::multiset<std::string>> out;
  int n = int(t.dim());
  auto e = [](int i) { return Vec{{i, Rational(1)}}; };
  for (int i = 0; i < n; ++i) {
    if (!is_zero(t.diff(t.diff(e(i))))) out.insert({t.labels[i]});
    for (int j = 0; j < n; ++j) {
      // d[x,y] = [dx,y] + (-1)^{|x|}[x,dy]
      Vec l = t.diff(t.bracket(e(i), e(j)));
      add_to(l, Rational(-1), t.bracket(t.diff(e(i)), e(j)));
      add_to(l, Rational(-sgn(t.degrees[i])), t.bracket(e(i), t.diff(e(j))));
      if (!is_zero(l)) out.insert({t.labels[i], t.labels[j]});
      for (int k = 0; k < n; ++k) {
        Vec lhs = t.bracket(e(i), t.bracket(e(j), e(k)));
        Vec rhs = t.bracket(t.bracket(e(i), e(j)), e(k));
        add_to(rhs, Rational(sgn(t.degrees[i] * t.degrees[j])), t.bracket(e(j), t.bracket(e(i), e(k))));
        add_to(lhs, Rational(-1), rhs);
        if (!is_zero(lhs)) out.insert({t.labels[i], t.labels[j], t.labels[k]});
      }
    }
  }
  return out;
}

bvkit::LInftyStructure to_structure(const LieTable& t) {
  auto sp = bvkit::make_space(t.labels, t.degrees);
  bvkit::LInftyStructure g(sp);
  for (size_t i = 0; i < t.d.size(); ++i)
    for (auto& [k, v] : t.d[i]) g.add_lie({Index(i)}, Index(k), v);
  for (auto& [ij, v] : t.br) {
    if (ij.first > ij.second) continue;
    for (auto& [k, c] : v) g.add_lie({Index(ij.first), Index(ij.second)}, Index(k), c);
  }
  return g;
}

Vec AlgebraTable::product(const Vec& a, const Vec& b) const {
  Vec r;
  for (auto& [i, x] : a)
    for (auto& [j, y] : b) {
      auto it = mult.find({i, j});
      if (it != mult.end()) add_to(r, x * y, it->second);
    }
  return r;
}

AlgebraTable dual_numbers_table() {
  AlgebraTable a;
  a.labels = {"eps"};
  a.degrees = {0};
  a.d.assign(1, {});
  return a;
}

AlgebraTable cubic_truncation_table() {
  AlgebraTable a;
  a.labels = {"eps", "eps^2"};
  a.degrees = {0, 0};
  a.d.assign(2, {});
  a.mult[{0, 0}] = {{1, Rational(1)}};
  return a;
}

AlgebraTable contact_table() {
  // Lambda(a,b,c)/(ac, bc): basis a, b, c, ab with dc = ab
  AlgebraTable A;
  A.labels = {"a", "b", "c", "ab"};
  A.degrees = {1, 1, 1, 2};
  A.d.assign(4, {});
  A.d[2] = {{3, Rational(1)}};
  A.mult[{0, 1}] = {{3, Rational(1)}};
  A.mult[{1, 0}] = {{3, Rational(-1)}};
  return A;
}

Vec mc_curvature(const AlgebraTable& A, const LieTable& g, const Vec& alpha) {
  int ng = int(g.dim());
  auto split = [&](int k) { return std::make_pair(k / ng, k % ng); };
  // d(a x) = da x + (-1)^{|a|} a dx
  Vec r;
  for (auto& [k, c] : alpha) {
    auto [a, x] = split(k);
    for (auto& [b, cb] : A.d[a]) add_to(r, c * cb, Vec{{b * ng + x, Rational(1)}});
    for (auto& [y, cy] : g.diff(Vec{{x, Rational(1)}}))
      add_to(r, c * cy * Rational(sgn(A.degrees[a])), Vec{{a * ng + y, Rational(1)}});
  }
  // 1/2 [a x, b y] = 1/2 (-1)^{|x||b|} ab [x, y]
  for (auto& [k1, c1] : alpha)
    for (auto& [k2, c2] : alpha) {
      auto [a, x] = split(k1);
      auto [b, y] = split(k2);
      Vec ab = A.product(Vec{{a, Rational(1)}}, Vec{{b, Rational(1)}});
      Vec xy = g.bracket(Vec{{x, Rational(1)}}, Vec{{y, Rational(1)}});
      Rational s = Rational(sgn(g.degrees[x] * A.degrees[b]), 2) * c1 * c2;
      for (auto& [p, cp] : ab)
        for (auto& [q, cq] : xy) add_to(r, s * cp * cq, Vec{{p * ng + q, Rational(1)}});
    }
  return r;
}

AlgebraTable exterior_table(size_t k, const std::vector<std::vector<int>>& basis,
                            const std::vector<std::string>& labels) {
  AlgebraTable A;
  A.labels = labels;
  std::map<std::vector<int>, int> where;
  for (size_t i = 0; i < basis.size(); ++i) {
    A.degrees.push_back(int(basis[i].size()));
    where[basis[i]] = int(i);
  }
  (void)k;
  A.d.assign(basis.size(), {});
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < basis.size(); ++j) {
      std::vector<int> seq(basis[i]);
      seq.insert(seq.end(), basis[j].begin(), basis[j].end());
      // bubble sort, each swap of two generators is a sign
      int s = 1;
      bool rep = false;
      for (size_t p = 0; p < seq.size(); ++p)
        for (size_t q = 0; q + 1 < seq.size() - p; ++q) {
          if (seq[q] == seq[q + 1]) rep = true;
          if (seq[q] > seq[q + 1]) {
            std::swap(seq[q], seq[q + 1]);
            s = -s;
          }
        }
      for (size_t q = 0; q + 1 < seq.size(); ++q)
        if (seq[q] == seq[q + 1]) rep = true;
      if (rep) continue;
      A.mult[{int(i), int(j)}] = Vec{{where.at(seq), Rational(s)}};
    }
  return A;
}

LieTable tensor_lie_table(const AlgebraTable& A, const LieTable& g) {
  LieTable T;
  int na = int(A.labels.size()), ng = int(g.dim());
  for (int a = 0; a < na; ++a)
    for (int x = 0; x < ng; ++x) {
      T.labels.push_back(A.labels[a] + "|" + g.labels[x]);
      T.degrees.push_back(A.degrees[a] + g.degrees[x]);
    }
  auto e = [](int i) { return Vec{{i, Rational(1)}}; };
  T.d.assign(na * ng, {});
  for (int a = 0; a < na; ++a)
    for (int x = 0; x < ng; ++x) {
      Vec& out = T.d[a * ng + x];
      // (-1)^{|a|} d(a x) written back in the signed basis
      for (auto& [b, c] : A.d[a]) add_to(out, -c, e(b * ng + x));
      for (auto& [y, c] : g.diff(e(x))) add_to(out, c * Rational(sgn(A.degrees[a])), e(a * ng + y));
    }
  for (int a = 0; a < na; ++a)
    for (int x = 0; x < ng; ++x)
      for (int b = 0; b < na; ++b)
        for (int y = 0; y < ng; ++y) {
          Vec ab = A.product(e(a), e(b));
          Vec xy = g.bracket(e(x), e(y));
          Vec r;
          for (auto& [p, cp] : ab)
            for (auto& [z, cz] : xy) add_to(r, Rational(sgn(g.degrees[x] * A.degrees[b])) * cp * cz, e(p * ng + z));
          if (!is_zero(r)) T.br[{a * ng + x, b * ng + y}] = r;
        }
  return T;
}

Pairing tensor_pairing(const AlgebraTable& A, const Vec& integral, const LieTable& g, const Pairing& eta) {
  Pairing w;
  int na = int(A.labels.size()), ng = int(g.dim());
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b) {
      Rational I(0);
      for (auto& [p, c] : A.product(Vec{{a, Rational(1)}}, Vec{{b, Rational(1)}})) {
        auto it = integral.find(p);
        if (it != integral.end()) I += c * it->second;
      }
      if (I.is_zero()) continue;
      for (auto& [xy, c] : eta) {
        auto [x, y] = xy;
        int s = A.degrees[a] + A.degrees[b] + g.degrees[x] * A.degrees[b];
        w[{a * ng + x, b * ng + y}] = Rational(sgn(s)) * I * c;
      }
    }
  return w;
}

BasisChange random_basis_change(Rng& rng, const std::vector<int>& degrees) {
  size_t n = degrees.size();
  while (true) {
    bvkit::Matrix M(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (degrees[i] == degrees[j]) M(i, j) = Rational(rng.uniform(-2, 2));
    auto inv = M.inverse();
    if (!inv) continue;
    BasisChange c;
    c.fwd.assign(n, {});
    c.inv.assign(n, {});
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        if (!M(j, i).is_zero()) c.fwd[i][int(j)] = M(j, i);
        if (!(*inv)(j, i).is_zero()) c.inv[i][int(j)] = (*inv)(j, i);
      }
    return c;
  }
}

bvkit::LInftyStructure transport(const bvkit::LInftyStructure& g, const BasisChange& c) {
  bvkit::LInftyStructure r(g.space());
  size_t n = g.dim();
  for (auto& [ar, br] : g.brackets()) {
    (void)br;
    // all sorted tuples of the new basis
    std::vector<Index> t;
    std::function<void(Index)> rec = [&](Index start) {
      if (t.size() == ar) {
        // expand each slot through the inverse change
        Vec acc;
        std::vector<Index> u(ar);
        std::function<void(size_t, Rational)> ex = [&](size_t k, Rational coef) {
          if (k == ar) {
            for (auto& [o, v] : g.shifted_value(u)) add_to(acc, coef * v, c.fwd[o]);
            return;
          }
          for (auto& [j, cj] : c.inv[t[k]]) {
            u[k] = Index(j);
            ex(k + 1, coef * cj);
          }
        };
        ex(0, Rational(1));
        std::vector<Index> key(t);
        for (auto& [o, v] : acc) r.add_shifted(key, Index(o), v);
        return;
      }
      for (Index v = start; v < n; ++v) {
        t.push_back(v);
        rec(v);
        t.pop_back();
      }
    };
    rec(0);
  }
  return r;
}

}  // namespace oracle

namespace oracle {

bvkit::GradedAlgebra to_algebra(const AlgebraTable& t) {
  bvkit::GradedAlgebra A(bvkit::make_space(t.labels, t.degrees));
  for (auto& [ij, v] : t.mult) {
    bvkit::SparseVec s;
    for (auto& [k, c] : v) s.push_back({Index(k), c});
    A.set_product(Index(ij.first), Index(ij.second), s);
  }
  for (size_t i = 0; i < t.d.size(); ++i)
    for (auto& [k, c] : t.d[i]) A.d[i].push_back({Index(k), c});
  return A;
}

}  // namespace oracle

namespace oracle {

namespace {

// sign of sorting a variable sequence; 0 if an odd variable repeats
int sort_seq(std::vector<int>& s, const std::vector<int>& deg) {
  int sign = 1;
  for (size_t i = 1; i < s.size(); ++i)
    for (size_t j = i; j > 0 && s[j - 1] > s[j]; --j) {
      if ((deg[s[j]] & 1) && (deg[s[j - 1]] & 1)) sign = -sign;
      std::swap(s[j - 1], s[j]);
    }
  for (size_t i = 1; i < s.size(); ++i)
    if (s[i] == s[i - 1] && (deg[s[i]] & 1)) return 0;
  return sign;
}

void add_term(Poly& p, const std::vector<int>& m, const Rational& c) {
  Rational& x = p.t[m];
  x += c;
  if (x.is_zero()) p.t.erase(m);
}

}  // namespace

Poly Poly::var(const std::vector<int>& deg, int i, const Rational& c) {
  Poly p(deg);
  add_term(p, {i}, c);
  return p;
}

Poly Poly::constant(const std::vector<int>& deg, const Rational& c) {
  Poly p(deg);
  add_term(p, {}, c);
  return p;
}

void Poly::add(const Rational& a, const Poly& o) {
  for (auto& [m, c] : o.t) add_term(*this, m, a * c);
}

int Poly::degree_of(const std::vector<int>& m) const {
  int d = 0;
  for (int v : m) d += deg[v];
  return d;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.deg.empty() ? b.deg : a.deg);
  for (auto& [m1, c1] : a.t)
    for (auto& [m2, c2] : b.t) {
      std::vector<int> s(m1);
      s.insert(s.end(), m2.begin(), m2.end());
      int sg = sort_seq(s, r.deg);
      if (sg) add_term(r, s, sg > 0 ? c1 * c2 : -(c1 * c2));
    }
  return r;
}

Poly left_d(const Poly& f, int v) {
  Poly r(f.deg);
  for (auto& [m, c] : f.t)
    for (size_t p = 0; p < m.size(); ++p) {
      if (m[p] != v) continue;
      int before = 0;
      for (size_t q = 0; q < p; ++q) before += f.deg[m[q]];
      std::vector<int> rest(m);
      rest.erase(rest.begin() + static_cast<long>(p));
      add_term(r, rest, (f.deg[v] * before) & 1 ? -c : c);
    }
  return r;
}

Poly right_d(const Poly& f, int v) {
  Poly r(f.deg);
  for (auto& [m, c] : f.t)
    for (size_t p = 0; p < m.size(); ++p) {
      if (m[p] != v) continue;
      int after = 0;
      for (size_t q = p + 1; q < m.size(); ++q) after += f.deg[m[q]];
      std::vector<int> rest(m);
      rest.erase(rest.begin() + static_cast<long>(p));
      add_term(r, rest, (f.deg[v] * after) & 1 ? -c : c);
    }
  return r;
}

Poly bracket(const Poly& F, const Poly& G, const PMatrix& P) {
  Poly r(F.deg);
  for (auto& [ab, p] : P) {
    Poly l = right_d(F, ab.first);
    if (l.t.empty()) continue;
    Poly rr = left_d(G, ab.second);
    if (rr.t.empty()) continue;
    r.add(p, mul(l, rr));
  }
  return r;
}

Poly from_library(const bvkit::Polynomial& p) {
  std::vector<int> deg;
  for (size_t i = 0; i < p.vars()->size(); ++i) deg.push_back((*p.vars())[i].degree);
  Poly r(deg);
  for (auto& [m, c] : p.terms()) add_term(r, std::vector<int>(m.begin(), m.end()), c);
  return r;
}

Pairing sl2_trace() {
  return {{{0, 2}, Rational(1)}, {{2, 0}, Rational(1)}, {{1, 1}, Rational(2)}};
}

static Rational pair_vec(const Pairing& w, const Vec& x, const Vec& y) {
  Rational r(0);
  for (auto& [i, a] : x)
    for (auto& [j, b] : y) {
      auto it = w.find({i, j});
      if (it != w.end()) r += a * b * it->second;
    }
  return r;
}

std::set<std::multiset<std::string>> invariance_violations(const LieTable& g, const Pairing& w) {
  std::set<std::multiset<std::string>> out;
  int n = int(g.dim());
  auto e = [](int i) { return Vec{{i, Rational(1)}}; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational a = pair_vec(w, e(i), e(j)), b = pair_vec(w, e(j), e(i));
      if (b != a * Rational(sgn(g.degrees[i] * g.degrees[j]))) out.insert({g.labels[i], g.labels[j]});
      Rational dd = pair_vec(w, g.diff(e(i)), e(j)) + Rational(sgn(g.degrees[i])) * pair_vec(w, e(i), g.diff(e(j)));
      if (!dd.is_zero()) out.insert({g.labels[i], g.labels[j]});
      for (int k = 0; k < n; ++k) {
        Rational l = pair_vec(w, g.bracket(e(i), e(j)), e(k));
        Rational r = pair_vec(w, e(i), g.bracket(e(j), e(k)));
        if (l != r) out.insert({g.labels[i], g.labels[j], g.labels[k]});
      }
    }
  return out;
}

PMatrix poisson_matrix(const std::vector<int>& degrees, const Pairing& w) {
  size_t n = degrees.size();
  bvkit::Matrix G(n, n);
  for (auto& [ij, c] : w) G(ij.first, ij.second) = degrees[ij.first] & 1 ? -c : c;
  auto inv = G.inverse();
  PMatrix P;
  if (!inv) return P;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      if (!(*inv)(b, a).is_zero()) P[{int(a), int(b)}] = (*inv)(b, a);
  return P;
}

namespace {

using Superfield = std::map<int, Poly>;

// the same element with each coefficient monomial split by parity
int mono_parity(const Poly& p, const std::vector<int>& m) { return p.degree_of(m) & 1; }

Poly mono(const Poly& p, const std::vector<int>& m, const Rational& c) {
  Poly r(p.deg);
  add_term(r, m, c);
  return r;
}

Poly pair_sf(const Superfield& A, const Superfield& B, const LieTable& g, const Pairing& w) {
  Poly r;
  for (auto& [i, a] : A)
    for (auto& [j, b] : B) {
      auto it = w.find({i, j});
      if (it == w.end()) continue;
      if (r.deg.empty()) r = Poly(a.deg);
      for (auto& [m, c] : b.t) {
        int s = sgn(mono_parity(b, m) * g.degrees[i]);
        r.add(it->second * Rational(s), mul(a, mono(b, m, c)));
      }
    }
  return r;
}

Superfield bracket_sf(const Superfield& A, const Superfield& B, const LieTable& g) {
  Superfield r;
  for (auto& [i, a] : A)
    for (auto& [j, b] : B) {
      Vec ij = g.bracket(Vec{{i, Rational(1)}}, Vec{{j, Rational(1)}});
      for (auto& [m, c] : b.t) {
        int s = sgn(mono_parity(b, m) * g.degrees[i]);
        Poly ab = mul(a, mono(b, m, c));
        for (auto& [k, ck] : ij) {
          auto it = r.try_emplace(k, Poly(a.deg)).first;
          it->second.add(ck * Rational(s), ab);
        }
      }
    }
  return r;
}

Superfield diff_sf(const Superfield& A, const LieTable& g) {
  Superfield r;
  for (auto& [i, a] : A) {
    Vec di = g.diff(Vec{{i, Rational(1)}});
    for (auto& [m, c] : a.t)
      for (auto& [k, ck] : di) {
        auto it = r.try_emplace(k, Poly(a.deg)).first;
        it->second.add(ck * Rational(sgn(mono_parity(a, m))), mono(a, m, c));
      }
  }
  return r;
}

}  // namespace

Poly superfield_action(const LieTable& g, const Pairing& w, int sigma) {
  std::vector<int> deg;
  for (int d : g.degrees) deg.push_back(1 - d);
  Superfield phi;
  for (int i = 0; i < int(g.dim()); ++i) phi.emplace(i, Poly::var(deg, i, Rational(sigma)));
  Poly S(deg);
  S.add(Rational(1, 2), pair_sf(phi, diff_sf(phi, g), g, w));
  S.add(Rational(1, 6), pair_sf(phi, bracket_sf(phi, phi, g), g, w));
  return S;
}

Poly library_action(const LieTable& g, const Pairing& w, int shift) {
  auto S = superfield_action(g, w, dictionary_sigma);
  Poly out(S.deg);
  out.add(Rational(action_sign(shift)), S);
  return out;
}

static Superfield restricted_field(const LieTable& g, int sigma, const std::set<int>& support) {
  std::vector<int> deg;
  for (int d : g.degrees) deg.push_back(1 - d);
  Superfield phi;
  for (int i : support) phi.emplace(i, Poly::var(deg, i, Rational(sigma)));
  return phi;
}

Poly superfield_quadratic(const LieTable& g, const Pairing& w, int sigma, const std::set<int>& A,
                          const std::set<int>& B) {
  std::vector<int> deg;
  for (int d : g.degrees) deg.push_back(1 - d);
  Poly S(deg);
  S.add(Rational(1), pair_sf(restricted_field(g, sigma, A), diff_sf(restricted_field(g, sigma, B), g), g, w));
  return S;
}

Poly superfield_cubic(const LieTable& g, const Pairing& w, int sigma, const std::set<int>& A, const std::set<int>& B,
                      const std::set<int>& C) {
  std::vector<int> deg;
  for (int d : g.degrees) deg.push_back(1 - d);
  Poly S(deg);
  auto br = bracket_sf(restricted_field(g, sigma, B), restricted_field(g, sigma, C), g);
  S.add(Rational(1), pair_sf(restricted_field(g, sigma, A), br, g, w));
  return S;
}

}  // namespace oracle

namespace oracle {

bvkit::Polynomial to_library(const Poly& p, const bvkit::VarSetPtr& vars) {
  bvkit::Polynomial r(vars);
  for (auto& [m, c] : p.t) {
    bvkit::Monomial mm(m.begin(), m.end());
    r.add_term(mm, c);
  }
  return r;
}

SymplecticSample random_symplectic_space(Rng& rng, size_t min_dim, size_t max_dim) {
  SymplecticSample s;
  s.shift = rng.uniform(-1, 2);
  int n = s.shift;
  size_t target = static_cast<size_t>(rng.uniform(int(min_dim), int(max_dim)));
  std::vector<int> deg;
  Pairing w;
  auto put = [&](int i, int j, const Rational& c) {
    w[{i, j}] = c;
    w[{j, i}] = c * Rational(sgn(deg[i] * deg[j]));
  };
  int guard = 0;
  while (deg.size() < target && ++guard < 100) {
    int d = rng.uniform(-1, 2);
    int e = 2 - n - d;
    int i = int(deg.size());
    if (d != e) {
      if (deg.size() + 2 > max_dim) continue;
      deg.push_back(d);
      deg.push_back(e);
      put(i, i + 1, Rational(1));
    } else if (d % 2 == 0) {
      deg.push_back(d);
      w[{i, i}] = Rational(rng.coin(50) ? 1 : -1);
    } else {
      if (deg.size() + 2 > max_dim) continue;
      deg.push_back(d);
      deg.push_back(d);
      put(i, i + 1, Rational(1));
    }
  }
  auto c = random_basis_change(rng, deg);
  Pairing w2;
  int dim = int(deg.size());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Rational v(0);
      for (auto& [k, a] : c.fwd[i])
        for (auto& [l, b] : c.fwd[j]) {
          auto it = w.find({k, l});
          if (it != w.end()) v += a * b * it->second;
        }
      if (!v.is_zero()) w2[{i, j}] = v;
    }
  s.w = w2;
  s.degrees = deg;
  for (int i = 0; i < dim; ++i) s.labels.push_back("v" + std::to_string(i));
  return s;
}

bvkit::ShiftedSymplecticStructure to_library(const SymplecticSample& s) {
  bvkit::ShiftedSymplecticStructure::Entries e;
  for (auto& [ij, c] : s.w) e[{Index(ij.first), Index(ij.second)}] = c;
  return bvkit::ShiftedSymplecticStructure(bvkit::make_space(s.labels, s.degrees), s.shift, e);
}

Poly random_action(Rng& rng, const std::vector<int>& degrees, int shift, size_t lo, size_t hi, int percent) {
  std::vector<int> deg;
  for (int d : degrees) deg.push_back(1 - d);
  Poly S(deg);
  std::vector<int> m;
  std::function<void(int)> rec = [&](int start) {
    if (m.size() >= lo && S.degree_of(m) == shift + 1 && rng.coin(percent))
      add_term(S, m, rng.nonzero());
    if (m.size() == hi) return;
    for (int v = start; v < int(deg.size()); ++v) {
      if (!m.empty() && m.back() == v && (deg[v] & 1)) continue;
      m.push_back(v);
      rec(v);
      m.pop_back();
    }
  };
  rec(0);
  return S;
}

}  // namespace oracle
