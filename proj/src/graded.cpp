#include "bvkit/graded.hpp"

#include <algorithm>

#include "bvkit/errors.hpp"

namespace bvkit {

void sparse_axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
  if (a.is_zero() || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, a * x[j].second);
      ++j;
    } else {
      Rational c = y[i].second + a * x[j].second;
      if (!c.is_zero()) out.emplace_back(y[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

SparseVec sparse_scaled(const SparseVec& x, const Rational& a) {
  SparseVec out;
  if (a.is_zero()) return out;
  out.reserve(x.size());
  for (auto& [i, c] : x) out.emplace_back(i, c * a);
  return out;
}

Rational sparse_coeff(const SparseVec& x, Index i) {
  auto it = std::lower_bound(x.begin(), x.end(), i, [](const auto& p, Index k) { return p.first < k; });
  if (it != x.end() && it->first == i) return it->second;
  return Rational(0);
}

void SparseAccumulator::add(Index i, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc_.try_emplace(i, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) acc_.erase(it);
  }
}

SparseVec SparseAccumulator::take() {
  SparseVec out(acc_.begin(), acc_.end());
  acc_.clear();
  return out;
}

bool box_admissible(const std::vector<const std::vector<int>*>& elems, const std::vector<int>& lo,
                    const std::vector<int>& hi, const std::vector<int>& hidden, int hidden_count) {
  size_t k = elems.size();
  size_t c = lo.size();
  if (c == 0) return true;
  int h = hidden.empty() ? 0 : hidden_count;
  std::vector<int> sum(c);
  for (int g = 0; g <= h; ++g)
    for (uint64_t mask = 0; mask < (uint64_t(1) << k); ++mask) {
      if (mask == 0 && g == 0) continue;
      for (size_t t = 0; t < c; ++t) sum[t] = g ? g * hidden[t] : 0;
      for (size_t i = 0; i < k; ++i)
        if (mask >> i & 1)
          for (size_t t = 0; t < c; ++t) sum[t] += (*elems[i])[t];
      for (size_t t = 0; t < c; ++t)
        if (sum[t] < lo[t] || sum[t] > hi[t]) return false;
    }
  return true;
}

GradedVectorSpace::GradedVectorSpace(std::vector<std::string> labels, std::vector<int> degrees)
    : labels_(std::move(labels)), degrees_(std::move(degrees)) {
  if (labels_.size() != degrees_.size()) throw InputError("label/degree count mismatch");
  for (Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw InputError("empty basis label");
    if (!index_.emplace(labels_[i], i).second) throw InputError("duplicate basis label '" + labels_[i] + "'");
  }
}

std::optional<Index> GradedVectorSpace::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Index GradedVectorSpace::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw InputError("unknown basis label '" + label + "'");
  return it->second;
}

std::map<int, std::vector<Index>> GradedVectorSpace::components() const {
  std::map<int, std::vector<Index>> out;
  for (Index i = 0; i < dim(); ++i) out[degrees_[i]].push_back(i);
  return out;
}

size_t GradedVectorSpace::dimension(int degree) const {
  return static_cast<size_t>(std::count(degrees_.begin(), degrees_.end(), degree));
}

GradedVectorSpace GradedVectorSpace::shifted(int k) const {
  std::vector<int> d(degrees_);
  for (int& x : d) x -= k;
  GradedVectorSpace s(labels_, d);
  s.window_ = window_;
  return s;
}

void GradedVectorSpace::set_window(WeightWindow w) {
  if (w.weights.size() != dim()) throw InputError("weight table size does not match the basis");
  for (auto& v : w.weights)
    if (v.size() != w.lo.size()) throw InputError("weight vector length mismatch");
  if (w.hi.size() != w.lo.size()) throw InputError("weight box length mismatch");
  window_ = std::move(w);
}

SpacePtr make_space(std::vector<std::string> labels, std::vector<int> degrees) {
  return std::make_shared<const GradedVectorSpace>(std::move(labels), std::move(degrees));
}

bool same_space(const SpacePtr& a, const SpacePtr& b) { return a == b || (a && b && *a == *b); }

SpacePtr direct_sum(const GradedVectorSpace& a, const GradedVectorSpace& b) {
  std::vector<std::string> l(a.labels());
  std::vector<int> d(a.degrees());
  l.insert(l.end(), b.labels().begin(), b.labels().end());
  d.insert(d.end(), b.degrees().begin(), b.degrees().end());
  auto s = std::make_shared<GradedVectorSpace>(l, d);
  if (a.window() && b.window() && a.window()->components() == b.window()->components()) {
    WeightWindow w = *a.window();
    w.weights.insert(w.weights.end(), b.window()->weights.begin(), b.window()->weights.end());
    for (size_t t = 0; t < w.lo.size(); ++t) {
      w.lo[t] = std::max(w.lo[t], b.window()->lo[t]);
      w.hi[t] = std::min(w.hi[t], b.window()->hi[t]);
    }
    if (w.hidden.empty()) {
      w.hidden = b.window()->hidden;
      w.hidden_count = b.window()->hidden_count;
    } else if (b.window()->hidden == w.hidden) {
      w.hidden_count = std::max(w.hidden_count, b.window()->hidden_count);
    }
    s->set_window(std::move(w));
  }
  return s;
}

int koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees) {
  size_t k = perm.size();
  if (degrees.size() != k) throw InputError("koszul_sign: permutation and degree list differ in length");
  std::vector<bool> seen(k, false);
  for (int p : perm) {
    if (p < 0 || static_cast<size_t>(p) >= k || seen[p]) throw InputError("koszul_sign: not a permutation");
    seen[p] = true;
  }
  int s = 1;
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j)
      if (perm[i] > perm[j] && (degrees[perm[i]] & 1) && (degrees[perm[j]] & 1)) s = -s;
  return s;
}

std::vector<int> compose_permutations(const std::vector<int>& sigma, const std::vector<int>& tau) {
  if (sigma.size() != tau.size()) throw InputError("compose_permutations: length mismatch");
  std::vector<int> r(sigma.size());
  for (size_t i = 0; i < sigma.size(); ++i) r[i] = tau[sigma[i]];
  return r;
}

int sort_sign(std::vector<Index>& idx, const std::vector<bool>& odd) {
  int s = 1;
  // insertion sort, tracking odd/odd transpositions
  for (size_t i = 1; i < idx.size(); ++i) {
    Index v = idx[i];
    size_t j = i;
    while (j > 0 && idx[j - 1] > v) {
      if (odd[v] && odd[idx[j - 1]]) s = -s;
      idx[j] = idx[j - 1];
      --j;
    }
    idx[j] = v;
  }
  for (size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1] && odd[idx[i]]) return 0;
  return s;
}

}  // namespace bvkit
