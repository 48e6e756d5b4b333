#include "bvkit/multilinear.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "bvkit/errors.hpp"

namespace bvkit {

const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::none: return "none";
    case Symmetry::graded_symmetric: return "graded-symmetric";
    case Symmetry::graded_antisymmetric: return "graded-antisymmetric";
  }
  return "?";
}

MultilinearMap::MultilinearMap(std::vector<SpacePtr> inputs, SpacePtr output, int degree, Symmetry sym, int shift)
    : inputs_(std::move(inputs)), output_(std::move(output)), degree_(degree), sym_(sym), shift_(shift) {
  if (!output_) throw InputError("multilinear map without output space");
  for (auto& s : inputs_)
    if (!s) throw InputError("multilinear map with null input space");
  if (sym_ != Symmetry::none)
    for (auto& s : inputs_)
      if (!same_space(s, inputs_.front())) throw InputError("symmetric map needs identical input spaces");
}

MultilinearMap::MultilinearMap(SpacePtr input, size_t arity, SpacePtr output, int degree, Symmetry sym, int shift)
    : MultilinearMap(std::vector<SpacePtr>(arity, input), std::move(output), degree, sym, shift) {}

MultilinearMap MultilinearMap::identity(SpacePtr space) {
  MultilinearMap m({space}, space, 0);
  for (Index i = 0; i < space->dim(); ++i) m.add({i}, i, Rational(1));
  return m;
}

MultilinearMap MultilinearMap::vector(SpacePtr space, const SparseVec& v) {
  int deg = 0;
  bool first = true;
  for (auto& [i, c] : v) {
    if (first) deg = space->degree(i), first = false;
    else if (space->degree(i) != deg) throw InputError("vector is not homogeneous");
  }
  MultilinearMap m(std::vector<SpacePtr>{}, space, deg);
  m.add({}, v);
  return m;
}

size_t MultilinearMap::nnz() const {
  size_t n = 0;
  for (auto& [k, v] : entries_) n += v.size();
  return n;
}

std::vector<bool> MultilinearMap::key_parity() const {
  if (sym_ == Symmetry::none || inputs_.empty()) return {};
  const auto& sp = *inputs_.front();
  // antisymmetry is symmetry with respect to the opposite parity
  int flip = sym_ == Symmetry::graded_antisymmetric ? 1 : 0;
  std::vector<bool> odd(sp.dim());
  for (Index i = 0; i < sp.dim(); ++i) odd[i] = ((sp.degree(i) - shift_ + flip) & 1) != 0;
  return odd;
}

int MultilinearMap::canonicalize(std::vector<Index>& in) const {
  if (sym_ == Symmetry::none) return 1;
  const auto& sp = *inputs_.front();
  int flip = sym_ == Symmetry::graded_antisymmetric ? 1 : 0;
  int s = 1;
  for (size_t i = 1; i < in.size(); ++i) {
    Index v = in[i];
    size_t j = i;
    while (j > 0 && in[j - 1] > v) {
      if (((sp.degree(v) - shift_ + flip) & 1) && ((sp.degree(in[j - 1]) - shift_ + flip) & 1)) s = -s;
      in[j] = in[j - 1];
      --j;
    }
    in[j] = v;
  }
  for (size_t i = 1; i < in.size(); ++i)
    if (in[i] == in[i - 1] && ((sp.degree(in[i]) - shift_ + flip) & 1)) return 0;
  return s;
}

void MultilinearMap::check_degree(const std::vector<Index>& in, Index out) const {
  if (in.size() != inputs_.size()) throw InputError("multilinear map: wrong number of inputs");
  int d = degree_;
  for (size_t i = 0; i < in.size(); ++i) {
    if (in[i] >= inputs_[i]->dim()) throw InputError("multilinear map: input index out of range");
    d += inputs_[i]->degree(in[i]);
  }
  if (out >= output_->dim()) throw InputError("multilinear map: output index out of range");
  if (output_->degree(out) != d) {
    std::string t;
    for (size_t i = 0; i < in.size(); ++i) t += (i ? "," : "") + inputs_[i]->label(in[i]);
    throw InputError("coefficient (" + t + ") -> " + output_->label(out) + " violates the degree rule");
  }
}

void MultilinearMap::add(const std::vector<Index>& in, Index out, const Rational& c) {
  if (c.is_zero()) return;
  check_degree(in, out);
  std::vector<Index> key(in);
  int s = canonicalize(key);
  if (s == 0) {
    std::string t;
    for (size_t i = 0; i < in.size(); ++i) t += (i ? "," : "") + inputs_[i]->label(in[i]);
    throw InputError("coefficient at (" + t + ") is forced to vanish by the declared symmetry");
  }
  auto& v = entries_[key];
  SparseVec one{{out, s > 0 ? c : -c}};
  sparse_axpy(v, Rational(1), one);
  if (v.empty()) entries_.erase(key);
}

void MultilinearMap::add(const std::vector<Index>& in, const SparseVec& out, const Rational& c) {
  for (auto& [o, v] : out) add(in, o, c * v);
}

SparseVec MultilinearMap::value(const std::vector<Index>& in) const {
  if (in.size() != inputs_.size()) throw InputError("multilinear map: wrong number of inputs");
  std::vector<Index> key(in);
  int s = canonicalize(key);
  if (s == 0) return {};
  auto it = entries_.find(key);
  if (it == entries_.end()) return {};
  return s > 0 ? it->second : sparse_scaled(it->second, Rational(-1));
}

void for_each_arrangement(const std::vector<Index>& key, const std::vector<bool>& odd,
                          const std::function<void(const std::vector<Index>&, int)>& f) {
  std::vector<Index> t(key);
  do {
    std::vector<Index> c(t);
    int s = sort_sign(c, odd);
    f(t, s);
  } while (std::next_permutation(t.begin(), t.end()));
}

MultilinearMap MultilinearMap::expanded() const {
  MultilinearMap m(inputs_, output_, degree_, Symmetry::none, shift_);
  if (sym_ == Symmetry::none) {
    m.entries_ = entries_;
    return m;
  }
  auto odd = key_parity();
  for (auto& [key, v] : entries_)
    for_each_arrangement(key, odd, [&](const std::vector<Index>& t, int s) {
      if (s != 0) m.entries_[t] = s > 0 ? v : sparse_scaled(v, Rational(-1));
    });
  return m;
}

bool operator==(const MultilinearMap& a, const MultilinearMap& b) {
  if (a.inputs_.size() != b.inputs_.size() || a.degree_ != b.degree_) return false;
  if (!same_space(a.output_, b.output_)) return false;
  for (size_t i = 0; i < a.inputs_.size(); ++i)
    if (!same_space(a.inputs_[i], b.inputs_[i])) return false;
  if (a.sym_ == b.sym_ && a.shift_ == b.shift_) return a.entries_ == b.entries_;
  return a.expanded().entries_ == b.expanded().entries_;
}

MultilinearMap symmetrize(const MultilinearMap& m, int shift) {
  if (m.symmetry() == Symmetry::graded_symmetric && m.shift() == shift) return m;
  MultilinearMap full = m.expanded();
  size_t k = m.arity();
  for (auto& s : m.inputs())
    if (!same_space(s, m.inputs().front())) throw InputError("symmetrize: input spaces differ");
  MultilinearMap out(m.inputs(), m.output(), m.degree(), Symmetry::graded_symmetric, shift);
  if (k <= 1) {
    for (auto& [key, v] : full.entries()) out.add(key, v);
    return out;
  }
  const auto& sp = *m.inputs().front();
  std::vector<bool> odd(sp.dim());
  for (Index i = 0; i < sp.dim(); ++i) odd[i] = ((sp.degree(i) - shift) & 1) != 0;
  Rational inv_fact = Rational(1) / factorial(static_cast<int>(k));
  for (auto& [t, v] : full.entries()) {
    std::vector<Index> key(t);
    int s = sort_sign(key, odd);
    if (s == 0) continue;
    // number of permutations producing this same ordered tuple
    Rational mult(1);
    for (size_t i = 0; i < key.size();) {
      size_t j = i;
      while (j < key.size() && key[j] == key[i]) ++j;
      mult *= factorial(static_cast<int>(j - i));
      i = j;
    }
    Rational c = inv_fact * mult * Rational(s);
    // add directly to the canonical key (already sorted)
    out.add(key, v, c);
  }
  return out;
}

MultilinearMap insert(const MultilinearMap& outer, const MultilinearMap& inner, size_t slot) {
  if (slot >= outer.arity()) throw InputError("insert: slot out of range");
  if (!same_space(outer.inputs()[slot], inner.output())) throw InputError("insert: inner output space differs from the slot's input space");
  MultilinearMap o = outer.expanded();
  MultilinearMap in = inner.expanded();
  std::vector<SpacePtr> ins;
  for (size_t i = 0; i < slot; ++i) ins.push_back(outer.inputs()[i]);
  for (auto& s : inner.inputs()) ins.push_back(s);
  for (size_t i = slot + 1; i < outer.arity(); ++i) ins.push_back(outer.inputs()[i]);
  MultilinearMap r(ins, outer.output(), outer.degree() + inner.degree());
  // inner entries indexed by the output basis element they hit
  std::map<Index, std::vector<std::pair<const std::vector<Index>*, Rational>>> by_out;
  for (auto& [t, v] : in.entries())
    for (auto& [k, c] : v) by_out[k].push_back({&t, c});
  for (auto& [t, v] : o.entries()) {
    auto it = by_out.find(t[slot]);
    if (it == by_out.end()) continue;
    int before = 0;
    for (size_t i = 0; i < slot; ++i) before += outer.inputs()[i]->degree(t[i]);
    int s = sign_pow(before * inner.degree());
    for (auto& [u, c] : it->second) {
      std::vector<Index> key(t.begin(), t.begin() + slot);
      key.insert(key.end(), u->begin(), u->end());
      key.insert(key.end(), t.begin() + slot + 1, t.end());
      r.add(key, v, c * Rational(s));
    }
  }
  return r;
}

}  // namespace bvkit
