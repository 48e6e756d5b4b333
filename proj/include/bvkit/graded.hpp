#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bvkit/rational.hpp"

namespace bvkit {

using Index = uint32_t;

// Sparse vector: sorted (basis index, nonzero coefficient) pairs.
using SparseVec = std::vector<std::pair<Index, Rational>>;

void sparse_axpy(SparseVec& y, const Rational& a, const SparseVec& x);
SparseVec sparse_scaled(const SparseVec& x, const Rational& a);
Rational sparse_coeff(const SparseVec& x, Index i);
// Accumulator for building sparse vectors out of order.
class SparseAccumulator {
 public:
  void add(Index i, const Rational& c);
  SparseVec take();
  bool empty() const { return acc_.empty(); }

 private:
  std::map<Index, Rational> acc_;
};

// True when every nonempty sub-multiset of elems, joined with up to
// hidden_count copies of `hidden`, has its weight sum inside [lo, hi].
bool box_admissible(const std::vector<const std::vector<int>*>& elems, const std::vector<int>& lo,
                    const std::vector<int>& hi, const std::vector<int>& hidden = {}, int hidden_count = 0);

// Integer weights attached to basis elements together with a box of weights
// that are known to be represented faithfully. Models that are truncations of
// infinite-dimensional algebras (the Laurent window) use this to tell apart
// residuals that are genuine from residuals that are artifacts of truncation.
// A structure twisted by a fixed element carries that element's weight as a
// hidden insertion: a bracket of the twist may contain it up to hidden_count
// times.
struct WeightWindow {
  std::vector<std::vector<int>> weights;  // per basis element
  std::vector<int> lo, hi;                // inclusive safe box per component
  std::vector<int> hidden;
  int hidden_count = 0;

  size_t components() const { return lo.size(); }
  bool admissible(const std::vector<const std::vector<int>*>& elems) const {
    return box_admissible(elems, lo, hi, hidden, hidden_count);
  }
};

class GradedVectorSpace {
 public:
  GradedVectorSpace() = default;
  GradedVectorSpace(std::vector<std::string> labels, std::vector<int> degrees);

  size_t dim() const { return labels_.size(); }
  const std::string& label(size_t i) const { return labels_[i]; }
  int degree(size_t i) const { return degrees_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& degrees() const { return degrees_; }

  std::optional<Index> find(const std::string& label) const;
  Index index_of(const std::string& label) const;  // throws InputError

  // degree -> basis indices in that degree
  std::map<int, std::vector<Index>> components() const;
  size_t dimension(int degree) const;

  // Shift view V[k]: degree d placed in degree d - k.
  GradedVectorSpace shifted(int k) const;

  const std::optional<WeightWindow>& window() const { return window_; }
  void set_window(WeightWindow w);

  friend bool operator==(const GradedVectorSpace& a, const GradedVectorSpace& b) {
    return a.labels_ == b.labels_ && a.degrees_ == b.degrees_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<int> degrees_;
  std::unordered_map<std::string, Index> index_;
  std::optional<WeightWindow> window_;
};

using SpacePtr = std::shared_ptr<const GradedVectorSpace>;

SpacePtr make_space(std::vector<std::string> labels, std::vector<int> degrees);
bool same_space(const SpacePtr& a, const SpacePtr& b);

// Direct sum with the summands' bases concatenated in order.
SpacePtr direct_sum(const GradedVectorSpace& a, const GradedVectorSpace& b);

// Sign picked up when the sequence (x_0..x_{k-1}) with the given degrees is
// rearranged into (x_{perm[0]}, ..., x_{perm[k-1]}).
int koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees);

// The rearrangement "apply tau, then sigma" expressed as a single permutation.
std::vector<int> compose_permutations(const std::vector<int>& sigma, const std::vector<int>& tau);

// Sign of sorting the index sequence ascending, where an index i carries
// parity odd[i]. Returns 0 if two equal odd indices meet.
int sort_sign(std::vector<Index>& idx, const std::vector<bool>& odd);

inline int parity(int d) { return d & 1; }
inline int sign_pow(int e) { return (e & 1) ? -1 : 1; }

}  // namespace bvkit
