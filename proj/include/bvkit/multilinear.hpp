#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bvkit/graded.hpp"

namespace bvkit {

enum class Symmetry { none, graded_symmetric, graded_antisymmetric };

const char* to_string(Symmetry s);

// Sparse multilinear map V_1 x ... x V_k -> W with exact coefficients.
//
// Maps declared graded-(anti)symmetric store one canonical key per multiset of
// inputs (indices nondecreasing). The symmetry is with respect to the input
// degrees lowered by `shift`, so brackets that are symmetric on g[1] are
// declared graded_symmetric with shift 1.
class MultilinearMap {
 public:
  MultilinearMap() = default;
  MultilinearMap(std::vector<SpacePtr> inputs, SpacePtr output, int degree,
                 Symmetry sym = Symmetry::none, int shift = 0);
  // All inputs from the same space.
  MultilinearMap(SpacePtr input, size_t arity, SpacePtr output, int degree,
                 Symmetry sym = Symmetry::none, int shift = 0);

  static MultilinearMap identity(SpacePtr space);
  static MultilinearMap vector(SpacePtr space, const SparseVec& v);

  size_t arity() const { return inputs_.size(); }
  const std::vector<SpacePtr>& inputs() const { return inputs_; }
  const SpacePtr& output() const { return output_; }
  int degree() const { return degree_; }
  Symmetry symmetry() const { return sym_; }
  int shift() const { return shift_; }

  const std::map<std::vector<Index>, SparseVec>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  size_t nnz() const;

  // Adds c * out at the given input tuple. For symmetric maps any ordering is
  // accepted and moved to the canonical key with its Koszul sign; adding at a
  // tuple the symmetry forces to vanish throws. Degree rule is enforced.
  void add(const std::vector<Index>& in, Index out, const Rational& c);
  void add(const std::vector<Index>& in, const SparseVec& out, const Rational& c = Rational(1));

  // Value on an arbitrary ordering of inputs.
  SparseVec value(const std::vector<Index>& in) const;

  // Same map with symmetry none and every ordering stored explicitly.
  MultilinearMap expanded() const;

  // Parities used to canonicalize keys (empty for symmetry none).
  std::vector<bool> key_parity() const;

  friend bool operator==(const MultilinearMap& a, const MultilinearMap& b);

 private:
  void check_degree(const std::vector<Index>& in, Index out) const;
  int canonicalize(std::vector<Index>& in) const;

  std::vector<SpacePtr> inputs_;
  SpacePtr output_;
  int degree_ = 0;
  Symmetry sym_ = Symmetry::none;
  int shift_ = 0;
  std::map<std::vector<Index>, SparseVec> entries_;
};

// Graded-symmetric projection (1/k!) sum_sigma eps(sigma) m o sigma with
// respect to input degrees lowered by `shift`.
MultilinearMap symmetrize(const MultilinearMap& m, int shift);

// outer(x_1, .., x_{slot-1}, inner(x_slot, ..), ..) with the Koszul sign of
// moving inner past the earlier arguments.
MultilinearMap insert(const MultilinearMap& outer, const MultilinearMap& inner, size_t slot);

// Distinct rearrangements of a sorted key, each with its Koszul sign relative
// to the key (0 when an odd element repeats).
void for_each_arrangement(const std::vector<Index>& key, const std::vector<bool>& odd,
                          const std::function<void(const std::vector<Index>&, int)>& f);

// Enumerates every k-tuple of basis indices drawn from the given sizes.
template <class F>
void for_each_tuple(const std::vector<size_t>& sizes, F&& f) {
  std::vector<Index> t(sizes.size(), 0);
  for (size_t s : sizes)
    if (s == 0) return;
  while (true) {
    f(t);
    size_t i = t.size();
    bool done = true;
    while (i > 0) {
      --i;
      if (++t[i] < sizes[i]) {
        done = false;
        break;
      }
      t[i] = 0;
    }
    if (done) return;
  }
}

}  // namespace bvkit
