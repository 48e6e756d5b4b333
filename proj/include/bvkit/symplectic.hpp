#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "bvkit/linfty.hpp"

namespace bvkit {

// Constant-coefficient n-shifted symplectic pairing on g.
//
// omega is given on g, graded-symmetric in g-degrees:
//   omega(e_j, e_i) = (-1)^{d_i d_j} omega(e_i, e_j),
// and pairs g_d with g_{2-n-d}. Internally everything goes through the form on
// W = g[1],  G_ij = (-1)^{d_i} omega_ij, which is graded-antisymmetric there,
// and the Poisson tensor on coordinates P = G^{-T}:  {x^a, x^b} = P^{ab}.
class ShiftedSymplecticStructure {
 public:
  using Entries = std::map<std::pair<Index, Index>, Rational>;

  ShiftedSymplecticStructure() = default;
  // The table is taken as given (both orders); nothing is filled in.
  ShiftedSymplecticStructure(SpacePtr space, int shift, Entries omega);

  const SpacePtr& space() const { return space_; }
  int shift() const { return shift_; }
  const Entries& entries() const { return omega_; }
  Rational omega(Index i, Index j) const;
  Rational w_form(Index i, Index j) const;
  Rational omega(const SparseVec& x, const SparseVec& y) const;

  // Coordinates x^i dual to e_i (degree 1 - d_i) carrying the Poisson tensor.
  const VarSetPtr& vars() const { return vars_; }
  bool invertible() const { return poisson_.has_value(); }
  // Throws StructuralError when the pairing is degenerate.
  const PoissonTensor& poisson_tensor() const;
  // A kernel vector of the pairing when it is degenerate.
  const std::optional<SparseVec>& kernel_witness() const { return kernel_; }

 private:
  SpacePtr space_;
  int shift_ = 0;
  Entries omega_;
  std::vector<SparseVec> g_rows_;
  VarSetPtr vars_;
  std::optional<PoissonTensor> poisson_;
  std::optional<SparseVec> kernel_;
};

// Builds omega from one entry per unordered pair, filling in the partner
// omega(e_j, e_i) = (-1)^{d_i d_j} omega(e_i, e_j).
ShiftedSymplecticStructure symmetric_pairing(SpacePtr space, int shift,
                                             const std::vector<std::tuple<Index, Index, Rational>>& entries);

struct SymplecticReport {
  CheckResult symmetry, nondegeneracy, invariance;
  bool passed() const { return symmetry.passed && nondegeneracy.passed && invariance.passed; }
};

// Symmetry and degree rule, perfect pairing per degree block, and invariance:
// every form G(l_n(y_1..y_n), y_{n+1}) is totally graded-symmetric on g[1].
SymplecticReport check_symplectic(const LInftyStructure& g, const ShiftedSymplecticStructure& omega,
                                  size_t max_arity = 8);

// Polynomial function on g[1] of cohomological degree n+1 without constant or
// linear part.
class ActionFunctional {
 public:
  ActionFunctional() = default;
  // Throws InputError on a constant or linear term or a term of wrong degree.
  ActionFunctional(Polynomial S, int shift);

  const Polynomial& polynomial() const { return S_; }
  int shift() const { return shift_; }
  Polynomial term(size_t arity) const { return S_.homogeneous(arity); }
  size_t max_arity() const { return S_.max_length(); }
  bool is_zero() const { return S_.is_zero(); }

 private:
  Polynomial S_;
  int shift_ = 0;
};

// S = sum_n 1/(n+1)! omega(x, l_n(x, .., x)), the normalisation for which the
// Hamiltonian vector field of S is Q_g. Throws StructuralError if omega is
// not invariant.
ActionFunctional action_from_brackets(const LInftyStructure& g, const ShiftedSymplecticStructure& omega);

// Q_S(x^j) = {S, x^j}.
VectorField hamiltonian_field(const ActionFunctional& S, const ShiftedSymplecticStructure& omega);
LInftyStructure hamiltonian_vf(const ActionFunctional& S, const ShiftedSymplecticStructure& omega);

// {S, S}.
Polynomial cme_residual(const ActionFunctional& S, const ShiftedSymplecticStructure& omega);
CheckResult check_cme(const ActionFunctional& S, const ShiftedSymplecticStructure& omega);

// Element of Sym(g*[-1]) kept up to a fixed polynomial length.
struct TruncatedObservable {
  Polynomial f;
  size_t max_length = 4;
  bool truncated = false;  // some term was dropped
};

TruncatedObservable poisson_bracket(const TruncatedObservable& f, const TruncatedObservable& h,
                                    const ShiftedSymplecticStructure& omega);

}  // namespace bvkit
