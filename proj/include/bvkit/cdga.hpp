#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bvkit/linfty.hpp"
#include "bvkit/symplectic.hpp"

namespace bvkit {

// Finite graded commutative dga with unit and an integration functional I of
// degree -dimension. Dolbeault-type models also carry the bigrading and the
// two pieces d = del + delbar.
struct CdgaModel {
  std::string name;
  GradedAlgebra algebra;
  Index unit = 0;
  int dimension = 0;
  SparseVec integral;  // I(e_a) for each basis element with nonzero value

  std::vector<std::pair<int, int>> bidegree;  // empty unless bigraded
  std::vector<SparseVec> del, delbar;

  const GradedVectorSpace& space() const { return *algebra.space; }
  const SpacePtr& space_ptr() const { return algebra.space; }
  size_t dim() const { return algebra.space->dim(); }
  bool bigraded() const { return !bidegree.empty(); }

  Index index(const std::string& label) const { return space().index_of(label); }
  SparseVec element(const std::string& label) const { return SparseVec{{index(label), Rational(1)}}; }
  Rational integrate(const SparseVec& v) const;
  Rational pairing(Index a, Index b) const { return integrate(algebra.product(a, b)); }
};

struct ModelProduct {
  SparseVec value;
  bool exact = true;  // false when some term left the window and was dropped
};
ModelProduct multiply(const CdgaModel& A, const SparseVec& a, const SparseVec& b);
ModelProduct apply_differential(const CdgaModel& A, const SparseVec& a);

struct CdgaReport {
  CheckResult axioms, unit, stokes, poincare, bigrading;
  bool passed() const {
    return axioms.passed && unit.passed && stokes.passed && poincare.passed && bigrading.passed;
  }
  std::vector<const CheckResult*> all() const { return {&axioms, &unit, &stokes, &poincare, &bigrading}; }
};
CdgaReport check_model(const CdgaModel& A);

// The ground field, I(1) = 1.
CdgaModel point_model();
// {1, dt}, d = 0, I(dt) = 1.
CdgaModel interval_model();
// Exterior algebra on a, b of degree 1, I(ab) = 1.
CdgaModel torus_model();
// Exterior algebra on a, b, c of degree 1 with dc = ab, I(abc) = 1.
CdgaModel heisenberg_model();
// z^a w^b dz^e dw^f with a, b in [-N, N-1], d = del + delbar, I the residue
// at z^-1 w^-1 dz dw. Labels z{a}_w{b} with suffix "", _dz, _dw, _dzdw.
// Window weights (a + e, b + f), safe box [-N+1, N-1] in each component.
CdgaModel laurent_dolbeault_model(int N);
// A (x) B with (a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb' and
// I = I_A (x) I_B. Labels "a.b", with unit factors dropped when unambiguous.
CdgaModel tensor_models(const CdgaModel& A, const CdgaModel& B);

// point, interval, torus, heisenberg, laurent(N), and products joined by '*'
// such as "interval*torus". Throws InputError for an unknown name.
CdgaModel model_by_name(const std::string& name);

// A (x) g with l_1 = d_A (x) 1 + 1 (x) l_1 and l_n = mu^n (x) l_n.
LInftyStructure tensor_linfty(const CdgaModel& A, const LInftyStructure& g);

// 1 (x) f for a degree-0 linear map f, between the tensor spaces.
MultilinearMap tensor_linear_map(const CdgaModel& A, const MultilinearMap& f);

// omega(a|x, b|y) on A (x) g from I and eta, at shift n - dimension. On the
// g-level elements a (x) x this is (-1)^{|x||b|} I(ab) eta(x, y).
ShiftedSymplecticStructure aksz_symplectic(const CdgaModel& A, const ShiftedSymplecticStructure& eta);

// A structure built as model (x) factor, with the factorisation kept.
struct TensorPresentation {
  CdgaModel model;
  LInftyStructure factor;
  LInftyStructure total;
};
TensorPresentation present_tensor(const CdgaModel& A, const LInftyStructure& g);

// Index of a|x in A (x) g.
inline Index tensor_index(size_t factor_dim, Index a, Index x) { return a * factor_dim + x; }

}  // namespace bvkit
