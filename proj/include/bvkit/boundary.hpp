#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvkit/cdga.hpp"
#include "bvkit/polyvectors.hpp"
#include "bvkit/symplectic.hpp"

namespace bvkit {

// g = l+ (+) l- inside a symplectic L-infinity algebra, each side given by a
// basis of homogeneous vectors of g.
struct LagrangianSplitting {
  LInftyStructure ambient;
  ShiftedSymplecticStructure omega;
  std::vector<SparseVec> plus, minus;
  std::vector<std::string> plus_labels, minus_labels;
  std::string complement_source = "user";

  int shift() const { return omega.shift(); }
  // l+ as a space (with window weights when they are well defined).
  SpacePtr plus_space() const;
  // The inclusion f: l+ -> g.
  MultilinearMap inclusion() const;
};

// Labels of basis vectors of g; a vector in neither list is a complement error.
LagrangianSplitting split_by_labels(const LInftyStructure& g, const ShiftedSymplecticStructure& omega,
                                    const std::vector<std::string>& plus, const std::vector<std::string>& minus);

struct SplittingReport {
  CheckResult complement, isotropy, closure, identification;
  bool passed() const { return complement.passed && isotropy.passed && closure.passed && identification.passed; }
  std::vector<const CheckResult*> all() const { return {&complement, &isotropy, &closure, &identification}; }
};

// g = l+ (+) l- per degree, omega = 0 on l+ (x) l+ and l- (x) l-, brackets of
// l+ land in l+, and omega: l- -> l+*[n-2] has full rank.
SplittingReport check_splitting(const LagrangianSplitting& s, size_t max_arity = 4);

// A Lagrangian complement to l+: a coordinate complement corrected by
// elements of l+ until it is isotropic. Throws StructuralError if l+ is not
// Lagrangian.
std::vector<SparseVec> suggest_complement(const LInftyStructure& g, const ShiftedSymplecticStructure& omega,
                                          const std::vector<SparseVec>& plus);

// l_n+ = pi+ o l_n o f^n on l+.
LInftyStructure induced_structure(const LagrangianSplitting& s);

// S in the coordinates of T*[n]L+: x^a on l+ and fibre coordinates xi_a,
// linear in the coordinates of l-, with {xi_a, x^b} = delta. S_j is the part
// of fibre degree j.
struct ActionDecomposition {
  FramePtr frame;
  ActionFunctional action;                  // S on g
  std::map<size_t, Polynomial> components;  // j -> S_j, j <= max_j
  size_t max_j = 4;
  bool higher_vanish = true;  // no S_j with j > max_j
  std::vector<Polynomial> to_frame, to_ambient;  // coordinate substitutions

  Polynomial component(size_t j) const;
  // A function on the frame written back in the coordinates of g.
  Polynomial reassemble(const Polynomial& F) const;
};

// Throws StructuralError when the splitting fails its check.
ActionDecomposition decompose_action(const LagrangianSplitting& s, size_t max_j = 4);

struct BoundaryTheory {
  LInftyStructure structure;  // on l+
  HomotopyPoissonStructure pi;
  ActionDecomposition decomposition;
  HomotopyPoissonReport check;
};

// S_0 = 0 and S_1 = Q of the induced brackets are required (StructuralError
// naming a monomial otherwise); Pi = {S_j}_{j >= 2}.
BoundaryTheory boundary_theory(const LagrangianSplitting& s, size_t max_j = 4);

// Bulk built as interval (x) Y: returns Y and omega^b with
// omega_bulk = I (x) omega^b, of shift one more than the bulk.
struct PhaseSpace {
  LInftyStructure structure;
  ShiftedSymplecticStructure omega;
  SymplecticReport report;
};
PhaseSpace extract_phase_space(const TensorPresentation& bulk, const ShiftedSymplecticStructure& omega_bulk);

}  // namespace bvkit
