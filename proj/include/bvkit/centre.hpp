#pragma once

#include <map>
#include <vector>

#include "bvkit/boundary.hpp"
#include "bvkit/polyvectors.hpp"

namespace bvkit {

// l*[n-2] as a module over l: the actions are the parts of the Hamiltonian
// vector field of F_Q on T*[n]L with one dual input, so that the canonical
// pairing is invariant. Labels a*.
LInftyModule coadjoint_module(const LInftyStructure& l, int n);

// T*_Pi[n]L: l (+) l*[n-2] with Q_{T*[n]L} + Q_Pi and the canonical pairing.
struct TwistedCotangent {
  LInftyStructure base;
  HomotopyPoissonStructure pi;
  FramePtr frame;
  LInftyModule coadjoint;
  LInftyStructure structure;  // on frame->total()
  int shift() const { return frame->shift(); }
  const ShiftedSymplecticStructure& omega() const { return frame->canonical(); }
  // sigma_0: l -> T*_Pi[n]L, a -> a.
  MultilinearMap zero_section() const;
};

// The brackets of T*_Pi[n]L without checking Pi; square zero exactly when Pi
// is homotopy Poisson.
LInftyStructure assemble_cotangent(const LInftyStructure& l, const HomotopyPoissonStructure& pi);

// Throws StructuralError naming the failing bidegree when Pi is not homotopy
// Poisson for l, InputError when Pi lives on another frame or shift.
TwistedCotangent twisted_cotangent(const LInftyStructure& l, const HomotopyPoissonStructure& pi, int n);

// interval (x) Z_Pi(l) with I (x) omega_can, of shift n - 1.
struct UniversalBulk {
  TwistedCotangent centre;
  TensorPresentation bulk;
  ShiftedSymplecticStructure omega;
};
UniversalBulk universal_bulk(const LInftyStructure& l, const HomotopyPoissonStructure& pi, int n);

struct RoundtripReport {
  CheckResult phase_space, structure, poisson;
  bool passed() const { return phase_space.passed && structure.passed && poisson.passed; }
  std::vector<const CheckResult*> all() const { return {&phase_space, &structure, &poisson}; }
};

// Bulk, its phase space, the splitting l+ = sigma_0(l), l- = l*[n-2], and the
// boundary theory of that splitting, compared with (l, Pi) constant by
// constant.
RoundtripReport roundtrip_check(const LInftyStructure& l, const HomotopyPoissonStructure& pi, int n);

struct TrivialityReport {
  CheckResult acyclic;
  std::map<int, long> cohomology;  // degree -> dimension of H(l_1)
};

// Cohomology of l_1 on the twisted cotangent, degree by degree.
TrivialityReport cohomology_report(const LInftyStructure& g);

// T*_{Pi_omega}[n]L for omega at shift n - 1 has acyclic l_1.
TrivialityReport triviality_check(const LInftyStructure& g, const ShiftedSymplecticStructure& omega);

}  // namespace bvkit
