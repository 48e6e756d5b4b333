#pragma once

#include "bvkit/boundary.hpp"
#include "bvkit/cdga.hpp"

namespace bvkit {

// sl2 in degree 0 on e, h, f: [h,e] = 2e, [h,f] = -2f, [e,f] = h.
LInftyStructure sl2_algebra();
// Tr(ef) = 1, Tr(hh) = 2 on a space with basis e, h, f.
ShiftedSymplecticStructure sl2_trace(const SpacePtr& space, int shift);

// Laurent(N) (x) sl2 with its shift 0 AKSZ pairing.
struct HolomorphicCS {
  TensorPresentation bulk;
  ShiftedSymplecticStructure omega;
};
HolomorphicCS holomorphic_chern_simons(int N);

// l+ = forms with a dz, l- = the rest.
LagrangianSplitting wzw_splitting(int N);
// Twisted by dz (x) f; l+ = Omega^0 e + Omega^1 {e, h}, l- = Omega^0 {h, f} + Omega^1 f.
LagrangianSplitting toda_splitting(int N);

}  // namespace bvkit
