#pragma once

// Instances and generators shared by the unit tests and the acceptance run.

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"

#include "bvkit/boundary.hpp"
#include "bvkit/centre.hpp"
#include "bvkit/examples.hpp"
#include "bvkit/polyvectors.hpp"

namespace fixture {

using namespace bvkit;

inline SparseVec basis(Index i) { return {{i, Rational(1)}}; }
inline int sign(long e) { return (e & 1) ? -1 : 1; }

ShiftedSymplecticStructure lib_pairing(const SpacePtr& sp, int shift, const oracle::Pairing& w);

// sl2 plus central u, v with <u,u> = <v,v> = 1. The bracket is read off an
// invariant 3-form phi by <[x,y],z> = phi(x,y,z); t != 0 adds
// t (e^h^u + h^f^v) to phi, which keeps invariance but breaks Jacobi.
oracle::LieTable metric_table(const Rational& t);
oracle::Pairing metric_pairing();

LagrangianSplitting make_splitting(const LInftyStructure& g, const ShiftedSymplecticStructure& w,
                                   std::vector<SparseVec> plus, std::vector<SparseVec> minus);

// interval (x) sl2 at shift 1
struct IntervalSl2 {
  LInftyStructure g = tensor_linfty(interval_model(), sl2_algebra());
  ShiftedSymplecticStructure w = aksz_symplectic(interval_model(), sl2_trace(sl2_algebra().space(), 2));
  Index at(const std::string& l) const { return g.space()->index_of(l); }
};

// Random Lagrangian complement to l+ obtained from an isotropic one by adding
// a random element of the space of isotropic graphs l- -> l+.
std::vector<SparseVec> randomize_complement(oracle::Rng& rng, const LInftyStructure& g,
                                            const ShiftedSymplecticStructure& w, const std::vector<SparseVec>& plus,
                                            const std::vector<SparseVec>& minus);

// Laurent monomial algebra multiplied by hand, on the basis order of the
// library model (only its labels are used). del_only drops the dw part of d.
oracle::AlgebraTable laurent_table(int N, const CdgaModel& model, bool del_only);

struct LaurentSl2Oracle {
  oracle::LieTable full, del;
  oracle::Pairing w;
  std::map<std::string, int> index;

  explicit LaurentSl2Oracle(int N);
  // basis indices a|x with the form part and the factor chosen by predicate
  std::set<int> where(const std::function<bool(const std::string&, const std::string&)>& keep) const;
};

// Terms whose coordinates all sit in the safe box of the window. Near the
// window edge the truncated model is not invariant, and terms there depend on
// how the action is symmetrised.
Polynomial safe_part(const Polynomial& p, const GradedVectorSpace& sp);
inline bool has_dz(const std::string& form) { return form.find("_dz") != std::string::npos; }
std::set<int> set_union(const std::set<int>& a, const std::set<int>& b);

// A (x) g coefficients keyed a * ng + x. The library basis element "a|x"
// differs from a (x) x by (-1)^{|a|}.
SparseVec to_lib(const oracle::AlgebraTable& A, size_t ng, const oracle::Vec& v);
oracle::Vec from_lib(const oracle::AlgebraTable& A, size_t ng, const SparseVec& v);

// The CE differential in cohomological degree c as one matrix from all of
// degree c to all of degree c + 1, zero blocks included; keyed by c.
std::map<int, Matrix> ce_total(const CeComplex& ce);

// Kirillov bivector sum c^k_ij x_k xi_i xi_j of a Lie table on a degree 0 base.
Polynomial linear_bivector(const CotangentFrame& f, const oracle::LieTable& t);
// All monomials on the frame with the given fibre degree, at most `base`
// base coordinates and total degree n + 1.
std::vector<Monomial> candidate_monomials(const CotangentFrame& f, size_t j, size_t base);

struct Instance {
  LInftyStructure l;
  HomotopyPoissonStructure pi;
};
// Random (l, Pi) on dims <= 4: abelian or sl2 bases, a few random terms of
// fibre degree 2 or 3.
Instance random_instance(oracle::Rng& rng, bool strict);

// Monomials of length <= max_len, the empty one included.
std::vector<Monomial> monomials(const VariableSet& vars, size_t max_len);
Polynomial mono(const VarSetPtr& vars, const Monomial& m, const Rational& c = Rational(1));
int degree_of(const Polynomial& p);
// Random homogeneous polynomial of the given degree with length bounded.
Polynomial random_homogeneous(oracle::Rng& rng, const CotangentFrame& f, int degree, size_t max_len, int percent);
// Base of dimension 1..3 in degrees -1..2, shift -1..3.
FramePtr random_frame(oracle::Rng& rng);
// Degree-1 directions u, v, w: classical polyvectors (x even, xi odd).
FramePtr classical_frame(size_t dim = 3);

}  // namespace fixture
