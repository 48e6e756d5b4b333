#pragma once

#include <map>
#include <memory>
#include <utility>

#include "bvkit/linfty.hpp"
#include "bvkit/symplectic.hpp"

namespace bvkit {

// Suffix of dual labels: "*", or "**" and so on when that would clash.
std::string dual_suffix(const GradedVectorSpace& l);

// Polyvector fields on L (tangent algebra l) as functions on T*[n]L.
//
// The total space is l (+) l*[n-2] with basis labels a and a*. Coordinates
// x^a (degree 1 - d_a) come first, then the fibre coordinates xi_a (degree
// n + d_a - 1). A j-polyvector is a function of fibre degree j; the Schouten
// bracket is the canonical bracket of degree -n,
//   [P, R] = sum_a (P d<-/dxi_a)(d/dx^a R) + b_a (P d<-/dx^a)(d/dxi_a R),
// b_a = -(-1)^{|x^a|(n+1)}, so that {xi_a, x^a} = 1. The canonical pairing on
// the total space is normalised to give the same bracket.
class CotangentFrame {
 public:
  CotangentFrame(SpacePtr base, int shift);

  const SpacePtr& base() const { return base_; }
  int shift() const { return shift_; }
  size_t base_dim() const { return base_->dim(); }
  const SpacePtr& total() const { return total_; }
  const ShiftedSymplecticStructure& canonical() const { return canonical_; }
  const VarSetPtr& vars() const { return canonical_.vars(); }
  const VarSetPtr& base_vars() const { return base_vars_; }

  Index x(Index a) const { return a; }
  Index xi(Index a) const { return static_cast<Index>(base_dim() + a); }
  bool is_fibre(Index v) const { return v >= base_dim(); }
  size_t fibre_degree(const Monomial& m) const;

  // f written in coordinate_variables(base), moved onto the frame.
  Polynomial from_base(const Polynomial& f) const;
  // sum_b X^b xi_b, the function with [F, x^b] = X(x^b).
  Polynomial function_of(const VectorField& X) const;
  // Inverse of function_of on functions linear in the fibre.
  VectorField vector_field_of(const Polynomial& F) const;

 private:
  SpacePtr base_, total_;
  int shift_ = 0;
  ShiftedSymplecticStructure canonical_;
  VarSetPtr base_vars_;
};
using FramePtr = std::shared_ptr<const CotangentFrame>;

FramePtr make_frame(SpacePtr base, int shift);

Polynomial schouten(const CotangentFrame& frame, const Polynomial& P, const Polynomial& R);

struct PolyvectorField {
  FramePtr frame;
  size_t arity = 0;  // polyvector arity j
  Polynomial function;

  // Throws InputError if F is not homogeneous of the given fibre degree.
  static PolyvectorField make(FramePtr frame, size_t arity, Polynomial F);
  // Components by polynomial arity k.
  std::map<size_t, Polynomial> by_polynomial_arity() const;
};

// Throws InputError on frames that differ.
PolyvectorField schouten(const PolyvectorField& P, const PolyvectorField& R);

// Pi-bar = {Pi_j}_{j >= 2}, each of cohomological degree n + 1 on T*[n]L;
// an (n-1)-shifted homotopy Poisson structure once the check passes.
struct HomotopyPoissonStructure {
  FramePtr frame;
  std::map<size_t, Polynomial> components;

  HomotopyPoissonStructure() = default;
  // Throws InputError on a component with j < 2, the wrong fibre degree or
  // the wrong cohomological degree.
  HomotopyPoissonStructure(FramePtr frame, std::map<size_t, Polynomial> components);

  int shift() const { return frame->shift(); }
  Polynomial total() const;
  bool is_zero() const;
  bool strict() const;  // only Pi_2
};

struct HomotopyPoissonReport {
  CheckResult result;
  // [Q + Pi, Q + Pi] by (polynomial arity, polyvector arity)
  std::map<std::pair<size_t, size_t>, Polynomial> residual;
  bool strict = false;
  Polynomial lie_derivative;  // [Q, Pi], strict case
  Polynomial self_bracket;    // [Pi, Pi], strict case
  bool passed() const { return result.passed; }
};

HomotopyPoissonReport check_homotopy_poisson(const LInftyStructure& g, const HomotopyPoissonStructure& pi);

// Split a function on T*[n]L by polyvector arity, and back.
std::map<size_t, PolyvectorField> polyvector_from_function(const FramePtr& frame, const Polynomial& F);
Polynomial function_from_polyvectors(const std::map<size_t, PolyvectorField>& parts);

// [[Pi, f], g] for functions f, g of the base coordinates on the frame.
Polynomial derived_bracket(const CotangentFrame& frame, const Polynomial& pi, const Polynomial& f,
                           const Polynomial& g);

// The bivector Pi_omega of a symplectic l at shift n - 1 on T*[n]L: its
// derived bracket on coordinates is {{Pi, x^a}, x^b} = (-1)^{|x^a|+1} P^ab,
// P the Poisson tensor of omega.
HomotopyPoissonStructure poisson_bivector(const ShiftedSymplecticStructure& omega);

}  // namespace bvkit
