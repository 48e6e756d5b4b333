#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bvkit/matrix.hpp"
#include "bvkit/multilinear.hpp"
#include "bvkit/poly.hpp"
#include "bvkit/report.hpp"

namespace bvkit {

// L-infinity structure on a graded space g.
//
// Brackets are stored in the shifted convention: l_n is a degree-1 map on
// W = g[1], graded-symmetric there (declared graded_symmetric, shift 1, and of
// degree 2-n when read on g). The antisymmetric bracket on g is related by
//   l_n(sx_1, .., sx_n) = (-1)^{sum_k (n-k)|x_k|} s [x_1, .., x_n],
// so a binary bracket picks up (-1)^{|x_1|}; add_lie/lie_value apply this.
class LInftyStructure {
 public:
  LInftyStructure() = default;
  explicit LInftyStructure(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  size_t dim() const { return space_->dim(); }
  int wdeg(Index i) const { return space_->degree(i) - 1; }

  // Highest arity with a stored (possibly zero) bracket.
  size_t max_arity() const { return brackets_.empty() ? 0 : brackets_.rbegin()->first; }
  // Throws InputError when no bracket of arity n is stored.
  const MultilinearMap& bracket(size_t n) const;
  // Empty bracket map of arity n on this space.
  MultilinearMap empty_bracket(size_t n) const;
  bool has_bracket(size_t n) const { return brackets_.count(n) != 0; }
  const std::map<size_t, MultilinearMap>& brackets() const { return brackets_; }

  void set_bracket(size_t n, MultilinearMap m);
  void add_shifted(const std::vector<Index>& in, Index out, const Rational& c);
  void add_lie(const std::vector<Index>& in, Index out, const Rational& c);
  SparseVec shifted_value(const std::vector<Index>& in) const;
  SparseVec lie_value(const std::vector<Index>& in) const;
  static int decalage_sign(const GradedVectorSpace& sp, const std::vector<Index>& in);

  // Set when some structure constant came from a product that left a
  // truncation window; composition checks then classify residuals by weight.
  bool window_truncated() const { return window_truncated_; }
  void set_window_truncated(bool b) { window_truncated_ = b; }

  bool is_zero() const;
  friend bool operator==(const LInftyStructure& a, const LInftyStructure& b);

 private:
  SpacePtr space_;
  std::map<size_t, MultilinearMap> brackets_;
  bool window_truncated_ = false;
};

// Abelian structure (all brackets zero) on the given space.
LInftyStructure abelian(SpacePtr space);

// Generalized Jacobi identities, arity by arity, on every basis multiset of
// total arity <= max_arity (symmetric convention, unshuffle sums).
CheckResult check_relations(const LInftyStructure& g, size_t max_arity = 4);

// Coordinate functions on g: x^i dual to e_i, of degree 1 - deg(e_i).
VarSetPtr coordinate_variables(const GradedVectorSpace& space, const std::string& suffix = "");

// Q with Q(x^k) = (-1)^{|e_k|-1} sum_n (1/n!) (l_n(x,..,x))^k for the generic
// even point x = sum_i e_i x^i of g[1].
VectorField to_vector_field(const LInftyStructure& g, const VarSetPtr& vars);
// Inverse of to_vector_field; throws if Q has a constant term.
LInftyStructure from_vector_field(const VectorField& Q, SpacePtr space);

// Q^2 = (1/2)[Q,Q] on the generators x^k.
VectorField vector_field_square(const VectorField& Q);

// Classify a polynomial residual by window admissibility and report it.
void report_polynomial_residual(CheckResult& r, const Polynomial& residual, const std::string& label_prefix = "");

struct CeComplex {
  LInftyStructure base;
  size_t truncation = 0;
  VarSetPtr vars;
  // (cohomological degree c, symmetric degree p) -> monomial basis
  std::map<std::pair<int, int>, std::vector<Monomial>> basis;
  // (c, p, q): matrix of the component Sym^p -> Sym^q in degree c -> c+1
  std::map<std::tuple<int, int, int>, Matrix> blocks;
};

CeComplex ce_differential(const LInftyStructure& g, size_t truncation);

// Finite-dimensional graded commutative dga, possibly without unit. Shared by
// Artinian coefficient algebras and the CDGA models.
struct GradedAlgebra {
  SpacePtr space;
  std::vector<SparseVec> table;  // product of basis a and b at a * dim + b
  std::vector<char> inexact;     // product left a truncation window
  std::vector<SparseVec> d;      // differential on basis elements
  std::vector<char> d_inexact;   // d of this element left the window

  explicit GradedAlgebra(SpacePtr s = nullptr);
  void set_product(Index a, Index b, SparseVec v, bool exact = true);
  void set_differential(Index a, SparseVec v, bool exact = true);
  bool differential_exact(Index a) const { return !d_inexact[a]; }
  bool truncated() const;
  const SparseVec& product(Index a, Index b) const { return table[a * space->dim() + b]; }
  bool product_exact(Index a, Index b) const { return !inexact[a * space->dim() + b]; }
  SparseVec product(const SparseVec& a, const SparseVec& b) const;
  SparseVec differential(const SparseVec& a) const;
  CheckResult check_axioms() const;  // associativity, commutativity, Leibniz, d^2 = 0
};

struct ArtinCoefficients {
  GradedAlgebra algebra;
  size_t nilpotency = 2;  // m^N = 0

  CheckResult check() const;  // axioms plus nilpotency
};

// Dual numbers: one generator eps of the given degree, eps^2 = 0.
ArtinCoefficients dual_numbers(int degree = 0);
// k[eps]/eps^N without unit: basis eps, .., eps^{N-1}, eps of degree 0.
ArtinCoefficients truncated_polynomial(size_t N);

// Basis a|x of A (x) g in degree |a| + |x|, carrying A's window weights.
SpacePtr tensor_space(const GradedVectorSpace& A, const GradedVectorSpace& g);

// A (x) g with l_1 = d_A (x) 1 + 1 (x) l_1 and l_n = mu^n (x) l_n, Koszul
// signs in the shifted convention. Basis labels "a|x".
LInftyStructure tensor_with_algebra(const GradedAlgebra& A, const LInftyStructure& g);

// For alpha in m (x) g of total degree 1: sum_n (1/n!) l_n(alpha, .., alpha)
// in the convention where a dg Lie algebra gives d alpha + (1/2)[alpha, alpha].
SparseVec mc_residual(const LInftyStructure& g, const ArtinCoefficients& m, const SparseVec& alpha);

// Twist by a Maurer-Cartan element beta of g (same convention as
// mc_residual): with b the even element of g[1] corresponding to beta,
// l^b_n(y) = sum_k (1/k!) l_{n+k}(b, .., b, y). Throws if beta is not flat.
LInftyStructure twist(const LInftyStructure& g, const SparseVec& beta);

// Module over g. Actions are stored in the shifted convention: the map with
// inputs (g^n, v) is the bracket l_{n+1}(y_1, .., y_n, v) of the total space,
// and actions[0] is the differential of v.
struct LInftyModule {
  LInftyStructure base;
  SpacePtr space;
  std::map<size_t, MultilinearMap> actions;

  CheckResult check(size_t max_arity = 4) const;
};

// v = g[k] with the adjoint action (total space g (+) g[k-1]).
LInftyModule adjoint_module(const LInftyStructure& g, int k, const std::string& suffix);

// g (+) v[-1] with brackets mixing one v slot through the actions.
LInftyStructure semidirect_total_space(const LInftyStructure& g, const LInftyModule& v);

struct StrictMapReport {
  CheckResult compatibility;
  bool injective = false;
};

// f o l^src_n = l^tgt_n o f^{(x)n} on every basis tuple.
StrictMapReport strict_map_check(const MultilinearMap& f, const LInftyStructure& source,
                                 const LInftyStructure& target, size_t max_arity = 4);

// Image of a vector under an arity-1 map.
SparseVec apply_linear(const MultilinearMap& f, const SparseVec& v);

std::string tuple_str(const GradedVectorSpace& sp, const std::vector<Index>& t);

}  // namespace bvkit
