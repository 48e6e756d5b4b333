#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "bvkit/graded.hpp"

namespace bvkit {

struct Variable {
  std::string name;
  int degree = 0;
  std::vector<int> weight;  // empty unless the owning set has a window
};

// Generators of a free graded-commutative algebra. Odd variables square to
// zero; the order of variables fixes the canonical form of monomials.
class VariableSet {
 public:
  VariableSet() = default;
  explicit VariableSet(std::vector<Variable> vars);

  size_t size() const { return vars_.size(); }
  const Variable& operator[](size_t i) const { return vars_[i]; }
  bool odd(Index i) const { return odd_[i]; }
  const std::vector<bool>& odd_flags() const { return odd_; }
  std::optional<Index> find(const std::string& name) const;

  void set_box(std::vector<int> lo, std::vector<int> hi, std::vector<int> hidden = {}, int hidden_count = 0);
  bool has_window() const { return !lo_.empty(); }
  const std::vector<int>& box_lo() const { return lo_; }
  const std::vector<int>& box_hi() const { return hi_; }
  const std::vector<int>& hidden() const { return hidden_; }
  int hidden_count() const { return hidden_count_; }

 private:
  std::vector<Variable> vars_;
  std::vector<bool> odd_;
  std::unordered_map<std::string, Index> index_;
  std::vector<int> lo_, hi_, hidden_;
  int hidden_count_ = 0;
};

using VarSetPtr = std::shared_ptr<const VariableSet>;

// Sorted multiset of variable indices.
using Monomial = boost::container::small_vector<Index, 6>;

struct MonomialHash {
  size_t operator()(const Monomial& m) const noexcept {
    uint64_t h = 1469598103934665603ull ^ m.size();
    for (Index v : m) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

// Sign of the product of two canonical monomials, written to out; 0 if an odd
// variable repeats.
int monomial_product(const Monomial& a, const Monomial& b, const std::vector<bool>& odd, Monomial& out);
// d/dx_v from the left (sign from odd variables before v), times multiplicity.
int left_derive(const Monomial& m, Index v, const std::vector<bool>& odd, Monomial& out);
// d/dx_v from the right (sign from odd variables after v), times multiplicity.
int right_derive(const Monomial& m, Index v, const std::vector<bool>& odd, Monomial& out);

int monomial_degree(const Monomial& m, const VariableSet& vars);
bool monomial_admissible(const Monomial& m, const VariableSet& vars);

class Polynomial {
 public:
  using Terms = std::unordered_map<Monomial, Rational, MonomialHash>;

  Polynomial() = default;
  explicit Polynomial(VarSetPtr vars) : vars_(std::move(vars)) {}
  static Polynomial constant(VarSetPtr vars, const Rational& c);
  static Polynomial variable(VarSetPtr vars, Index i, const Rational& c = Rational(1));

  const VarSetPtr& vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // Adds c times the canonical monomial m.
  void add_term(const Monomial& m, const Rational& c);
  Rational coeff(const Monomial& m) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b);
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // Terms of the given polynomial (word) length.
  Polynomial homogeneous(size_t length) const;
  Polynomial filter(const std::function<bool(const Monomial&)>& keep) const;
  size_t max_length() const;

  Polynomial left_derivative(Index v) const;
  Polynomial right_derivative(Index v) const;

  // Deterministic listing: by length, then lexicographically.
  std::vector<std::pair<Monomial, Rational>> sorted_terms() const;
  std::string monomial_str(const Monomial& m) const;
  std::string str() const;

 private:
  VarSetPtr vars_;
  Terms terms_;
};

// Derivation X = sum_k X^k d/dx_k (left derivatives).
struct VectorField {
  VarSetPtr vars;
  std::vector<Polynomial> comp;

  VectorField() = default;
  explicit VectorField(VarSetPtr v);
  Polynomial apply(const Polynomial& f) const;
  bool is_zero() const;
  friend bool operator==(const VectorField& a, const VectorField& b) { return a.comp == b.comp; }
};

// Graded commutator [X,Y] = XY - (-1)^{|X||Y|} YX, given the degrees of X and Y.
VectorField commutator(const VectorField& X, int degX, const VectorField& Y, int degY);

// Replace each variable i by images[i] (polynomials over `target`).
Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images, const VarSetPtr& target);

// Constant Poisson tensor P^{ab} defining {F,G} = sum (F <-d_a) P^{ab} (d_b G).
class PoissonTensor {
 public:
  PoissonTensor() = default;
  explicit PoissonTensor(VarSetPtr vars);
  void set(Index a, Index b, const Rational& c);
  Rational get(Index a, Index b) const;
  const VarSetPtr& vars() const { return vars_; }
  const std::vector<std::vector<std::pair<Index, Rational>>>& rows() const { return rows_; }

 private:
  VarSetPtr vars_;
  std::vector<std::vector<std::pair<Index, Rational>>> rows_;
};

Polynomial poisson_bracket(const PoissonTensor& P, const Polynomial& F, const Polynomial& G);

}  // namespace bvkit
