#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bvkit/boundary.hpp"
#include "bvkit/cdga.hpp"
#include "bvkit/centre.hpp"

namespace bvkit {

using LabelledVec = std::vector<std::pair<std::string, Rational>>;

// Theory description file, schema 1. Rationals are "p/q" strings.
//
//   schema      1
//   name        string
//   description string, optional
//   space       {labels: [...], degrees: [...]}
//   brackets    {convention: "lie" | "shifted", entries: [{inputs: [...], output: [[label, c], ..]}]}
//   pairing     {shift, entries: [[a, b, c], ..]}, one entry per unordered pair, optional
//   tensor      {model: "laurent(2)", twist: [[label, c], ..]}, optional; space, brackets and
//               pairing then describe the factor and the file means model (x) factor
//   splitting   {plus: [...], minus: [...]}, labels of the total space, optional
//   poisson     {shift, terms: [{monomial: [...], coefficient: c}]}, optional; monomials in
//               the coordinates of T*[shift]L named by the labels a and a*
struct TheoryFile {
  struct Bracket {
    std::vector<std::string> inputs;
    LabelledVec output;
  };
  struct Pairing {
    int shift = 0;
    std::vector<std::tuple<std::string, std::string, Rational>> entries;
  };
  struct Tensor {
    std::string model;
    LabelledVec twist;
  };
  struct Splitting {
    std::vector<std::string> plus, minus;
  };
  struct PoissonTerm {
    std::vector<std::string> monomial;
    Rational coefficient;
  };
  struct Poisson {
    int shift = 0;
    std::vector<PoissonTerm> terms;
  };

  std::string name;
  std::optional<std::string> description;
  std::vector<std::string> labels;
  std::vector<int> degrees;
  std::string convention = "lie";
  std::vector<Bracket> brackets;
  std::optional<Pairing> pairing;
  std::optional<Tensor> tensor;
  std::optional<Splitting> splitting;
  std::optional<Poisson> poisson;
};

// InputError with line and column on malformed JSON, with the offending key
// or label otherwise.
TheoryFile parse_theory(const std::string& text);
std::string serialize_theory(const TheoryFile& f);

// The objects a file describes.
struct Theory {
  TheoryFile file;
  LInftyStructure algebra;  // model (x) factor, twisted, when a tensor is given
  std::optional<TensorPresentation> tensor;
  std::optional<ShiftedSymplecticStructure> omega;
  std::optional<LagrangianSplitting> splitting;
  std::optional<HomotopyPoissonStructure> poisson;
};

Theory resolve_theory(const TheoryFile& f);

// File entries for library objects: brackets in the Lie convention, one
// pairing entry per unordered pair, Poisson terms in sorted order.
void describe_structure(TheoryFile& f, const LInftyStructure& g);
TheoryFile::Pairing describe_pairing(const ShiftedSymplecticStructure& omega);
TheoryFile::Poisson describe_poisson(const HomotopyPoissonStructure& pi);
std::vector<TheoryFile::PoissonTerm> describe_function(const Polynomial& F);

// topological-mechanics, poisson-sigma, chern-simons, wzw, toda, kw-b-twist.
const std::vector<std::string>& example_names();
TheoryFile example_theory(const std::string& name);

}  // namespace bvkit
