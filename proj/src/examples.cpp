#include "bvkit/examples.hpp"

#include <functional>

namespace bvkit {

LInftyStructure sl2_algebra() {
  auto sp = make_space({"e", "h", "f"}, {0, 0, 0});
  LInftyStructure g(sp);
  g.add_lie({0, 1}, 0, Rational(-2));
  g.add_lie({1, 2}, 2, Rational(-2));
  g.add_lie({0, 2}, 1, Rational(1));
  return g;
}

ShiftedSymplecticStructure sl2_trace(const SpacePtr& space, int shift) {
  return symmetric_pairing(space, shift, {{0, 2, Rational(1)}, {1, 1, Rational(2)}});
}

HolomorphicCS holomorphic_chern_simons(int N) {
  auto g = sl2_algebra();
  auto model = laurent_dolbeault_model(N);
  HolomorphicCS cs{present_tensor(model, g), {}};
  cs.omega = aksz_symplectic(model, sl2_trace(g.space(), 2));
  return cs;
}

namespace {

LagrangianSplitting split_by(const LInftyStructure& g, const ShiftedSymplecticStructure& omega,
                             const std::function<bool(const std::string& form, const std::string& x)>& plus) {
  std::vector<std::string> p, m;
  for (auto& l : g.space()->labels()) {
    auto bar = l.find('|');
    (plus(l.substr(0, bar), l.substr(bar + 1)) ? p : m).push_back(l);
  }
  return split_by_labels(g, omega, p, m);
}

bool has_dz(const std::string& form) { return form.find("_dz") != std::string::npos; }

}  // namespace

LagrangianSplitting wzw_splitting(int N) {
  auto cs = holomorphic_chern_simons(N);
  return split_by(cs.bulk.total, cs.omega, [](const std::string& form, const std::string&) { return has_dz(form); });
}

LagrangianSplitting toda_splitting(int N) {
  auto cs = holomorphic_chern_simons(N);
  const auto& sp = *cs.bulk.total.space();
  // the g-level element dz (x) f is -(dz|f) in the tensor basis
  auto g = twist(cs.bulk.total, {{sp.index_of("z0_w0_dz|f"), Rational(-1)}});
  return split_by(g, cs.omega, [](const std::string& form, const std::string& x) {
    return x == "e" || (has_dz(form) && x == "h");
  });
}

}  // namespace bvkit
