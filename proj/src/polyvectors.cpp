#include "bvkit/polyvectors.hpp"

#include <sstream>

#include "bvkit/errors.hpp"

namespace bvkit {

std::string dual_suffix(const GradedVectorSpace& l) {
  std::string star = "*";
  for (bool clash = true; clash;) {
    clash = false;
    for (auto& lab : l.labels()) clash = clash || l.find(lab + star).has_value();
    if (clash) star += "*";
  }
  return star;
}

namespace {

SpacePtr cotangent_space(const GradedVectorSpace& l, int n) {
  std::vector<std::string> labels = l.labels();
  std::vector<int> degrees = l.degrees();
  auto star = dual_suffix(l);
  for (Index a = 0; a < l.dim(); ++a) {
    labels.push_back(l.label(a) + star);
    degrees.push_back(2 - n - l.degree(a));
  }
  auto sp = std::make_shared<GradedVectorSpace>(labels, degrees);
  if (l.window()) {
    WeightWindow w = *l.window();
    for (Index a = 0; a < l.dim(); ++a) {
      auto neg = l.window()->weights[a];
      for (int& c : neg) c = -c;
      w.weights.push_back(std::move(neg));
    }
    sp->set_window(std::move(w));
  }
  return sp;
}

Polynomial rehome(const Polynomial& f, const VarSetPtr& target) {
  Polynomial out(target);
  for (auto& [m, c] : f.terms()) out.add_term(m, c);
  return out;
}

}  // namespace

CotangentFrame::CotangentFrame(SpacePtr base, int shift) : base_(std::move(base)), shift_(shift) {
  size_t m = base_->dim();
  total_ = cotangent_space(*base_, shift_);
  std::vector<std::tuple<Index, Index, Rational>> unit;
  for (Index a = 0; a < m; ++a) unit.emplace_back(a, static_cast<Index>(m + a), Rational(1));
  auto trial = symmetric_pairing(total_, shift_, unit);
  const auto& P = trial.poisson_tensor();
  // rescale so that {xi_a, x^a} = 1
  std::vector<std::tuple<Index, Index, Rational>> scaled;
  for (Index a = 0; a < m; ++a) scaled.emplace_back(a, static_cast<Index>(m + a), P.get(xi(a), x(a)));
  canonical_ = symmetric_pairing(total_, shift_, scaled);
  base_vars_ = coordinate_variables(*base_);
}

FramePtr make_frame(SpacePtr base, int shift) { return std::make_shared<CotangentFrame>(std::move(base), shift); }

size_t CotangentFrame::fibre_degree(const Monomial& m) const {
  size_t j = 0;
  for (Index v : m) j += is_fibre(v);
  return j;
}

Polynomial CotangentFrame::from_base(const Polynomial& f) const {
  if (f.vars() && f.vars()->size() != base_dim()) throw InputError("function is not on the base coordinates");
  return rehome(f, vars());
}

Polynomial CotangentFrame::function_of(const VectorField& X) const {
  if (X.comp.size() != base_dim()) throw InputError("vector field size does not match the frame");
  Polynomial F(vars());
  for (Index b = 0; b < base_dim(); ++b) {
    if (X.comp[b].is_zero()) continue;
    F += from_base(X.comp[b]) * Polynomial::variable(vars(), xi(b));
  }
  return F;
}

VectorField CotangentFrame::vector_field_of(const Polynomial& F) const {
  VectorField X(base_vars_);
  for (auto& [m, c] : F.terms())
    if (fibre_degree(m) != 1) throw InputError("function is not linear in the fibre");
  for (Index b = 0; b < base_dim(); ++b) X.comp[b] = rehome(F.right_derivative(xi(b)), base_vars_);
  return X;
}

Polynomial schouten(const CotangentFrame& frame, const Polynomial& P, const Polynomial& R) {
  const auto& vars = *frame.vars();
  Polynomial out(frame.vars());
  for (Index a = 0; a < frame.base_dim(); ++a) {
    Index x = frame.x(a), xi = frame.xi(a);
    int beta = -sign_pow(vars[x].degree * (frame.shift() + 1));
    auto Pxi = P.right_derivative(xi);
    if (!Pxi.is_zero()) out += Pxi * R.left_derivative(x);
    auto Px = P.right_derivative(x);
    if (!Px.is_zero()) out += Px * R.left_derivative(xi) * Rational(beta);
  }
  return out;
}

PolyvectorField PolyvectorField::make(FramePtr frame, size_t arity, Polynomial F) {
  for (auto& [m, c] : F.terms())
    if (frame->fibre_degree(m) != arity) {
      std::ostringstream os;
      os << "term " << F.monomial_str(m) << " is not a " << arity << "-polyvector";
      throw InputError(os.str());
    }
  return PolyvectorField{std::move(frame), arity, std::move(F)};
}

std::map<size_t, Polynomial> PolyvectorField::by_polynomial_arity() const {
  std::map<size_t, Polynomial> out;
  for (auto& [m, c] : function.terms()) {
    size_t k = m.size() - frame->fibre_degree(m);
    auto it = out.try_emplace(k, function.vars()).first;
    it->second.add_term(m, c);
  }
  return out;
}

PolyvectorField schouten(const PolyvectorField& P, const PolyvectorField& R) {
  if (P.frame != R.frame) throw InputError("polyvectors live on different frames");
  size_t j = P.arity + R.arity;
  return PolyvectorField{P.frame, j == 0 ? 0 : j - 1, schouten(*P.frame, P.function, R.function)};
}

HomotopyPoissonStructure::HomotopyPoissonStructure(FramePtr f, std::map<size_t, Polynomial> comps)
    : frame(std::move(f)), components(std::move(comps)) {
  const auto& vars = *frame->vars();
  for (auto& [j, p] : components) {
    if (j < 2) throw InputError("homotopy Poisson components start at the bivector");
    for (auto& [m, c] : p.terms()) {
      if (frame->fibre_degree(m) != j) {
        std::ostringstream os;
        os << "component " << j << " has term " << p.monomial_str(m) << " of the wrong arity";
        throw InputError(os.str());
      }
      if (monomial_degree(m, vars) != frame->shift() + 1) {
        std::ostringstream os;
        os << "component " << j << " has term " << p.monomial_str(m) << " of degree "
           << monomial_degree(m, vars) << ", expected " << frame->shift() + 1;
        throw InputError(os.str());
      }
    }
  }
}

Polynomial HomotopyPoissonStructure::total() const {
  Polynomial t(frame->vars());
  for (auto& [j, p] : components) t += p;
  return t;
}

bool HomotopyPoissonStructure::is_zero() const {
  for (auto& [j, p] : components)
    if (!p.is_zero()) return false;
  return true;
}

bool HomotopyPoissonStructure::strict() const {
  for (auto& [j, p] : components)
    if (j != 2 && !p.is_zero()) return false;
  return true;
}

HomotopyPoissonReport check_homotopy_poisson(const LInftyStructure& g, const HomotopyPoissonStructure& pi) {
  const auto& frame = *pi.frame;
  if (!same_space(g.space(), frame.base())) throw InputError("structure and polyvectors live on different spaces");
  HomotopyPoissonReport rep;
  rep.result.name = "homotopy Poisson";
  rep.strict = pi.strict();
  auto FQ = frame.function_of(to_vector_field(g, frame.base_vars()));
  auto T = FQ + pi.total();
  auto full = schouten(frame, T, T);
  for (auto& [m, c] : full.terms()) {
    size_t j = frame.fibre_degree(m);
    auto it = rep.residual.try_emplace({m.size() - j, j}, frame.vars()).first;
    it->second.add_term(m, c);
  }
  for (auto& [kj, r] : rep.residual) {
    std::ostringstream os;
    os << "arity " << kj.first << ", " << kj.second << "-vector";
    report_polynomial_residual(rep.result, r, os.str());
  }
  if (rep.strict) {
    auto it = pi.components.find(2);
    Polynomial P2 = it == pi.components.end() ? Polynomial(frame.vars()) : it->second;
    rep.lie_derivative = schouten(frame, FQ, P2);
    rep.self_bracket = schouten(frame, P2, P2);
  }
  return rep;
}

std::map<size_t, PolyvectorField> polyvector_from_function(const FramePtr& frame, const Polynomial& F) {
  std::map<size_t, Polynomial> parts;
  for (auto& [m, c] : F.terms()) parts.try_emplace(frame->fibre_degree(m), frame->vars()).first->second.add_term(m, c);
  std::map<size_t, PolyvectorField> out;
  for (auto& [j, p] : parts) out.emplace(j, PolyvectorField{frame, j, std::move(p)});
  return out;
}

Polynomial function_from_polyvectors(const std::map<size_t, PolyvectorField>& parts) {
  if (parts.empty()) return Polynomial();
  const auto& frame = parts.begin()->second.frame;
  Polynomial F(frame->vars());
  for (auto& [j, p] : parts) {
    if (p.frame != frame) throw InputError("polyvectors live on different frames");
    F += p.function;
  }
  return F;
}

Polynomial derived_bracket(const CotangentFrame& frame, const Polynomial& pi, const Polynomial& f,
                           const Polynomial& g) {
  return schouten(frame, schouten(frame, pi, f), g);
}

HomotopyPoissonStructure poisson_bivector(const ShiftedSymplecticStructure& omega) {
  auto frame = make_frame(omega.space(), omega.shift() + 1);
  const auto& P = omega.poisson_tensor();
  const auto& vars = frame->vars();
  size_t m = frame->base_dim();
  Polynomial pi(vars);
  Monomial unit;
  for (Index a = 0; a < m; ++a)
    for (Index b = a; b < m; ++b) {
      Rational p = P.get(a, b);
      if (p.is_zero()) continue;
      auto mono = Polynomial::variable(vars, frame->xi(a)) * Polynomial::variable(vars, frame->xi(b));
      auto probe = derived_bracket(*frame, mono, Polynomial::variable(vars, frame->x(a)),
                                   Polynomial::variable(vars, frame->x(b)));
      Rational unit_value = probe.coeff(unit);
      if (unit_value.is_zero()) throw StructuralError("pairing has a diagonal entry on an odd fibre coordinate");
      // {{Pi, x^a}, x^b} = (-1)^{|x^a|+1} P^ab; Q-invariant exactly when omega is
      if (!vars->odd(frame->x(a))) p = -p;
      pi += mono * (p / unit_value);
    }
  return HomotopyPoissonStructure(frame, {{2, pi}});
}

}  // namespace bvkit
