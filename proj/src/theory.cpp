#include "bvkit/theory.hpp"

#include <json.hpp>

#include "bvkit/errors.hpp"
#include "bvkit/examples.hpp"

namespace bvkit {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(where, "missing field '" + key + "'");
  return *it;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (auto& [k, v] : obj.items()) {
    bool known = false;
    for (auto* allowed : keys) known = known || k == allowed;
    if (!known) bad(where, "unknown field '" + k + "'");
  }
}

std::string str_of(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where, "expected a string");
  return v.get<std::string>();
}

int int_of(const json& v, const std::string& where) {
  if (!v.is_number_integer()) bad(where, "expected an integer");
  return v.get<int>();
}

Rational rat_of(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where, "rationals are written as \"p/q\" strings");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const InputError& e) {
    bad(where, e.what());
  }
}

std::vector<std::string> strings_of(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of strings");
  std::vector<std::string> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(str_of(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

LabelledVec labelled_of(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of [label, coefficient] pairs");
  LabelledVec out;
  for (size_t i = 0; i < v.size(); ++i) {
    auto w = where + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != 2) bad(w, "expected [label, coefficient]");
    out.emplace_back(str_of(v[i][0], w), rat_of(v[i][1], w));
  }
  return out;
}

ojson labelled_json(const LabelledVec& v) {
  ojson a = ojson::array();
  for (auto& [l, c] : v) a.push_back(ojson::array({l, c.str()}));
  return a;
}

std::pair<size_t, size_t> line_column(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Index resolve_label(const GradedVectorSpace& sp, const std::string& l, const std::string& where) {
  auto i = sp.find(l);
  if (!i) bad(where, "unknown label '" + l + "'");
  return *i;
}

}  // namespace

TheoryFile parse_theory(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    auto p = msg.find("parse error");
    throw InputError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     (p == std::string::npos ? msg : msg.substr(p)));
  }
  only_keys(doc, {"schema", "name", "description", "space", "brackets", "pairing", "tensor", "splitting", "poisson"},
            "theory");
  if (int_of(field(doc, "schema", "theory"), "schema") != 1) bad("schema", "only schema 1 is supported");

  TheoryFile f;
  f.name = str_of(field(doc, "name", "theory"), "name");
  if (doc.contains("description")) f.description = str_of(doc["description"], "description");

  const auto& sp = field(doc, "space", "theory");
  only_keys(sp, {"labels", "degrees"}, "space");
  f.labels = strings_of(field(sp, "labels", "space"), "space.labels");
  const auto& deg = field(sp, "degrees", "space");
  if (!deg.is_array()) bad("space.degrees", "expected an array of integers");
  for (size_t i = 0; i < deg.size(); ++i) f.degrees.push_back(int_of(deg[i], "space.degrees[" + std::to_string(i) + "]"));
  if (f.degrees.size() != f.labels.size()) bad("space", "labels and degrees differ in length");

  if (doc.contains("brackets")) {
    const auto& br = doc["brackets"];
    only_keys(br, {"convention", "entries"}, "brackets");
    f.convention = str_of(field(br, "convention", "brackets"), "brackets.convention");
    if (f.convention != "lie" && f.convention != "shifted")
      bad("brackets.convention", "expected \"lie\" or \"shifted\", got \"" + f.convention + "\"");
    const auto& es = field(br, "entries", "brackets");
    if (!es.is_array()) bad("brackets.entries", "expected an array");
    for (size_t i = 0; i < es.size(); ++i) {
      auto w = "brackets.entries[" + std::to_string(i) + "]";
      only_keys(es[i], {"inputs", "output"}, w);
      f.brackets.push_back({strings_of(field(es[i], "inputs", w), w + ".inputs"),
                            labelled_of(field(es[i], "output", w), w + ".output")});
    }
  }

  if (doc.contains("pairing")) {
    const auto& p = doc["pairing"];
    only_keys(p, {"shift", "entries"}, "pairing");
    TheoryFile::Pairing pr;
    pr.shift = int_of(field(p, "shift", "pairing"), "pairing.shift");
    const auto& es = field(p, "entries", "pairing");
    if (!es.is_array()) bad("pairing.entries", "expected an array");
    for (size_t i = 0; i < es.size(); ++i) {
      auto w = "pairing.entries[" + std::to_string(i) + "]";
      if (!es[i].is_array() || es[i].size() != 3) bad(w, "expected [label, label, coefficient]");
      pr.entries.emplace_back(str_of(es[i][0], w), str_of(es[i][1], w), rat_of(es[i][2], w));
    }
    f.pairing = pr;
  }

  if (doc.contains("tensor")) {
    const auto& t = doc["tensor"];
    only_keys(t, {"model", "twist"}, "tensor");
    TheoryFile::Tensor tn;
    tn.model = str_of(field(t, "model", "tensor"), "tensor.model");
    if (t.contains("twist")) tn.twist = labelled_of(t["twist"], "tensor.twist");
    f.tensor = tn;
  }

  if (doc.contains("splitting")) {
    const auto& s = doc["splitting"];
    only_keys(s, {"plus", "minus"}, "splitting");
    f.splitting = TheoryFile::Splitting{strings_of(field(s, "plus", "splitting"), "splitting.plus"),
                                        strings_of(field(s, "minus", "splitting"), "splitting.minus")};
  }

  if (doc.contains("poisson")) {
    const auto& p = doc["poisson"];
    only_keys(p, {"shift", "terms"}, "poisson");
    TheoryFile::Poisson po;
    po.shift = int_of(field(p, "shift", "poisson"), "poisson.shift");
    const auto& ts = field(p, "terms", "poisson");
    if (!ts.is_array()) bad("poisson.terms", "expected an array");
    for (size_t i = 0; i < ts.size(); ++i) {
      auto w = "poisson.terms[" + std::to_string(i) + "]";
      only_keys(ts[i], {"monomial", "coefficient"}, w);
      po.terms.push_back({strings_of(field(ts[i], "monomial", w), w + ".monomial"),
                          rat_of(field(ts[i], "coefficient", w), w + ".coefficient")});
    }
    f.poisson = po;
  }
  return f;
}

std::string serialize_theory(const TheoryFile& f) {
  ojson doc;
  doc["schema"] = 1;
  doc["name"] = f.name;
  if (f.description) doc["description"] = *f.description;
  doc["space"] = {{"labels", f.labels}, {"degrees", f.degrees}};
  ojson entries = ojson::array();
  for (auto& b : f.brackets) entries.push_back({{"inputs", b.inputs}, {"output", labelled_json(b.output)}});
  doc["brackets"] = {{"convention", f.convention}, {"entries", entries}};
  if (f.pairing) {
    ojson es = ojson::array();
    for (auto& [a, b, c] : f.pairing->entries) es.push_back(ojson::array({a, b, c.str()}));
    doc["pairing"] = {{"shift", f.pairing->shift}, {"entries", es}};
  }
  if (f.tensor) {
    doc["tensor"] = {{"model", f.tensor->model}};
    if (!f.tensor->twist.empty()) doc["tensor"]["twist"] = labelled_json(f.tensor->twist);
  }
  if (f.splitting) doc["splitting"] = {{"plus", f.splitting->plus}, {"minus", f.splitting->minus}};
  if (f.poisson) {
    ojson ts = ojson::array();
    for (auto& t : f.poisson->terms) ts.push_back({{"monomial", t.monomial}, {"coefficient", t.coefficient.str()}});
    doc["poisson"] = {{"shift", f.poisson->shift}, {"terms", ts}};
  }
  return doc.dump(2) + "\n";
}

Theory resolve_theory(const TheoryFile& f) {
  Theory t;
  t.file = f;
  auto space = make_space(f.labels, f.degrees);
  LInftyStructure factor(space);
  for (size_t i = 0; i < f.brackets.size(); ++i) {
    auto w = "brackets.entries[" + std::to_string(i) + "]";
    const auto& b = f.brackets[i];
    if (b.inputs.empty()) bad(w, "a bracket needs at least one input");
    std::vector<Index> in;
    for (auto& l : b.inputs) in.push_back(resolve_label(*space, l, w));
    for (auto& [l, c] : b.output) {
      Index o = resolve_label(*space, l, w);
      try {
        if (f.convention == "lie")
          factor.add_lie(in, o, c);
        else
          factor.add_shifted(in, o, c);
      } catch (const InputError& e) {
        bad(w, e.what());
      }
    }
  }

  std::optional<ShiftedSymplecticStructure> eta;
  if (f.pairing) {
    std::vector<std::tuple<Index, Index, Rational>> es;
    for (auto& [a, b, c] : f.pairing->entries)
      es.emplace_back(resolve_label(*space, a, "pairing"), resolve_label(*space, b, "pairing"), c);
    eta = symmetric_pairing(space, f.pairing->shift, es);
  }

  if (f.tensor) {
    auto model = model_by_name(f.tensor->model);
    t.tensor = present_tensor(model, factor);
    t.algebra = t.tensor->total;
    if (eta) t.omega = aksz_symplectic(model, *eta);
    if (!f.tensor->twist.empty()) {
      SparseVec beta;
      const auto& sp = *t.algebra.space();
      for (auto& [l, c] : f.tensor->twist) sparse_axpy(beta, c, {{resolve_label(sp, l, "tensor.twist"), Rational(1)}});
      try {
        t.algebra = twist(t.algebra, beta);
      } catch (const InputError& e) {
        bad("tensor.twist", e.what());
      } catch (const StructuralError& e) {
        bad("tensor.twist", e.what());
      }
    }
  } else {
    t.algebra = factor;
    t.omega = eta;
  }

  if (f.splitting) {
    if (!t.omega) bad("splitting", "a splitting needs a pairing");
    const auto& sp = *t.algebra.space();
    for (auto* side : {&f.splitting->plus, &f.splitting->minus})
      for (auto& l : *side) resolve_label(sp, l, "splitting");
    t.splitting = split_by_labels(t.algebra, *t.omega, f.splitting->plus, f.splitting->minus);
  }

  if (f.poisson) {
    auto frame = make_frame(t.algebra.space(), f.poisson->shift);
    const auto& vars = frame->vars();
    std::map<size_t, Polynomial> comps;
    for (size_t i = 0; i < f.poisson->terms.size(); ++i) {
      auto w = "poisson.terms[" + std::to_string(i) + "]";
      const auto& term = f.poisson->terms[i];
      auto p = Polynomial::constant(vars, term.coefficient);
      for (auto& name : term.monomial) {
        auto v = vars->find(name);
        if (!v) bad(w, "unknown coordinate '" + name + "'");
        p = p * Polynomial::variable(vars, *v);
      }
      for (auto& [m, c] : p.terms()) {
        size_t j = frame->fibre_degree(m);
        auto it = comps.try_emplace(j, vars).first;
        it->second.add_term(m, c);
      }
    }
    for (auto it = comps.begin(); it != comps.end();) it = it->second.is_zero() ? comps.erase(it) : std::next(it);
    try {
      t.poisson = HomotopyPoissonStructure(frame, comps);
    } catch (const InputError& e) {
      bad("poisson", e.what());
    }
  }
  return t;
}

void describe_structure(TheoryFile& f, const LInftyStructure& g) {
  const auto& sp = *g.space();
  f.labels = sp.labels();
  f.degrees = sp.degrees();
  f.convention = "lie";
  f.brackets.clear();
  for (auto& [n, m] : g.brackets())
    for (auto& [key, out] : m.entries()) {
      auto v = g.lie_value(key);
      if (v.empty()) continue;
      TheoryFile::Bracket b;
      for (Index i : key) b.inputs.push_back(sp.label(i));
      for (auto& [o, c] : v) b.output.emplace_back(sp.label(o), c);
      f.brackets.push_back(std::move(b));
    }
}

TheoryFile::Pairing describe_pairing(const ShiftedSymplecticStructure& omega) {
  TheoryFile::Pairing p;
  p.shift = omega.shift();
  const auto& sp = *omega.space();
  for (auto& [ij, c] : omega.entries())
    if (ij.first <= ij.second && !c.is_zero()) p.entries.emplace_back(sp.label(ij.first), sp.label(ij.second), c);
  return p;
}

std::vector<TheoryFile::PoissonTerm> describe_function(const Polynomial& F) {
  std::vector<TheoryFile::PoissonTerm> out;
  const auto& vars = *F.vars();
  for (auto& [m, c] : F.sorted_terms()) {
    TheoryFile::PoissonTerm t;
    for (Index v : m) t.monomial.push_back(vars[v].name);
    t.coefficient = c;
    out.push_back(std::move(t));
  }
  return out;
}

TheoryFile::Poisson describe_poisson(const HomotopyPoissonStructure& pi) {
  TheoryFile::Poisson p;
  p.shift = pi.shift();
  for (auto& [j, F] : pi.components) {
    auto ts = describe_function(F);
    p.terms.insert(p.terms.end(), ts.begin(), ts.end());
  }
  return p;
}

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names = {"topological-mechanics", "poisson-sigma", "chern-simons",
                                                 "wzw", "toda", "kw-b-twist"};
  return names;
}

namespace {

TheoryFile sl2_file(const std::string& name, const std::string& description) {
  TheoryFile f;
  f.name = name;
  f.description = description;
  auto g = sl2_algebra();
  describe_structure(f, g);
  f.pairing = describe_pairing(sl2_trace(g.space(), 2));
  return f;
}

TheoryFile::Splitting splitting_of(const LagrangianSplitting& s) { return {s.plus_labels, s.minus_labels}; }

}  // namespace

TheoryFile example_theory(const std::string& name) {
  if (name == "topological-mechanics") {
    // T*[0] B sl2 = sl2 (+) sl2*[-2]; boundary condition the zero section.
    auto g = sl2_algebra();
    auto Z = twisted_cotangent(g, HomotopyPoissonStructure(make_frame(g.space(), 0), {}), 0);
    TheoryFile f;
    f.name = name;
    f.description = "topological mechanics with target T*[0]B sl2, boundary condition B sl2";
    describe_structure(f, Z.structure);
    f.pairing = describe_pairing(Z.omega());
    f.splitting = TheoryFile::Splitting{{"e", "h", "f"}, {"e*", "h*", "f*"}};
    return f;
  }
  if (name == "poisson-sigma") {
    // the Lie-Poisson structure of sl2 on sl2*, coordinates u, v, w dual to e, h, f
    TheoryFile f;
    f.name = name;
    f.description = "topological Poisson mechanics on sl2* with its Lie-Poisson bivector";
    f.labels = {"u", "v", "w"};
    f.degrees = {1, 1, 1};
    auto g = sl2_algebra();
    TheoryFile::Poisson p;
    p.shift = 1;
    for (Index i = 0; i < 3; ++i)
      for (Index j = i + 1; j < 3; ++j)
        for (auto& [k, c] : g.lie_value({i, j}))
          p.terms.push_back({{f.labels[k], f.labels[i] + "*", f.labels[j] + "*"}, c});
    f.poisson = p;
    return f;
  }
  if (name == "chern-simons") {
    auto f = sl2_file(name, "Chern-Simons phase space on a torus, boundary condition forms without b");
    f.tensor = TheoryFile::Tensor{"torus", {}};
    TheoryFile::Splitting s;
    for (auto* form : {"1", "a", "b", "ab"})
      for (auto* x : {"e", "h", "f"})
        (std::string(form) == "1" || std::string(form) == "a" ? s.plus : s.minus)
            .push_back(std::string(form) + "|" + x);
    f.splitting = s;
    return f;
  }
  if (name == "wzw") {
    auto f = sl2_file(name, "holomorphic Chern-Simons on laurent(2) (x) sl2, boundary condition forms with dz");
    f.tensor = TheoryFile::Tensor{"laurent(2)", {}};
    f.splitting = splitting_of(wzw_splitting(2));
    return f;
  }
  if (name == "toda") {
    auto f = sl2_file(name, "holomorphic Chern-Simons twisted by dz (x) f, Borel boundary condition");
    f.tensor = TheoryFile::Tensor{"laurent(2)", {{"z0_w0_dz|f", Rational(-1)}}};
    f.splitting = splitting_of(toda_splitting(2));
    return f;
  }
  if (name == "kw-b-twist") {
    auto f = sl2_file(name, "sl2 with its trace and the zero 2-shifted Poisson structure on B sl2");
    f.poisson = TheoryFile::Poisson{3, {}};
    return f;
  }
  throw InputError("unknown example '" + name + "'");
}

}  // namespace bvkit
