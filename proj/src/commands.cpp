#include "bvkit/commands.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>

#include "bvkit/errors.hpp"

namespace bvkit {

namespace {

using ojson = nlohmann::ordered_json;
using Checks = std::vector<CheckResult>;

CheckResult named(CheckResult r, const std::string& name) {
  r.name = name;
  return r;
}

CheckResult failure(const std::string& name, const std::string& note) {
  CheckResult r;
  r.name = name;
  r.fail({{}, "", Rational(0), note});
  return r;
}

CheckResult success(const std::string& name) {
  CheckResult r;
  r.name = name;
  return r;
}

// Runs the jobs on at most `threads` workers; results keep the job order.
Checks run_jobs(const std::vector<std::function<Checks()>>& jobs, unsigned threads) {
  std::vector<Checks> out(jobs.size());
  std::vector<std::exception_ptr> err(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < jobs.size();) {
      try {
        out[i] = jobs[i]();
      } catch (...) {
        err[i] = std::current_exception();
      }
    }
  };
  size_t n = std::min<size_t>(std::max(threads, 1u), jobs.size());
  std::vector<std::thread> pool;
  for (size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  Checks all;
  for (auto& c : out) all.insert(all.end(), c.begin(), c.end());
  return all;
}

ojson check_json(const CheckResult& r) {
  ojson c;
  c["name"] = r.name;
  c["passed"] = r.passed;
  c["violations"] = r.violations;
  if (r.window_bounded) c["window_bounded"] = r.window_bounded;
  if (!r.bounds.empty()) {
    ojson b = ojson::object();
    for (auto& [k, v] : r.bounds) b[k] = v;
    c["bounds"] = b;
  }
  if (!r.witnesses.empty()) {
    ojson ws = ojson::array();
    for (auto& w : r.witnesses) {
      ojson j;
      j["inputs"] = w.inputs;
      j["output"] = w.output;
      j["value"] = w.value.str();
      if (!w.note.empty()) j["note"] = w.note;
      ws.push_back(j);
    }
    c["witnesses"] = ws;
  }
  return c;
}

ojson theory_json(const TheoryFile& f) { return ojson::parse(serialize_theory(f)); }

ojson brackets_json(const LInftyStructure& g) {
  TheoryFile f;
  describe_structure(f, g);
  return theory_json(f)["brackets"];
}

ojson poisson_json(const HomotopyPoissonStructure& pi) {
  ojson comps = ojson::object();
  for (auto& [j, F] : pi.components) {
    ojson ts = ojson::array();
    for (auto& t : describe_function(F)) ts.push_back({{"monomial", t.monomial}, {"coefficient", t.coefficient.str()}});
    comps[std::to_string(j)] = ts;
  }
  return {{"shift", pi.shift()}, {"components", comps}};
}

TheoryFile explicit_theory(const std::string& name, const LInftyStructure& g, const ShiftedSymplecticStructure& w) {
  TheoryFile f;
  f.name = name;
  describe_structure(f, g);
  f.pairing = describe_pairing(w);
  return f;
}

void add_symplectic(Checks& out, const std::string& prefix, const LInftyStructure& g,
                    const ShiftedSymplecticStructure& w, size_t max_arity) {
  auto rep = check_symplectic(g, w, max_arity);
  out.push_back(named(rep.symmetry, prefix + "symmetry"));
  out.push_back(named(rep.nondegeneracy, prefix + "nondegeneracy"));
  out.push_back(named(rep.invariance, prefix + "invariance"));
}

struct Context {
  const Theory& theory;
  const CommandOptions& opt;
  Checks checks;
  ojson outputs = ojson::object();
};

const HomotopyPoissonStructure& need_poisson(const Theory& t, const std::string& cmd) {
  if (!t.poisson) throw InputError(cmd + " needs a poisson section");
  return *t.poisson;
}

void cmd_check(Context& c) {
  const auto& t = c.theory;
  size_t k = c.opt.max_arity;
  std::vector<std::function<Checks()>> jobs;
  jobs.push_back([&] { return Checks{named(check_relations(t.algebra, k), "relations")}; });
  if (t.tensor)
    jobs.push_back([&] {
      auto rep = check_model(t.tensor->model);
      return Checks{named(rep.axioms, "model.axioms"), named(rep.unit, "model.unit"),
                    named(rep.stokes, "model.stokes"), named(rep.poincare, "model.poincare"),
                    named(rep.bigrading, "model.bigrading")};
    });
  if (t.omega) {
    jobs.push_back([&] {
      Checks out;
      add_symplectic(out, "symplectic.", t.algebra, *t.omega, k);
      return out;
    });
    jobs.push_back([&] {
      if (!t.omega->invertible()) return Checks{failure("cme", "pairing is degenerate")};
      return Checks{named(check_cme(action_from_brackets(t.algebra, *t.omega), *t.omega), "cme")};
    });
  }
  if (t.poisson)
    jobs.push_back([&] { return Checks{named(check_homotopy_poisson(t.algebra, *t.poisson).result, "homotopy_poisson")}; });
  if (t.splitting)
    jobs.push_back([&] {
      auto rep = check_splitting(*t.splitting, k);
      return Checks{named(rep.complement, "splitting.complement"), named(rep.isotropy, "splitting.isotropy"),
                    named(rep.closure, "splitting.closure"), named(rep.identification, "splitting.identification")};
    });
  c.checks = run_jobs(jobs, c.opt.threads);
  c.outputs["dimension"] = t.algebra.dim();
  c.outputs["max_bracket_arity"] = t.algebra.max_arity();
  if (t.omega) c.outputs["shift"] = t.omega->shift();
}

void cmd_boundary(Context& c) {
  const auto& t = c.theory;
  if (!t.splitting) throw InputError("boundary needs a splitting section");
  auto rep = check_splitting(*t.splitting, c.opt.max_arity);
  c.checks = {named(rep.complement, "splitting.complement"), named(rep.isotropy, "splitting.isotropy"),
              named(rep.closure, "splitting.closure"), named(rep.identification, "splitting.identification")};
  c.outputs["complement_source"] = t.splitting->complement_source;
  if (!rep.passed()) return;
  std::optional<BoundaryTheory> bt;
  try {
    bt = boundary_theory(*t.splitting, c.opt.max_polyvector);
  } catch (const StructuralError& e) {
    c.checks.push_back(failure("decomposition", e.what()));
    return;
  }
  c.checks.push_back(success("decomposition"));
  c.checks.push_back(named(bt->check.result, "homotopy_poisson"));
  const auto& sp = *bt->structure.space();
  ojson b;
  b["frame_shift"] = bt->pi.shift();
  b["poisson_shift"] = bt->pi.shift() - 1;
  b["space"] = {{"labels", sp.labels()}, {"degrees", sp.degrees()}};
  b["brackets"] = brackets_json(bt->structure);
  b["pi"] = poisson_json(bt->pi);
  b["strict"] = bt->pi.strict();
  b["higher_components_vanish"] = bt->decomposition.higher_vanish;
  c.outputs["boundary"] = b;
}

void cmd_centre(Context& c) {
  const auto& t = c.theory;
  const auto& pi = need_poisson(t, "centre");
  auto hp = check_homotopy_poisson(t.algebra, pi);
  c.checks.push_back(named(hp.result, "homotopy_poisson"));
  if (!hp.passed()) return;
  auto Z = twisted_cotangent(t.algebra, pi, pi.shift());
  std::vector<std::function<Checks()>> jobs;
  jobs.push_back([&] { return Checks{named(check_relations(Z.structure, c.opt.max_arity), "cotangent.relations")}; });
  jobs.push_back([&] {
    Checks out;
    add_symplectic(out, "cotangent.", Z.structure, Z.omega(), c.opt.max_arity);
    return out;
  });
  auto more = run_jobs(jobs, c.opt.threads);
  c.checks.insert(c.checks.end(), more.begin(), more.end());
  c.outputs["cotangent"] = theory_json(explicit_theory(t.file.name + "-centre", Z.structure, Z.omega()));
}

void cmd_bulk(Context& c) {
  const auto& t = c.theory;
  const auto& pi = need_poisson(t, "bulk");
  auto hp = check_homotopy_poisson(t.algebra, pi);
  c.checks.push_back(named(hp.result, "homotopy_poisson"));
  if (!hp.passed()) return;
  auto ub = universal_bulk(t.algebra, pi, pi.shift());
  std::vector<std::function<Checks()>> jobs;
  jobs.push_back([&] { return Checks{named(check_relations(ub.bulk.total, c.opt.max_arity), "bulk.relations")}; });
  jobs.push_back([&] {
    Checks out;
    add_symplectic(out, "bulk.", ub.bulk.total, ub.omega, c.opt.max_arity);
    return out;
  });
  auto more = run_jobs(jobs, c.opt.threads);
  c.checks.insert(c.checks.end(), more.begin(), more.end());
  c.outputs["model"] = ub.bulk.model.name;
  c.outputs["bulk"] = theory_json(explicit_theory(t.file.name + "-bulk", ub.bulk.total, ub.omega));
}

void cmd_roundtrip(Context& c) {
  const auto& t = c.theory;
  if (!t.poisson && !t.omega) throw InputError("roundtrip needs a poisson or a pairing section");
  std::optional<HomotopyPoissonStructure> pi = t.poisson;
  if (!pi) {
    if (!t.omega->invertible()) throw InputError("roundtrip: the pairing is degenerate");
    pi = poisson_bivector(*t.omega);
    c.outputs["poisson_source"] = "pairing";
  } else {
    c.outputs["poisson_source"] = "file";
  }
  std::vector<std::function<Checks()>> jobs;
  jobs.push_back([&] {
    try {
      auto rep = roundtrip_check(t.algebra, *pi, pi->shift());
      return Checks{named(rep.phase_space, "roundtrip.phase_space"), named(rep.structure, "roundtrip.structure"),
                    named(rep.poisson, "roundtrip.poisson")};
    } catch (const StructuralError& e) {
      return Checks{failure("roundtrip", e.what())};
    }
  });
  std::optional<TrivialityReport> triv;
  if (t.omega)
    jobs.push_back([&] {
      triv = triviality_check(t.algebra, *t.omega);
      return Checks{named(triv->acyclic, "triviality.acyclic")};
    });
  c.checks = run_jobs(jobs, c.opt.threads);
  if (triv) {
    ojson h = ojson::object();
    for (auto& [d, n] : triv->cohomology) h[std::to_string(d)] = n;
    c.outputs["cohomology"] = h;
  }
}

std::string fmt_witness(const Witness& w) {
  std::string s;
  for (size_t i = 0; i < w.inputs.size(); ++i) s += (i ? ", " : "") + w.inputs[i];
  if (!w.output.empty()) s += " -> " + w.output;
  if (!w.value.is_zero()) s += " : " + w.value.str();
  if (!w.note.empty()) s += (s.empty() ? "" : "  ") + w.note;
  return s;
}

std::string summary(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_primitive()) return v.dump();
  if (v.is_array()) return std::to_string(v.size()) + " items";
  if (v.contains("name") && v.contains("space"))
    return "theory " + v["name"].get<std::string>() + ", dimension " + std::to_string(v["space"]["labels"].size());
  std::string s;
  for (auto& [k, x] : v.items()) s += (s.empty() ? "" : ", ") + k + "=" + summary(x);
  return "{" + s + "}";
}

}  // namespace

std::string Report::json() const { return doc.dump(2) + "\n"; }

std::string Report::deterministic() const {
  auto d = doc;
  d.erase("timing_ms");
  return d.dump(2) + "\n";
}

std::string Report::table() const {
  std::ostringstream os;
  os << "command  " << doc["command"].get<std::string>() << "\n";
  os << "theory   " << doc["theory"].get<std::string>() << "\n";
  os << "digest   " << doc["input_digest"].get<std::string>() << "\n";
  os << "bounds  ";
  for (auto& [k, v] : doc["bounds"].items()) os << " " << k << "=" << v.dump();
  os << "\n\n";
  for (auto& c : doc["checks"]) {
    os << (c["passed"].get<bool>() ? "PASS  " : "FAIL  ") << c["name"].get<std::string>();
    if (c["violations"].get<size_t>()) os << "  (" << c["violations"].get<size_t>() << " violations)";
    if (c.contains("window_bounded")) os << "  [" << c["window_bounded"].get<size_t>() << " window bounded]";
    os << "\n";
    if (c.contains("witnesses"))
      for (auto& w : c["witnesses"]) {
        Witness x;
        x.inputs = w["inputs"].get<std::vector<std::string>>();
        x.output = w["output"].get<std::string>();
        x.value = Rational::parse(w["value"].get<std::string>());
        if (w.contains("note")) x.note = w["note"].get<std::string>();
        os << "      " << fmt_witness(x) << "\n";
      }
  }
  os << "\n";
  const auto& out = doc["outputs"];
  if (out.contains("boundary") && out["boundary"].contains("pi")) {
    const auto& b = out["boundary"];
    os << "boundary on " << b["space"]["labels"].size() << " generators, " << b["poisson_shift"].dump()
       << "-shifted homotopy Poisson"
       << (b["strict"].get<bool>() ? ", strict" : "") << "\n";
    for (auto& [j, terms] : b["pi"]["components"].items()) {
      os << "  Pi_" << j << " (" << terms.size() << " terms)\n";
      size_t shown = 0;
      for (auto& t : terms) {
        if (++shown > 24) {
          os << "    ... " << terms.size() - 24 << " more in the JSON report\n";
          break;
        }
        os << "    " << t["coefficient"].get<std::string>();
        for (auto& m : t["monomial"]) os << " " << m.get<std::string>();
        os << "\n";
      }
    }
  }
  for (auto& [k, v] : out.items())
    if (k != "boundary") os << k << "  " << summary(v) << "\n";
  os << (passed ? "all checks passed" : "some checks failed") << "\n";
  return os.str();
}

std::string input_digest(const std::string& text) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

unsigned threads_from_environment() {
  const char* v = std::getenv("BVKIT_THREADS");
  if (!v || !*v) return std::max(1u, std::thread::hardware_concurrency());
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end || n < 1 || n > 1024) throw InputError("BVKIT_THREADS must be a positive integer, got '" + std::string(v) + "'");
  return static_cast<unsigned>(n);
}

Report run_command(const std::string& command, const std::string& input, const CommandOptions& opt) {
  static const std::map<std::string, void (*)(Context&)> table = {
      {"check", cmd_check}, {"boundary", cmd_boundary}, {"centre", cmd_centre},
      {"bulk", cmd_bulk},   {"roundtrip", cmd_roundtrip}};
  auto it = table.find(command);
  if (it == table.end()) throw InputError("unknown command '" + command + "'");
  if (opt.max_arity < 1) throw InputError("--max-arity must be at least 1");
  if (opt.max_polyvector < 2) throw InputError("--max-polyvector must be at least 2");

  auto start = std::chrono::steady_clock::now();
  auto theory = resolve_theory(parse_theory(input));
  Context c{theory, opt, {}, ojson::object()};
  it->second(c);

  Report r;
  r.doc["command"] = command;
  r.doc["theory"] = theory.file.name;
  r.doc["input_digest"] = input_digest(input);
  r.doc["bounds"] = {{"max_arity", opt.max_arity}, {"max_polyvector", opt.max_polyvector}};
  ojson checks = ojson::array();
  for (auto& ch : c.checks) {
    checks.push_back(check_json(ch));
    r.passed = r.passed && ch.passed;
  }
  r.doc["checks"] = checks;
  r.doc["passed"] = r.passed;
  r.doc["outputs"] = c.outputs;
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  r.doc["timing_ms"] = ms.count();
  return r;
}

}  // namespace bvkit
