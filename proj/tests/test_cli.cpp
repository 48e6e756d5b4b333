#include "doctest.h"

#include "bvkit/commands.hpp"
#include "bvkit/errors.hpp"
#include "bvkit/examples.hpp"

using namespace bvkit;

namespace {

std::string error_of(const std::string& text) {
  try {
    resolve_theory(parse_theory(text));
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

Report run(const std::string& cmd, const std::string& text, unsigned threads = 1) {
  CommandOptions opt;
  opt.threads = threads;
  return run_command(cmd, text, opt);
}

const char* kAbelian = R"({
  "schema": 1,
  "name": "abelian",
  "space": {"labels": ["q", "p"], "degrees": [1, 1]},
  "pairing": {"shift": 0, "entries": [["q", "p", "1"]]},
  "splitting": {"plus": ["q"], "minus": ["p"]}
})";

}  // namespace

TEST_CASE("builtin theory files round trip through parse and serialize") {
  for (auto& name : example_names()) {
    CAPTURE(name);
    auto f = example_theory(name);
    auto text = serialize_theory(f);
    CHECK(serialize_theory(parse_theory(text)) == text);
    auto t = resolve_theory(parse_theory(text));
    CHECK(t.algebra.dim() > 0);
  }
  CHECK_THROWS_AS(example_theory("yang-mills"), InputError);
}

TEST_CASE("builtin files describe the library examples") {
  auto wzw = resolve_theory(example_theory("wzw"));
  auto ref = wzw_splitting(2);
  CHECK(wzw.algebra == ref.ambient);
  CHECK(wzw.omega->entries() == ref.omega.entries());
  CHECK(wzw.splitting->plus_labels == ref.plus_labels);

  auto toda = resolve_theory(example_theory("toda"));
  CHECK(toda.algebra == toda_splitting(2).ambient);

  auto tm = resolve_theory(example_theory("topological-mechanics"));
  CHECK(tm.algebra.dim() == 6);
  CHECK(tm.omega->shift() == 0);

  auto ps = resolve_theory(example_theory("poisson-sigma"));
  REQUIRE(ps.poisson);
  CHECK(ps.poisson->components.at(2).size() == 3);
  CHECK(check_homotopy_poisson(ps.algebra, *ps.poisson).passed());
}

TEST_CASE("theory file errors name the place") {
  CHECK(error_of("{\n  \"schema\": 1,\n  \"name\": x\n}").rfind("line 3, column", 0) == 0);
  CHECK(error_of(R"({"schema": 2, "name": "a", "space": {"labels": [], "degrees": []}})").find("schema 1") !=
        std::string::npos);
  CHECK(error_of(R"({"schema": 1, "name": "a", "space": {"labels": ["x"], "degrees": [0]}, "extra": 1})")
            .find("unknown field 'extra'") != std::string::npos);
  CHECK(error_of(R"({"schema": 1, "name": "a", "space": {"labels": ["x"], "degrees": [0, 1]}})").find("differ") !=
        std::string::npos);
  CHECK(error_of(R"({"schema": 1, "name": "a", "space": {"labels": ["x"], "degrees": [0]},
      "brackets": {"convention": "lie", "entries": [{"inputs": ["x", "y"], "output": [["x", "1"]]}]}})")
            .find("unknown label 'y'") != std::string::npos);
  CHECK(error_of(R"({"schema": 1, "name": "a", "space": {"labels": ["x"], "degrees": [0]},
      "brackets": {"convention": "lie", "entries": [{"inputs": ["x", "x"], "output": [["x", 0.5]]}]}})")
            .find("\"p/q\"") != std::string::npos);
  // [x, x] lands in degree 0, not 1
  CHECK(error_of(R"({"schema": 1, "name": "a", "space": {"labels": ["x", "y"], "degrees": [0, 1]},
      "brackets": {"convention": "lie", "entries": [{"inputs": ["x", "x"], "output": [["y", "1"]]}]}})")
            .find("brackets.entries[0]") != std::string::npos);
  CHECK(error_of(R"({"schema": 1, "name": "a", "space": {"labels": ["x"], "degrees": [0]},
      "splitting": {"plus": ["x"], "minus": []}})")
            .find("needs a pairing") != std::string::npos);
  CHECK(error_of(R"({"schema": 1, "name": "a", "space": {"labels": ["x"], "degrees": [0]},
      "poisson": {"shift": 2, "terms": [{"monomial": ["x", "z*"], "coefficient": "1"}]}})")
            .find("unknown coordinate 'z*'") != std::string::npos);
  CHECK(error_of(R"({"schema": 1, "name": "a", "space": {"labels": ["x"], "degrees": [0]},
      "tensor": {"model": "sphere"}})")
            .find("unknown model") != std::string::npos);
}

TEST_CASE("check reports failures with witnesses and exit status") {
  auto text = std::string(R"({"schema": 1, "name": "broken", "space": {"labels": ["e", "h", "f"], "degrees": [0, 0, 0]},
      "brackets": {"convention": "lie", "entries": [
        {"inputs": ["h", "e"], "output": [["e", "3"]]},
        {"inputs": ["h", "f"], "output": [["f", "-2"]]},
        {"inputs": ["e", "f"], "output": [["h", "1"]]}]}})");
  auto r = run("check", text);
  CHECK_FALSE(r.passed);
  const auto& c = r.doc["checks"][0];
  CHECK(c["name"] == "relations");
  CHECK_FALSE(c["passed"].get<bool>());
  CHECK(c["witnesses"].size() > 0);
  CHECK(r.table().find("FAIL  relations") != std::string::npos);

  auto ok = run("check", serialize_theory(example_theory("chern-simons")));
  CHECK(ok.passed);
  CHECK(ok.doc["outputs"]["shift"] == 0);
  CHECK_THROWS_AS(run("centre", serialize_theory(example_theory("chern-simons"))), InputError);
  CHECK_THROWS_AS(run("relax", kAbelian), InputError);
}

TEST_CASE("boundary command on the builtin corpus") {
  SUBCASE("abelian polarisation gives Pi = 0") {
    auto r = run("boundary", kAbelian);
    CHECK(r.passed);
    CHECK(r.doc["outputs"]["boundary"]["pi"]["components"].empty());
    CHECK(r.doc["outputs"]["boundary"]["poisson_shift"] == -1);
  }
  SUBCASE("zero-dimensional theory with the empty splitting") {
    auto r = run("boundary", R"({"schema": 1, "name": "empty", "space": {"labels": [], "degrees": []},
        "pairing": {"shift": 0, "entries": []}, "splitting": {"plus": [], "minus": []}})");
    CHECK(r.passed);
    CHECK(r.doc["outputs"]["boundary"]["pi"]["components"].empty());
  }
  SUBCASE("wzw") {
    auto r = run("boundary", serialize_theory(example_theory("wzw")), 4);
    CHECK(r.passed);
    const auto& b = r.doc["outputs"]["boundary"];
    CHECK(b["strict"].get<bool>());
    CHECK(b["higher_components_vanish"].get<bool>());
    CHECK(b["pi"]["components"].size() == 1);
    CHECK(b["space"]["labels"].size() == 96);
    CHECK(r.doc["outputs"]["complement_source"] == "user");
  }
  SUBCASE("toda") {
    auto r = run("boundary", serialize_theory(example_theory("toda")), 4);
    CHECK(r.passed);
    CHECK(r.doc["outputs"]["boundary"]["strict"].get<bool>());
  }
  SUBCASE("a splitting that is not closed stops before the decomposition") {
    auto f = example_theory("topological-mechanics");
    f.splitting = TheoryFile::Splitting{{"e", "f", "h*"}, {"e*", "f*", "h"}};
    auto r = run("boundary", serialize_theory(f));
    CHECK_FALSE(r.passed);
    for (auto& c : r.doc["checks"]) CHECK(c["name"].get<std::string>().rfind("splitting.", 0) == 0);
  }
}

TEST_CASE("centre, bulk and roundtrip commands") {
  auto ps = serialize_theory(example_theory("poisson-sigma"));
  auto c = run("centre", ps);
  CHECK(c.passed);
  auto cot = c.doc["outputs"]["cotangent"].dump();
  // the emitted cotangent is itself a theory file that checks
  CHECK(run("check", cot).passed);

  auto b = run("bulk", ps);
  CHECK(b.passed);
  CHECK(b.doc["outputs"]["bulk"]["pairing"]["shift"] == 0);
  CHECK(run("check", b.doc["outputs"]["bulk"].dump()).passed);

  auto rt = run("roundtrip", ps);
  CHECK(rt.passed);
  CHECK(rt.doc["outputs"]["poisson_source"] == "file");

  auto kw = run("roundtrip", serialize_theory(example_theory("kw-b-twist")));
  CHECK(kw.passed);
  for (auto& [d, n] : kw.doc["outputs"]["cohomology"].items()) CHECK(n == 0);

  // a bivector that is not Poisson fails the first check
  auto bad = example_theory("poisson-sigma");
  bad.poisson->terms.pop_back();
  auto r = run("centre", serialize_theory(bad));
  CHECK_FALSE(r.passed);
  CHECK(r.doc["checks"][0]["witnesses"].size() > 0);
  CHECK_FALSE(run("roundtrip", serialize_theory(bad)).passed);
}

TEST_CASE("reports are deterministic across runs and thread counts") {
  for (auto& name : {"toda", "kw-b-twist"}) {
    auto text = serialize_theory(example_theory(name));
    auto a = run("check", text, 1), b = run("check", text, 4);
    CHECK(a.deterministic() == b.deterministic());
    CHECK(a.doc["input_digest"] == input_digest(text));
  }
  CHECK(input_digest("") == "cbf29ce484222325");
}
