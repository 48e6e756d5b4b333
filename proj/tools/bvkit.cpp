#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "bvkit/commands.hpp"
#include "bvkit/errors.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bvkit::InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bvkit::InputError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bvkit: L-infinity algebras, shifted symplectic and homotopy Poisson structures, boundary theories"};
  app.require_subcommand(1);

  std::string input, output;
  size_t max_arity = 4, max_poly = 4;
  bool as_json = false, as_table = false;

  const std::pair<const char*, const char*> commands[] = {
      {"check", "relations, model, pairing, CME and Poisson checks of a theory file"},
      {"boundary", "boundary theory (l+, Pi) of the file's splitting"},
      {"centre", "higher Poisson centre T*_Pi[n]L of the file's Poisson structure"},
      {"bulk", "universal bulk theory of the file's Poisson structure"},
      {"roundtrip", "boundary of the universal bulk against the input; triviality when a pairing is given"}};
  for (auto [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--input", input, "theory file (default: standard input)");
    sub->add_option("--output", output, "report path (default: standard output)");
    sub->add_option("--max-arity", max_arity, "relation check arity bound")->capture_default_str();
    sub->add_option("--max-polyvector", max_poly, "polyvector arity bound")->capture_default_str();
    auto* j = sub->add_flag("--json", as_json, "JSON report (default)");
    auto* t = sub->add_flag("--table", as_table, "plain text report");
    j->excludes(t);
  }
  std::string example;
  auto* ex = app.add_subcommand("example", "print a builtin theory file");
  ex->add_option("name", example, "topological-mechanics, poisson-sigma, chern-simons, wzw, toda, kw-b-twist")
      ->required();
  ex->add_option("--output", output, "file path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto* sub = app.get_subcommands().front();
    if (sub->get_name() == "example") {
      write_output(output, bvkit::serialize_theory(bvkit::example_theory(example)));
      return 0;
    }
    bvkit::CommandOptions opt;
    opt.max_arity = max_arity;
    opt.max_polyvector = max_poly;
    opt.threads = bvkit::threads_from_environment();
    auto report = bvkit::run_command(sub->get_name(), read_input(input), opt);
    write_output(output, as_table ? report.table() : report.json());
    return report.passed ? 0 : 1;
  } catch (const bvkit::InputError& e) {
    std::cerr << "bvkit: input error: " << e.what() << "\n";
    return 2;
  } catch (const bvkit::StructuralError& e) {
    std::cerr << "bvkit: " << e.what() << "\n";
    return 2;
  }
}
