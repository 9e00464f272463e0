#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string render(const fzq::GlobalOptions& g, const std::string& command, const fzq::CommandResult& r) {
  const nlohmann::json prov = fzq::provenance(g, command, r.config);
  std::ostringstream os;
  if (g.format == "csv" && !r.csv_header.empty()) {
    std::istringstream lines(prov.dump(1));
    for (std::string line; std::getline(lines, line);) os << "# " << line << "\n";
    for (size_t k = 0; k < r.csv_header.size(); ++k) os << (k ? "," : "") << csv_escape(r.csv_header[k]);
    os << "\n";
    for (const auto& row : r.csv_rows) {
      for (size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_escape(row[k]);
      os << "\n";
    }
  } else {
    nlohmann::json j{{"provenance", prov}, {"result", r.result}, {"failures", r.failures},
                     {"status", r.failures.empty() ? "pass" : "fail"}};
    os << j.dump(2) << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  fzq::GlobalOptions g;
  for (int k = 0; k < argc; ++k) g.argv.emplace_back(argv[k]);

  CLI::App app{"Matrix quantization of coadjoint orbits and equivariant bundles"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--tol", g.tol, "Override every asserted tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for all random streams");
  app.add_option("--out", g.out, "Output file (stdout when absent)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--quad", g.quad,
                 "Quadrature: auto, gauss-s2[:degree=D], haar-mc[:samples=S,seed=K] or a JSON object");

  std::string group = "A1", Lambda = "1", lambda = "0", levels = "1", diagram, marks, dump, f1 = "x1", f2 = "x2",
              mode = "star";
  int points = 200, random = 100, steps = 1, N = 1;
  bool assert_rec = false, degenerate = false;
  double diameter = 0;

  auto* classify = app.add_subcommand("classify", "Isotropy algebra of a marked Dynkin diagram");
  classify->add_option("diagram", diagram, "Series name (A3) or JSON diagram")->required();
  classify->add_option("--mark", marks, "Marked node ids, comma separated");

  auto add_group = [&](CLI::App* c) {
    c->add_option("group", group, "Series name or JSON diagram")->required();
    c->add_option("--Lambda", Lambda, "Highest weight of the reference representation");
  };

  auto* quantize = app.add_subcommand("quantize", "Fuzzy coordinates, Casimir and Serre checks");
  add_group(quantize);
  quantize->add_option("-N,--N", levels, "Level, list or range a..b[:step]");
  quantize->add_option("--dump", dump, "Write the representations as JSON");

  auto* converge = app.add_subcommand("converge", "Star-product or Poisson convergence table");
  add_group(converge);
  converge->add_option("--f1", f1, "Polynomial in x1..xn");
  converge->add_option("--f2", f2, "Polynomial in x1..xn");
  converge->add_option("-N,--N", levels, "Levels");
  converge->add_option("--mode", mode)->check(CLI::IsMember({"star", "poisson"}));
  converge->add_option("--points", points, "Size of the test set");

  auto* bundle = app.add_subcommand("bundle", "Projective modules of an equivariant bundle");
  add_group(bundle);
  bundle->add_option("--lambda", lambda, "Bundle weight");
  bundle->add_option("-N,--N", levels, "Levels");
  bundle->add_flag("--assert-recursions", assert_rec, "Make recursion residuals part of the exit status");

  auto* kernel = app.add_subcommand("kernel", "Three-point kernel statistics");
  add_group(kernel);
  kernel->add_option("-N,--N", levels, "Levels");
  kernel->add_option("--random", random, "Number of triples");
  kernel->add_flag("--degenerate", degenerate, "Use triples x = y = z");
  kernel->add_option("--diameter", diameter, "A1: draw triangles of at most this diameter");

  auto* coarse = app.add_subcommand("coarse-grain", "Iterate the module projection");
  add_group(coarse);
  coarse->add_option("--lambda", lambda, "Bundle weight");
  coarse->add_option("-N,--N", N, "Starting level");
  coarse->add_option("--steps", steps, "Number of steps");

  CLI11_PARSE(app, argc, argv);

  std::string command;
  fzq::CommandResult r;
  try {
    if (classify->parsed()) {
      command = "classify";
      r = fzq::cmd_classify(g, diagram, marks);
    } else if (quantize->parsed()) {
      command = "quantize";
      r = fzq::cmd_quantize(g, group, Lambda, levels, dump);
    } else if (converge->parsed()) {
      command = "converge";
      r = fzq::cmd_converge(g, group, Lambda, f1, f2, levels, mode, points);
    } else if (bundle->parsed()) {
      command = "bundle";
      r = fzq::cmd_bundle(g, group, Lambda, lambda, levels, assert_rec);
    } else if (kernel->parsed()) {
      command = "kernel";
      r = fzq::cmd_kernel(g, group, Lambda, levels, random, degenerate, diameter);
    } else {
      command = "coarse-grain";
      r = fzq::cmd_coarse_grain(g, group, Lambda, lambda, N, steps);
    }
  } catch (const std::exception& e) {
    std::cerr << "fuzzyq " << command << ": error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = render(g, command, r);
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out);
    if (!f) {
      std::cerr << "fuzzyq: cannot write " << g.out << "\n";
      return 2;
    }
    f << text;
  }
  for (const auto& msg : r.failures) std::cerr << "FAIL: " << msg << "\n";
  return r.failures.empty() ? 0 : 1;
}
