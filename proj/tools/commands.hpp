#pragma once

#include "fuzzy/bundles.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fzq {

struct GlobalOptions {
  std::optional<double> tol;
  std::uint64_t seed = 20240917;
  std::string out;
  std::string format = "json";
  std::string quad;
  std::vector<std::string> argv;
};

/// Everything a subcommand produces: a JSON result, an optional CSV table and
/// the list of asserted checks that failed.
struct CommandResult {
  nlohmann::json result = nlohmann::json::object();
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  std::vector<std::string> failures;
  nlohmann::json config = nlohmann::json::object();
};

struct QuadSpec {
  std::string rule = "auto";  // auto, gauss-s2, haar-mc
  int degree = -1;
  int samples = 20000;
  std::optional<std::uint64_t> seed;
};

QuadSpec parse_quad(const std::string& text);
fz::Weight parse_weight(const std::string& text);
/// "5", "1,2,3", "1..6" or "0..12:3".
std::vector<int> parse_levels(const std::string& text);

CommandResult cmd_classify(const GlobalOptions& g, const std::string& diagram, const std::string& marks);
CommandResult cmd_quantize(const GlobalOptions& g, const std::string& group, const std::string& Lambda,
                           const std::string& levels, const std::string& dump);
CommandResult cmd_converge(const GlobalOptions& g, const std::string& group, const std::string& Lambda,
                           const std::string& f1, const std::string& f2, const std::string& levels,
                           const std::string& mode, int points);
CommandResult cmd_bundle(const GlobalOptions& g, const std::string& group, const std::string& Lambda,
                         const std::string& lambda, const std::string& levels, bool assert_recursions);
CommandResult cmd_kernel(const GlobalOptions& g, const std::string& group, const std::string& Lambda,
                         const std::string& levels, int random, bool degenerate, double diameter);
CommandResult cmd_coarse_grain(const GlobalOptions& g, const std::string& group, const std::string& Lambda,
                               const std::string& lambda, int N, int steps);

/// Provenance block: tool version, full argument vector, seed and tolerances.
nlohmann::json provenance(const GlobalOptions& g, const std::string& command, const nlohmann::json& config);

}  // namespace fzq
