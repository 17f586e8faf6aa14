#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dioph/rational.hpp"

namespace dioph {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

// Calibrated: over 20000 seeded coprime pairs (degrees 1..3, heights <= 5) at the cube root of two,
// max(|P| H(P)^(n-1) H(Q)^m, |Q| H(P)^n H(Q)^(m-1)) never fell below 0.67.
inline constexpr double kCoprimeLowerC = 0.25;

enum class OutputFormat { Json, Csv };

enum ExitCode : int { kExitPass = 0, kExitAssertion = 1, kExitConfig = 2, kExitBudget = 3 };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Budgets {
  std::optional<Integer> Hmax;
  std::vector<Integer> Xgrid;
  std::vector<Rational> Qgrid;
  std::optional<unsigned> bit_limit;  // every work counter is capped at 2^bit_limit
  std::optional<double> time_limit;   // seconds; checked at scan shells and between preset steps
};

// command: construct | records | exponents | minima | primes | ds-witness | verify
// number_spec: construct_from_json input ({"class":"Bw",...}, {"class":"Custom","terms":[...]}, ...)
// params: command options, e.g. {"n":2,"mode":"exact","monic":false} or {"preset":"bw-slope","w":"3"}
struct RunConfig {
  std::string command;
  nlohmann::json number_spec;
  nlohmann::json params = nlohmann::json::object();
  Budgets budgets;
  std::string output_path;  // empty: the text goes to the caller only
  OutputFormat format = OutputFormat::Json;
  std::uint64_t seed = kDefaultSeed;
};

// throws ConfigError on unknown commands, non-positive budgets, non-increasing grids or bad formats
void validate(const RunConfig& config);

struct RunResult {
  int exit_code = kExitPass;
  nlohmann::json artifact;  // exact JSON twin, always filled (partial on budget exhaustion)
  std::string text;         // rendering in the requested format
  std::string error;        // set for exit codes 2 and 3
};

// Never throws: configuration problems map to exit 2, exhausted budgets to 3 with partial artifacts,
// failed assertions to 1. Writes `text` to output_path when one is given.
RunResult run(const RunConfig& config);

struct PresetInfo {
  std::string name;
  std::string claim;  // the mathematical statement the preset exercises
};
std::vector<PresetInfo> presets();

struct Assertion {
  std::string label;
  std::string claim;
  bool pass = false;
  std::string detail;
};

struct PresetOutcome {
  std::string preset;
  std::vector<Assertion> assertions;
  nlohmann::json data = nlohmann::json::object();
  bool budget_exhausted = false;
  bool passed() const;
  // one "PASS label | claim | detail" or "FAIL ..." line per assertion
  std::vector<std::string> lines() const;
};

// throws ConfigError for unknown presets or malformed parameters
PresetOutcome run_preset(const std::string& name, const nlohmann::json& params, std::uint64_t seed = kDefaultSeed,
                         const Budgets& budgets = {});

}  // namespace dioph
