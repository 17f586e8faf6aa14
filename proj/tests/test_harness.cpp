#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dioph/harness.hpp"

using namespace dioph;
using nlohmann::json;

namespace {

RunConfig primes_config(json P, json Q) {
  RunConfig c;
  c.command = "primes";
  c.params = {{"P", std::move(P)}, {"Q", std::move(Q)}, {"bound", 100}};
  return c;
}

}  // namespace

TEST_CASE("preset list covers every named check") {
  std::vector<std::string> names;
  for (const auto& p : presets()) {
    CHECK_FALSE(p.claim.empty());
    names.push_back(p.name);
  }
  for (const char* want : {"bw-slope", "exact-vs-bounded-uniform", "exact-degree-cap", "mahler-duality", "minkowski-product",
                           "prime-filter", "ds-witness", "gelfond-exhaustive", "coprime-lower-bound", "relation-report",
                           "inhom-liouville"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
}

TEST_CASE("primes command: compact bad prime artifact") {
  RunResult r = run(primes_config(json::array({-1, 1}), json::array({0, 0, 1})));
  CHECK(r.exit_code == kExitPass);
  CHECK(r.text == "{\"bad_primes\":[2],\"good_prime\":3}\n");
}

TEST_CASE("malformed input maps to exit 2 with an error artifact") {
  RunResult r = run(primes_config(json::array({1, "x"}), json::array({0, 0, 1})));
  CHECK(r.exit_code == kExitConfig);
  CHECK(r.artifact.contains("error"));
  CHECK(r.artifact["exit_code"] == kExitConfig);

  // common root T = 0 violates the pair precondition
  CHECK(run(primes_config(json::array({0, 1}), json::array({0, 0, 1}))).exit_code == kExitConfig);

  RunConfig c;
  c.command = "records";
  CHECK(run(c).exit_code == kExitConfig);  // no number
  c.number_spec = {{"class", "Nope"}};
  CHECK(run(c).exit_code == kExitConfig);
  c.command = "frobnicate";
  CHECK(run(c).exit_code == kExitConfig);

  RunConfig csv;
  csv.command = "construct";
  csv.number_spec = {{"class", "Golden"}};
  csv.format = OutputFormat::Csv;
  CHECK(run(csv).exit_code == kExitConfig);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.command = "records";
  c.number_spec = {{"class", "Golden"}};
  CHECK_NOTHROW(validate(c));
  c.budgets.Hmax = Integer(0);
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.budgets.Hmax.reset();
  c.budgets.Xgrid = {Integer(10), Integer(10)};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.budgets.Xgrid = {Integer(10), Integer(100)};
  c.budgets.Qgrid = {Rational(1)};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.budgets.Qgrid.clear();
  c.budgets.time_limit = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.budgets.time_limit.reset();
  c.budgets.bit_limit = 0u;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.budgets.bit_limit = 20u;
  CHECK_NOTHROW(validate(c));
  c.params = json::array();
  CHECK_THROWS_AS(validate(c), ConfigError);

  CHECK_THROWS_AS(run_preset("no-such-preset", json::object()), ConfigError);
  CHECK_THROWS_AS(run_preset("bw-slope", {{"w", "x"}}), ConfigError);
  CHECK_THROWS_AS(run_preset("prime-filter", {{"part", "most"}}), ConfigError);
}

TEST_CASE("records: identical configs give byte-identical output in both formats") {
  RunConfig c;
  c.command = "records";
  c.number_spec = {{"class", "CubeRootTwo"}};
  c.params = {{"n", 2}};
  c.budgets.Hmax = Integer(60);
  RunResult a = run(c), b = run(c);
  CHECK(a.exit_code == kExitPass);
  CHECK(a.text == b.text);
  CHECK(a.artifact["records"].size() > 3);
  c.format = OutputFormat::Csv;
  RunResult x = run(c), y = run(c);
  CHECK(x.text == y.text);
  CHECK(x.text.rfind("H,poly,value_lo,value_hi,slope_lo,slope_hi\n", 0) == 0);
  // one CSV row per JSON record
  CHECK(std::count(x.text.begin(), x.text.end(), '\n') == static_cast<long>(a.artifact["records"].size()) + 1);
}

TEST_CASE("seeded presets are deterministic in the seed") {
  PresetOutcome a = run_preset("coprime-lower-bound", {{"count", 30}}, 7);
  PresetOutcome b = run_preset("coprime-lower-bound", {{"count", 30}}, 7);
  CHECK(a.data.dump() == b.data.dump());
  CHECK(a.lines() == b.lines());
}

TEST_CASE("bit budget exhaustion reports exit 3 with a partial artifact") {
  RunConfig c;
  c.command = "records";
  c.number_spec = {{"class", "CubeRootTwo"}};
  c.params = {{"n", 3}};
  c.budgets.Hmax = Integer(1000);
  c.budgets.bit_limit = 10u;
  RunResult r = run(c);
  CHECK(r.exit_code == kExitBudget);
  CHECK(r.artifact["truncated"] == true);
  CHECK_FALSE(r.artifact["records"].empty());
}

TEST_CASE("time budget stops a long preset early") {
  Budgets b;
  b.time_limit = 0.2;
  auto start = std::chrono::steady_clock::now();
  PresetOutcome o = run_preset("relation-report", {{"n_max", 2}}, kDefaultSeed, b);
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(o.budget_exhausted);
  CHECK_FALSE(o.passed());
  CHECK(elapsed < 10);
}

TEST_CASE("coprime lower bound preset passes on the seeded corpus") {
  PresetOutcome o = run_preset("coprime-lower-bound", json::object());
  CHECK(o.passed());
  CHECK(o.data["pairs"] == 100);
  CHECK(o.data["violations"] == 0);
  REQUIRE(o.lines().size() == 1);
  CHECK(o.lines()[0].rfind("PASS coprime-lower-bound: ", 0) == 0);
}

TEST_CASE("height product preset passes over small pairs") {
  PresetOutcome o = run_preset("gelfond-exhaustive", {{"degree_sum", 4}, {"max_height", 2}});
  CHECK(o.passed());
  CHECK(o.data["violations"] == 0);
  CHECK(o.data["pairs"].get<long>() > 0);
}

TEST_CASE("verify command: exit code follows the assertions") {
  RunConfig c;
  c.command = "verify";
  c.params = {{"preset", "bw-slope"}, {"w", "3"}, {"M", 1}};
  RunResult r = run(c);
  CHECK(r.exit_code == kExitPass);
  CHECK(r.artifact["passed"] == true);
  // the homogeneous estimate on this grid is about 1.6, far below a floor of 5
  c.params = {{"preset", "inhom-liouville"}, {"homogeneous_min", 5}};
  RunResult strict = run(c);
  CHECK(strict.exit_code == kExitAssertion);
  CHECK(strict.artifact["passed"] == false);
  c.params = {{"preset", "gelfond-exhaustive"}, {"degree_sum", 3}, {"max_height", 1}};
  CHECK(run(c).exit_code == kExitPass);
}

TEST_CASE("output file receives the rendered text") {
  RunConfig c = primes_config(json::array({-1, 1}), json::array({0, 0, 1}));
  c.output_path = "harness_test_output.json";
  RunResult r = run(c);
  std::ifstream f(c.output_path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == r.text);
  std::remove(c.output_path.c_str());
}

TEST_CASE("construct and minima commands produce artifacts") {
  RunConfig c;
  c.command = "construct";
  c.number_spec = {{"class", "Bw"}, {"w", "3"}, {"M", 1}, {"max_terms", 5}};
  RunResult r = run(c);
  CHECK(r.exit_code == kExitPass);
  CHECK(r.artifact.is_object());

  RunConfig m;
  m.command = "minima";
  m.number_spec = {{"class", "CubeRootTwo"}};
  m.params = {{"n", 2}};
  m.budgets.Qgrid = {Rational(100), Rational(1000)};
  RunResult t = run(m);
  CHECK(t.exit_code == kExitPass);
  CHECK(t.artifact["rows"].size() == 6);  // (n + 1) rows per grid point
  m.format = OutputFormat::Csv;
  CHECK(run(m).text.rfind("Q,j,", 0) == 0);
}
