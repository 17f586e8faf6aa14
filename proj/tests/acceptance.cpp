// One PASS/FAIL line per acceptance criterion. Tolerances and runtime limits are fixed here.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "dioph/harness.hpp"

namespace {

using nlohmann::json;

struct Criterion {
  std::string label;
  std::string preset;
  json params;
  double seconds;  // runtime limit, also passed as the wall-clock budget
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"construction slope stays within 0.15 of w=3 for j=3..6", "bw-slope",
       {{"w", "3"}, {"M", 1}, {"terms", 7}, {"j_from", 3}, {"j_to", 6}, {"tolerance", 0.15}}, 10},
      {"bad prime filter matches brute force on a seeded corpus", "prime-filter",
       {{"part", "filter"}, {"count", 100}, {"max_n", 4}, {"max_X", 10}}, 60},
      {"irreducible combination of T^2+T+1 and T^3", "prime-filter", {{"part", "combination"}}, 1},
      {"successive minima product bracket on 50 seeded bodies", "minkowski-product",
       {{"count", 50}, {"max_n", 3}, {"Qmax", 10000}}, 300},
      {"polynomial and simultaneous minima duality residual shrinks", "mahler-duality",
       {{"n", 2}, {"Qgrid", {100, 1000, 10000}}}, 300},
      {"exact-degree versus bounded-degree uniform exponents at w=5", "exact-vs-bounded-uniform",
       {{"w", "5"}, {"M", 1}, {"n", 2}, {"Xgrid", {10, 100, 1000, 10000}}, {"slack", 0.3}}, 600},
      {"exact-degree records obey the upper cap at w=5", "exact-degree-cap",
       {{"w", "5"}, {"M", 1}, {"n", 2}, {"Hmax", 10000}, {"slack", 0.3}}, 600},
      {"close quadratic irrationals near the cube root of two", "ds-witness", {{"Hmax", 10000}}, 600},
      {"product height bracket over all small pairs", "gelfond-exhaustive",
       {{"degree_sum", 6}, {"max_height", 3}}, 120},
      {"exponent relations on the w=3 construction with a negative control", "relation-report",
       {{"n_max", 2}, {"slack", 0.3}}, 600},
      {"inhomogeneous uniform exponent of a strong Liouville number", "inhom-liouville",
       {{"terms", 6}, {"shifted_max", 0.1}, {"homogeneous_min", 0.9}}, 300},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    dioph::Budgets budgets;
    budgets.time_limit = c.seconds;
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      dioph::PresetOutcome o = dioph::run_preset(c.preset, c.params, dioph::kDefaultSeed, budgets);
      pass = o.passed() && !o.budget_exhausted;
      for (const auto& a : o.assertions)
        if (!a.pass || detail.empty()) detail = a.label + ": " + a.detail;
    } catch (const std::exception& e) {
      detail = std::string("error: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > c.seconds) {
      pass = false;
      detail += " (over the time limit)";
    }
    if (!pass) ++failures;
    std::printf("%s %2zu %s [%.1fs of %.0fs] %s\n", pass ? "PASS" : "FAIL", i + 1, c.label.c_str(), elapsed, c.seconds,
                detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
