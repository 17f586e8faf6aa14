#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

#include "dioph/harness.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// a JSON literal when the text parses as one, otherwise the raw string
json json_or_string(const std::string& s) {
  json j = json::parse(s, nullptr, false);
  return j.is_discarded() ? json(s) : j;
}

json number_shorthand(const std::string& s) {
  if (s == "golden") return {{"class", "Golden"}};
  if (s == "cbrt2") return {{"class", "CubeRootTwo"}};
  json j = json::parse(s, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw dioph::ConfigError("--number takes a JSON object, golden or cbrt2");
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diophantine approximation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path, format = "json", number, mode, family, alpha, P, Q, bound, preset, w, Hmax, Xgrid, Qgrid;
  std::string params_json;
  std::uint64_t seed = dioph::kDefaultSeed;
  unsigned budget_bits = 0;
  double budget_seconds = 0;
  int n = 0;
  long M = 0, terms = 0, count = 0;
  double slack = -1;
  bool monic = false;

  app.add_option("--out", out_path, "write the artifact to this file");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "seed for corpus generation");
  app.add_option("--budget-bits", budget_bits, "cap every work counter at 2^bits");
  app.add_option("--budget-seconds", budget_seconds, "wall-clock limit");

  std::vector<std::pair<std::string, std::string>> subs = {
      {"construct", "build and describe a number"},
      {"records", "best approximation polynomials"},
      {"exponents", "exponent estimates and relation report"},
      {"minima", "successive minima trajectory"},
      {"primes", "bad primes of a polynomial pair"},
      {"ds-witness", "close quadratic irrationals"},
      {"verify", "run a named preset"}};
  for (const auto& [name, help] : subs) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--number", number, "JSON number specification, golden or cbrt2");
    s->add_option("--n", n, "degree bound");
    s->add_option("--mode", mode, "at-most or exact");
    s->add_flag("--monic", monic, "monic polynomials only");
    s->add_option("--Hmax", Hmax, "height budget");
    s->add_option("--Xgrid", Xgrid, "comma separated integer grid");
    s->add_option("--Qgrid", Qgrid, "comma separated rational grid");
    s->add_option("--family", family, "suite, w, w-hat, w-star, lambda, lambda-hat or inhom");
    s->add_option("--alpha", alpha, "comma separated rational coefficients of the shift");
    s->add_option("--P", P, "polynomial, coefficients constant first");
    s->add_option("--Q", Q, "polynomial, coefficients constant first");
    s->add_option("--bound", bound, "prime bound");
    s->add_option("--preset", preset, "preset name");
    s->add_option("--w", w, "construction exponent");
    s->add_option("--M", M, "construction multiplier");
    s->add_option("--terms", terms, "number of terms");
    s->add_option("--count", count, "corpus size");
    s->add_option("--slack", slack, "tolerance");
    s->add_option("--params", params_json, "extra parameters as a JSON object");
  }
  app.add_subcommand("presets", "list the presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors are configuration errors; --help exits 0
    return app.exit(e) == 0 ? dioph::kExitPass : dioph::kExitConfig;
  }
  CLI::App* sub = app.get_subcommands().front();

  if (sub->get_name() == "presets") {
    for (const auto& p : dioph::presets()) std::cout << p.name << ": " << p.claim << "\n";
    return dioph::kExitPass;
  }

  dioph::RunConfig cfg;
  cfg.command = sub->get_name();
  cfg.output_path = out_path;
  cfg.format = format == "csv" ? dioph::OutputFormat::Csv : dioph::OutputFormat::Json;
  cfg.seed = seed;
  try {
    if (!params_json.empty()) {
      cfg.params = json::parse(params_json);
      if (!cfg.params.is_object()) throw dioph::ConfigError("--params must be a JSON object");
    }
    json& p = cfg.params;
    if (!number.empty()) cfg.number_spec = number_shorthand(number);
    if (*sub->get_option("--n")) p["n"] = n;
    if (!mode.empty()) p["mode"] = mode;
    if (monic) p["monic"] = true;
    if (!family.empty()) p["family"] = family;
    if (!alpha.empty()) p["alpha"] = split_list(alpha);
    if (!P.empty()) p["P"] = json_or_string(P);
    if (!Q.empty()) p["Q"] = json_or_string(Q);
    if (!bound.empty()) p["bound"] = bound;
    if (!preset.empty()) p["preset"] = preset;
    if (!w.empty()) p["w"] = w;
    if (*sub->get_option("--M")) p["M"] = M;
    if (*sub->get_option("--terms")) p["terms"] = terms;
    if (*sub->get_option("--count")) p["count"] = count;
    if (*sub->get_option("--slack")) p["slack"] = slack;
    // construct with only --w given builds the matching continued fraction
    if (cfg.command == "construct" && cfg.number_spec.is_null() && !w.empty())
      cfg.number_spec = {{"class", "Bw"}, {"w", w}, {"M", M > 0 ? M : 1}, {"max_terms", terms > 0 ? terms : 6}};
    if (!Hmax.empty()) cfg.budgets.Hmax = dioph::Integer(Hmax);
    for (const auto& x : split_list(Xgrid)) cfg.budgets.Xgrid.emplace_back(x);
    for (const auto& x : split_list(Qgrid)) cfg.budgets.Qgrid.push_back(dioph::parse_rational(x));
    if (*app.get_option("--budget-bits")) cfg.budgets.bit_limit = budget_bits;
    if (*app.get_option("--budget-seconds")) cfg.budgets.time_limit = budget_seconds;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return dioph::kExitConfig;
  }

  dioph::RunResult r = dioph::run(cfg);
  if (out_path.empty()) std::cout << r.text;
  if (!r.error.empty()) std::cerr << r.error << "\n";
  if (cfg.command == "verify" && r.artifact.contains("lines"))
    for (const auto& l : r.artifact["lines"]) std::cerr << l.get<std::string>() << "\n";
  return r.exit_code;
}
