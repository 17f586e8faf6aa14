#include "dioph/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "dioph/construct.hpp"
#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"
#include "dioph/json_io.hpp"
#include "dioph/minima.hpp"
#include "dioph/poly.hpp"
#include "dioph/prime_filter.hpp"

namespace dioph {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

const std::vector<std::string> kCommands = {"construct", "records",    "exponents", "minima",
                                            "primes",    "ds-witness", "verify"};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}
std::string g6(double x) { return std::isinf(x) ? "inf" : fmt("%.6g", x); }
std::string g12(double x) { return std::isinf(x) ? "inf" : fmt("%.12g", x); }

// ---------------------------------------------------------------------------------------------
// parameter access

const json& field(const json& p, const char* key) {
  static const json null_value;
  auto it = p.find(key);
  return it == p.end() ? null_value : *it;
}

Integer integer_param(const json& p, const char* key, const Integer& fallback) {
  const json& v = field(p, key);
  if (v.is_null()) return fallback;
  try {
    if (v.is_string()) return Integer(v.get<std::string>());
    return integer_from_json(v);
  } catch (const std::exception&) {
    throw ConfigError(std::string("parameter ") + key + " must be an integer");
  }
}

long long_param(const json& p, const char* key, long fallback) {
  Integer z = integer_param(p, key, Integer(fallback));
  if (!z.fits_slong_p()) throw ConfigError(std::string("parameter ") + key + " is out of range");
  return z.get_si();
}

Rational rational_param(const json& p, const char* key, const Rational& fallback) {
  const json& v = field(p, key);
  if (v.is_null()) return fallback;
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(Integer(v.get<long>()));
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string("parameter ") + key + " must be a rational like \"5/2\"");
}

double double_param(const json& p, const char* key, double fallback) {
  const json& v = field(p, key);
  if (v.is_null()) return fallback;
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return to_double(parse_rational(v.get<std::string>()));
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(std::string("parameter ") + key + " must be a number");
}

bool bool_param(const json& p, const char* key, bool fallback) {
  const json& v = field(p, key);
  if (v.is_null()) return fallback;
  if (!v.is_boolean()) throw ConfigError(std::string("parameter ") + key + " must be a boolean");
  return v.get<bool>();
}

std::string string_param(const json& p, const char* key, const std::string& fallback) {
  const json& v = field(p, key);
  if (v.is_null()) return fallback;
  if (!v.is_string()) throw ConfigError(std::string("parameter ") + key + " must be a string");
  return v.get<std::string>();
}

IntPoly poly_param(const json& p, const char* key) {
  const json& v = field(p, key);
  if (v.is_null()) throw ConfigError(std::string("missing polynomial ") + key);
  try {
    return v.is_string() ? parse_poly(v.get<std::string>()) : poly_from_json(v);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("malformed polynomial ") + key + ": " + e.what());
  }
}

void check_increasing(const std::vector<Integer>& g, const char* what) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] < 1) throw ConfigError(std::string(what) + " entries must be positive");
    if (i > 0 && g[i] <= g[i - 1]) throw ConfigError(std::string(what) + " must be increasing");
  }
}

std::vector<Integer> grid_param(const json& p, const char* key, const std::vector<Integer>& fallback) {
  const json& v = field(p, key);
  if (v.is_null()) return fallback;
  if (!v.is_array()) throw ConfigError(std::string("parameter ") + key + " must be an array");
  std::vector<Integer> g;
  try {
    for (const auto& x : v) g.push_back(x.is_string() ? Integer(x.get<std::string>()) : integer_from_json(x));
  } catch (const std::exception&) {
    throw ConfigError(std::string("parameter ") + key + " must hold integers");
  }
  check_increasing(g, key);
  return g;
}

ConstructedNumber number_from(const json& spec, const char* what = "number") {
  if (spec.is_null()) throw ConfigError(std::string("missing ") + what + " specification");
  try {
    return construct_from_json(spec);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad ") + what + " specification: " + e.what());
  }
}

ConstructedNumber number_param(const json& p, const char* key, const json& fallback) {
  const json& v = field(p, key);
  return number_from(v.is_null() ? fallback : v, key);
}

Constraint constraint_param(const json& p, int fallback_n) {
  Constraint c;
  c.n = static_cast<int>(long_param(p, "n", fallback_n));
  if (c.n < 1 || c.n > 6) throw ConfigError("n must lie in 1..6");
  std::string mode = string_param(p, "mode", "at-most");
  if (mode == "at-most")
    c.mode = DegreeMode::AtMost;
  else if (mode == "exact")
    c.mode = DegreeMode::ExactIrreducible;
  else
    throw ConfigError("mode must be at-most or exact");
  c.monic = bool_param(p, "monic", false);
  return c;
}

// ---------------------------------------------------------------------------------------------
// budgets

struct Governor {
  std::optional<Clock::time_point> deadline;
  std::optional<unsigned> bits;
  explicit Governor(const Budgets& b) : bits(b.bit_limit) {
    if (b.time_limit)
      deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*b.time_limit));
  }
  bool expired() const { return deadline && Clock::now() > *deadline; }
  ScanBudget scan() const {
    ScanBudget s;
    if (bits) s.max_work = std::uint64_t(1) << std::min(*bits, 62u);
    s.deadline = deadline;
    return s;
  }
  MinimaBudget minima() const {
    MinimaBudget m;
    if (bits) m.max_points = std::uint64_t(1) << std::min(*bits, 62u);
    return m;
  }
};

// ---------------------------------------------------------------------------------------------
// JSON helpers

json rat(const Rational& r) { return to_string(r); }
json ival(const Interval& v) { return json::array({to_string(v.lo), to_string(v.hi)}); }

json constraint_json(const Constraint& c) {
  return {{"n", c.n}, {"mode", c.mode == DegreeMode::AtMost ? "at-most" : "exact"}, {"monic", c.monic}};
}

json record_list_json(const RecordList& r) {
  json recs = json::array();
  for (const auto& x : r.records)
    recs.push_back({{"poly", poly_to_json(x.witness)}, {"H", to_string(x.height)}, {"value", ival(x.value)},
                    {"zero", x.zero}});
  return {{"constraint", constraint_json(r.constraint)},
          {"Hmax", to_string(r.Hmax)},
          {"exhaustive_height", to_string(r.exhaustive_height)},
          {"truncated", r.truncated},
          {"seeded", r.seeded},
          {"records", recs}};
}

std::string record_list_csv(const RecordList& r) {
  std::ostringstream os;
  os << "H,poly,value_lo,value_hi,slope_lo,slope_hi\n";
  for (const auto& x : r.records) {
    double lh = log_abs(x.height);
    std::string slo = "", shi = "";
    if (lh > 0 && !x.zero) {
      slo = g12(-log_abs(x.value.hi) / lh);
      shi = x.value.lo > 0 ? g12(-log_abs(x.value.lo) / lh) : "inf";
    }
    os << to_string(x.height) << ",\"" << x.witness.str() << "\"," << g12(to_double(x.value.lo)) << ","
       << g12(to_double(x.value.hi)) << "," << slo << "," << shi << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------------------------
// presets

struct PresetDef {
  PresetInfo info;
  std::function<void(PresetOutcome&, const json&, std::uint64_t, const Governor&)> body;
};

void add(PresetOutcome& out, const std::string& label, const std::string& claim, bool pass, const std::string& detail) {
  out.assertions.push_back({label, claim, pass, detail});
}

json bw_spec(const Rational& w, long M, long terms) {
  return {{"class", "Bw"}, {"w", to_string(w)}, {"M", M}, {"max_terms", terms}};
}

const char* kClaimBw = "|q_j zeta - p_j| is comparable to q_j^-w along the construction";
const char* kClaimExactVsBounded = "exact-degree uniform exponent n/(w-n+1) versus bounded-degree uniform exponent n";
const char* kClaimExactCap = "exact-degree irreducible approximation is capped at n w/(w-n+1)";
const char* kClaimMahler = "polynomial and simultaneous successive minima are dual: psi_j + psi*_{n+2-j} -> 0";
const char* kClaimMinkowski = "product of successive minima lies in [1/(n+1)!, 1] times the unit volume";
const char* kClaimFilter = "every bad prime is at most n X^(n+1) and a good prime exists";
const char* kClaimCombination = "some small prime p makes Q + p P irreducible";
const char* kClaimDS = "quadratic irrationals within (160/9) max(1, zeta^2) H^-3 exist";
const char* kClaimGelfond = "H(PQ) is comparable to H(P) H(Q) with constants depending on degrees";
const char* kClaimCoprime = "coprime P, Q cannot both be small at zeta relative to their heights";
const char* kClaimRelations = "exponent inequalities: exact <= bounded, starred <= unstarred, transference, pigeonhole";
const char* kClaimInhom = "uniform inhomogeneous exponent vanishes for a Liouville number and a generic shift";

void preset_bw_slope(PresetOutcome& out, const json& p, std::uint64_t, const Governor&) {
  Rational w = rational_param(p, "w", Rational(3));
  long M = long_param(p, "M", 1), terms = long_param(p, "terms", 7);
  double tol = double_param(p, "tolerance", 0.15);
  if (w < 1 || M < 1 || terms < 4) throw ConfigError("bw-slope needs w >= 1, M >= 1, terms >= 4");
  long j_from = long_param(p, "j_from", 3), j_to = long_param(p, "j_to", terms - 1);
  if (j_from < 1 || j_to >= terms || j_from > j_to) throw ConfigError("bw-slope needs 1 <= j_from <= j_to < terms");
  ConstructedNumber x = number_from(bw_spec(w, M, terms));
  double wd = to_double(w);
  json rows = json::array();
  for (long j = j_from; j <= j_to; ++j) {
    auto [lo, hi] = convergent_slope_bracket(x.value, static_cast<std::size_t>(j));
    bool ok = lo <= wd + tol && hi >= wd - tol;
    rows.push_back({j, lo, hi});
    add(out, "slope at j=" + std::to_string(j), kClaimBw, ok,
        "[" + g6(lo) + ", " + g6(hi) + "] vs [" + g6(wd - tol) + ", " + g6(wd + tol) + "]");
  }
  out.data["slopes"] = rows;
  out.data["number"] = describe(x);
}

void preset_exact_vs_bounded(PresetOutcome& out, const json& p, std::uint64_t, const Governor& gov) {
  Rational w = rational_param(p, "w", Rational(5));
  long M = long_param(p, "M", 1), terms = long_param(p, "terms", 6);
  int n = static_cast<int>(long_param(p, "n", 2));
  double slack = double_param(p, "slack", 0.3);
  std::vector<Integer> grid = grid_param(p, "Xgrid", {10, 100, 1000, 10000});
  if (n < 2 || n > 3 || w < 2 * n - 1) throw ConfigError("exact-vs-bounded-uniform needs n in 2..3 and w >= 2n-1");
  CFNumber z = number_from(bw_spec(w, M, terms)).value;
  double wd = to_double(w), target_exact = n / (wd - n + 1);
  ExponentEstimate ex = estimate_uniform(z, {DegreeMode::ExactIrreducible, false, n}, grid, gov.scan());
  if (ex.truncated) out.budget_exhausted = true;
  double ve = ex.infinite ? INFINITY : to_double(ex.certified_lower);
  add(out, "exact degree uniform near n/(w-n+1)", kClaimExactVsBounded, std::fabs(ve - target_exact) <= slack,
      ex.symbol + " = " + g6(ve) + ", target " + g6(target_exact) + " +- " + g6(slack));
  if (gov.expired()) {
    out.budget_exhausted = true;
    return;
  }
  ExponentEstimate am = estimate_uniform(z, {DegreeMode::AtMost, false, n}, grid, gov.scan());
  if (am.truncated) out.budget_exhausted = true;
  double va = am.infinite ? INFINITY : to_double(am.certified_lower);
  add(out, "bounded degree uniform near n", kClaimExactVsBounded, std::fabs(va - n) <= slack,
      am.symbol + " = " + g6(va) + ", target " + std::to_string(n) + " +- " + g6(slack));
  out.data["estimates"] = json::array({estimate_to_json(ex), estimate_to_json(am)});
}

void preset_exact_cap(PresetOutcome& out, const json& p, std::uint64_t, const Governor& gov) {
  Rational w = rational_param(p, "w", Rational(5));
  long M = long_param(p, "M", 1), terms = long_param(p, "terms", 6);
  int n = static_cast<int>(long_param(p, "n", 2));
  double slack = double_param(p, "slack", 0.3);
  Integer H = integer_param(p, "Hmax", Integer(10000));
  if (n < 2 || n > 4 || w < 2 * n - 1) throw ConfigError("exact-degree-cap needs n in 2..4 and w >= 2n-1");
  CFNumber z = number_from(bw_spec(w, M, terms)).value;
  double wd = to_double(w), cap = n * wd / (wd - n + 1) + slack;
  RecordList r = best_records(z, {DegreeMode::ExactIrreducible, false, n}, H, gov.scan());
  if (r.truncated) out.budget_exhausted = true;
  double worst = -INFINITY;
  std::string where = "none";
  std::size_t counted = 0;
  for (const auto& rec : r.records) {
    if (rec.height < 2) continue;  // log H = 0
    ++counted;
    // upper end of the slope: the smallest admissible value
    double s = rec.zero || rec.value.lo <= 0 ? INFINITY : -log_abs(rec.value.lo) / log_abs(rec.height);
    if (s > worst) {
      worst = s;
      where = rec.witness.str();
    }
  }
  add(out, "every exact-degree record below the cap", kClaimExactCap, counted > 0 && worst <= cap,
      std::to_string(counted) + " records up to H=" + to_string(r.exhaustive_height) + ", largest slope " +
          g6(worst) + " at " + where + ", cap " + g6(cap));
  out.data["records"] = record_list_json(r);
}

void preset_mahler(PresetOutcome& out, const json& p, std::uint64_t, const Governor& gov) {
  CFNumber z = number_param(p, "number", {{"class", "CubeRootTwo"}}).value;
  int n = static_cast<int>(long_param(p, "n", 2));
  std::vector<Integer> qg = grid_param(p, "Qgrid", {100, 1000, 10000});
  if (n < 1 || n > 3 || qg.size() < 2) throw ConfigError("mahler-duality needs n in 1..3 and two grid points");
  std::vector<Rational> grid;
  for (const auto& q : qg) grid.emplace_back(q);
  auto rows = trajectory(n, grid, z, gov.minima());
  std::vector<double> res(grid.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t q = i / (n + 1);
    res[q] = std::max(res[q], to_double(rows[i].gap.magnitude()) * std::log(to_double(rows[i].Q)));
  }
  for (std::size_t q = 0; q < grid.size(); ++q)
    add(out, "residual at Q=" + to_string(qg[q]), kClaimMahler, res[q] < kMahlerResidualC,
        "max_j |gap| log Q = " + g6(res[q]) + " < " + g6(kMahlerResidualC));
  add(out, "residual shrinks along the grid", kClaimMahler, res.back() < res.front(),
      g6(res.back()) + " < " + g6(res.front()));
  json rj = json::array();
  for (const auto& r : rows)
    rj.push_back({{"Q", rat(r.Q)}, {"j", r.j}, {"psi", ival(r.psi)}, {"psi_star", ival(r.psi_star)},
                  {"gap", ival(r.gap)}});
  out.data["trajectory"] = rj;
}

void preset_minkowski(PresetOutcome& out, const json& p, std::uint64_t seed, const Governor& gov) {
  long count = long_param(p, "count", 50), max_n = long_param(p, "max_n", 3);
  long qmax = long_param(p, "Qmax", 10000);
  if (count < 1 || max_n < 1 || max_n > 3 || qmax < 2) throw ConfigError("minkowski-product needs count >= 1, n in 1..3, Qmax >= 2");
  std::vector<std::pair<std::string, CFNumber>> numbers{{"cube root of 2", cube_root_two().value},
                                                        {"golden ratio", CFNumber::golden()}};
  for (long t : {5L, 6L}) numbers.emplace_back("B_3 with " + std::to_string(t) + " terms", number_from(bw_spec(Rational(3), 1, t)).value);
  std::mt19937_64 rng(seed);
  std::size_t bad = 0, done = 0;
  std::string worst;
  json bodies = json::array();
  for (long i = 0; i < count; ++i) {
    if (gov.expired()) {
      out.budget_exhausted = true;
      break;
    }
    int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n));
    long Q = 2 + static_cast<long>(rng() % static_cast<std::uint64_t>(qmax - 1));
    const auto& [name, z] = numbers[rng() % numbers.size()];
    MinimaResult m = successive_minima({BodyKind::Simultaneous, n, Rational(Q), z}, make_rational(1, 1000000000),
                                       gov.minima());
    if (!m.complete) {
      out.budget_exhausted = true;
      break;
    }
    Interval prod(Rational(1));
    for (const auto& l : m.lambdas) prod = prod * l;
    Integer fact = 1;
    for (int k = 2; k <= n + 1; ++k) fact *= k;
    bool ok = prod.lo >= make_rational(1, fact) && prod.hi <= 1;
    ++done;
    if (!ok) {
      ++bad;
      worst = name + " n=" + std::to_string(n) + " Q=" + std::to_string(Q) + " product " + ival(prod).dump();
    }
    bodies.push_back({{"number", name}, {"n", n}, {"Q", Q}, {"product", ival(prod)}});
  }
  add(out, "product bracket on " + std::to_string(done) + " seeded bodies", kClaimMinkowski,
      bad == 0 && done == static_cast<std::size_t>(count),
      bad == 0 ? (out.budget_exhausted ? "stopped by the budget" : "all inside") : std::to_string(bad) + " outside, e.g. " + worst);
  out.data["bodies"] = bodies;
}

void preset_prime_filter(PresetOutcome& out, const json& p, std::uint64_t seed, const Governor& gov) {
  std::string part = string_param(p, "part", "all");
  if (part != "all" && part != "filter" && part != "combination")
    throw ConfigError("prime-filter part must be all, filter or combination");
  if (part != "combination") {
    FilterInstance ex = make_instance(IntPoly{-1, 1}, IntPoly{0, 0, 1});
    auto bp = bad_primes(ex, Integer(100));
    Integer good = find_good_prime(ex);
    add(out, "bad primes of (T-1, T^2) up to 100", kClaimFilter, bp == std::set<Integer>{Integer(2)} && good == 3,
        "bad " + std::to_string(bp.size()) + " prime(s), good prime " + to_string(good));
    long count = long_param(p, "count", 100), max_n = long_param(p, "max_n", 4), max_x = long_param(p, "max_X", 10);
    auto corpus = random_instances(seed, static_cast<std::size_t>(count), static_cast<int>(max_n), max_x);
    std::size_t mismatch = 0, above = 0, window_bad = 0, done = 0;
    for (const auto& inst : corpus) {
      if (gov.expired()) {
        out.budget_exhausted = true;
        break;
      }
      Integer bound = theorem_bound(inst.n, inst.X);
      auto structured = bad_primes(inst, bound);
      if (structured != bad_primes_by_scan(inst, bound)) ++mismatch;
      if (all_bad_primes(inst) != structured) ++above;
      Integer q = bound;
      for (int k = 0; k < 25; ++k) {
        q = next_prime(q);
        if (has_linear_factor(R_p(inst, q)) || has_linear_factor(S_p(inst, q))) ++window_bad;
      }
      ++done;
    }
    add(out, "structured search equals brute force", kClaimFilter, mismatch == 0 && done == corpus.size(),
        std::to_string(done) + " instances, " + std::to_string(mismatch) + " mismatches");
    add(out, "no bad prime above n X^(n+1)", kClaimFilter, above == 0, std::to_string(above) + " instances exceed");
    add(out, "25 primes above the bound are clean", kClaimFilter, window_bad == 0,
        std::to_string(window_bad) + " bad primes in the windows");
  }
  if (part != "filter") {
    auto [pr, R] = irreducible_combination(IntPoly{1, 1, 1}, IntPoly{0, 0, 0, 1});
    bool ok = pr == 2 && R == IntPoly{2, 2, 2, 1} && is_irreducible(R);
    add(out, "combination of T^2+T+1 and T^3", kClaimCombination, ok, "p = " + to_string(pr) + ", " + R.str());
  }
}

void preset_ds(PresetOutcome& out, const json& p, std::uint64_t, const Governor& gov) {
  CFNumber z = number_param(p, "number", {{"class", "CubeRootTwo"}}).value;
  Integer H = integer_param(p, "Hmax", Integer(10000));
  Rational K = ds_constant(z);
  std::vector<DSWitness> ws;
  try {
    ws = ds_witnesses(z, H, gov.scan());
  } catch (const BudgetExceeded& e) {
    out.budget_exhausted = true;
    add(out, "quadratic witnesses found", kClaimDS, false, e.what());
    return;
  }
  Rational minc = 0;
  std::string at = "none";
  for (const auto& w : ws)
    if (at == "none" || w.c_value.hi < minc) {
      minc = w.c_value.hi;
      at = w.alpha.minimal_polynomial.str();
    }
  add(out, "quadratic witnesses found", kClaimDS, !ws.empty(), std::to_string(ws.size()) + " witnesses up to H=" + to_string(H));
  add(out, "smallest constant below the bound", kClaimDS, !ws.empty() && minc < K,
      "min c = " + g6(to_double(minc)) + " at " + at + ", bound " + g6(to_double(K)));
  json wj = json::array();
  for (const auto& w : ws)
    wj.push_back({{"poly", poly_to_json(w.alpha.minimal_polynomial)}, {"alpha", ival(w.alpha.isolating)},
                  {"H", to_string(w.alpha.height)}, {"c_value", ival(w.c_value)}});
  out.data["constant"] = rat(K);
  out.data["witnesses"] = wj;
}

void preset_gelfond(PresetOutcome& out, const json& p, std::uint64_t, const Governor&) {
  long ds = long_param(p, "degree_sum", 6), h = long_param(p, "max_height", 3);
  if (ds < 2 || ds > 7 || h < 1 || h > 5) throw ConfigError("gelfond-exhaustive needs degree_sum in 2..7, height in 1..5");
  GelfondSweep s = gelfond_exhaustive(static_cast<int>(ds), static_cast<int>(h));
  add(out, "height ratio inside [2^-(dP+dQ), dP+dQ+1]", kClaimGelfond, s.violations == 0 && s.pairs > 0,
      std::to_string(s.pairs) + " pairs, ratios in [" + g6(s.min_ratio) + ", " + g6(s.max_ratio) + "], extremes " +
          s.min_P.str() + " * " + s.min_Q.str() + " and " + s.max_P.str() + " * " + s.max_Q.str());
  out.data = {{"pairs", s.pairs},
              {"violations", s.violations},
              {"min_ratio", g12(s.min_ratio)},
              {"max_ratio", g12(s.max_ratio)},
              {"min_pair", {s.min_P.str(), s.min_Q.str()}},
              {"max_pair", {s.max_P.str(), s.max_Q.str()}}};
}

bool coprime(const IntPoly& P, const IntPoly& Q) {
  auto fp = factor_small(P.primitive_part()), fq = factor_small(Q.primitive_part());
  for (const auto& a : fp)
    for (const auto& b : fq)
      if (a.first == b.first) return false;
  return true;
}

void preset_coprime(PresetOutcome& out, const json& p, std::uint64_t seed, const Governor&) {
  long count = long_param(p, "count", 100), max_d = long_param(p, "max_degree", 3), max_h = long_param(p, "max_height", 5);
  double C = double_param(p, "C", kCoprimeLowerC);
  if (count < 1 || max_d < 1 || max_d > 3 || max_h < 1) throw ConfigError("coprime-lower-bound needs degree in 1..3");
  CFNumber z = number_param(p, "number", {{"class", "CubeRootTwo"}}).value;
  std::mt19937_64 rng(seed);
  auto draw = [&](int d) {
    std::vector<Integer> c(d + 1);
    for (int i = 0; i <= d; ++i) c[i] = static_cast<long>(rng() % (2 * max_h + 1)) - max_h;
    while (c[d] == 0) c[d] = static_cast<long>(rng() % (2 * max_h + 1)) - max_h;
    return IntPoly(c);
  };
  const Rational tol = make_rational(1, Integer(1) << 64);
  std::size_t done = 0, bad = 0;
  Rational worst = -1;
  std::string at;
  while (done < static_cast<std::size_t>(count)) {
    int m = 1 + static_cast<int>(rng() % max_d), n = 1 + static_cast<int>(rng() % max_d);
    IntPoly P = draw(m), Q = draw(n);
    if (!coprime(P, Q)) continue;
    ++done;
    Rational hp(P.height()), hq(Q.height());
    Interval a = Interval(rpow(hp, n - 1) * rpow(hq, m)) * abs(eval_poly(P, z, tol));
    Interval b = Interval(rpow(hp, n) * rpow(hq, m - 1)) * abs(eval_poly(Q, z, tol));
    Rational r = std::max(a.lo, b.lo);
    if (worst < 0 || r < worst) {
      worst = r;
      at = P.str() + ", " + Q.str();
    }
    if (!(a.lo >= Rational(C) || b.lo >= Rational(C))) ++bad;
  }
  add(out, "one of the two lower bounds holds on " + std::to_string(done) + " coprime pairs", kClaimCoprime, bad == 0,
      "smallest max ratio " + g6(to_double(worst)) + " at (" + at + "), constant " + g6(C));
  out.data = {{"pairs", done}, {"violations", bad}, {"smallest", rat(worst)}, {"constant", g12(C)}};
}

void preset_relations(PresetOutcome& out, const json& p, std::uint64_t, const Governor& gov) {
  CFNumber z = number_param(p, "number", bw_spec(Rational(3), 1, 8)).value;
  int nmax = static_cast<int>(long_param(p, "n_max", 2));
  double slack = double_param(p, "slack", 0.3);
  if (nmax < 1 || nmax > 3) throw ConfigError("relation-report needs n_max in 1..3");
  json reports = json::array();
  std::vector<ExponentEstimate> last;
  for (int n = 1; n <= nmax; ++n) {
    if (gov.expired()) {
      out.budget_exhausted = true;
      return;
    }
    SuiteConfig cfg = suite_defaults(n);
    cfg.budget = gov.scan();
    std::vector<ExponentEstimate> suite = estimate_suite(z, n, cfg);
    for (const auto& e : suite)
      if (e.truncated) out.budget_exhausted = true;
    RelationReport rep = relation_report(suite, n, slack, &z);
    std::size_t applicable = 0;
    std::string failed;
    for (const auto& c : rep.checks) {
      if (!c.applicable) continue;
      ++applicable;
      if (!c.pass) failed += (failed.empty() ? "" : "; ") + c.name + " (" + c.detail + ")";
    }
    add(out, "report at n=" + std::to_string(n), kClaimRelations, rep.all_pass(),
        std::to_string(applicable) + " checks at slack " + g6(slack) + (failed.empty() ? ", all hold" : ", failed: " + failed));
    json ej = json::array();
    for (const auto& e : suite) ej.push_back(estimate_to_json(e));
    reports.push_back({{"n", n}, {"estimates", ej}, {"report", report_to_json(rep)}});
    last = std::move(suite);
  }
  // negative control: lift the starred estimate above the unstarred one
  for (auto& e : last)
    if (e.kind == ExponentKind::WStar) e.certified_lower += Rational(1) + Rational(slack);
  RelationReport bad = relation_report(last, nmax, slack, &z);
  add(out, "corrupted starred estimate is flagged", kClaimRelations, !bad.all_pass(),
      bad.all_pass() ? "corruption went unnoticed" : "violation reported");
  out.data["reports"] = reports;
}

void preset_inhom(PresetOutcome& out, const json& p, std::uint64_t, const Governor&) {
  long terms = long_param(p, "terms", 6);
  double small = double_param(p, "shifted_max", 0.1), large = double_param(p, "homogeneous_min", 0.9);
  if (terms < 3 || terms > 7) throw ConfigError("inhom-liouville needs terms in 3..7");
  CFNumber z = number_from({{"class", "BInfinity"}, {"max_terms", terms}}).value;
  std::vector<Integer> grid = convergent_grid(z, static_cast<std::size_t>(terms));
  ExponentEstimate shifted = inhom_w1_hat(z, {Rational(0), Rational(0), Rational(1)}, grid);
  ExponentEstimate homog = inhom_w1_hat(z, {Rational(0)}, grid);
  double vs = shifted.infinite ? INFINITY : to_double(shifted.certified_lower);
  double vh = homog.infinite ? INFINITY : to_double(homog.certified_lower);
  add(out, "shift zeta^2 gives a vanishing uniform exponent", kClaimInhom, vs < small,
      "estimate " + g6(vs) + " < " + g6(small) + " on " + std::to_string(grid.size()) + " grid points");
  add(out, "no shift keeps the uniform exponent near 1", kClaimInhom, vh >= large,
      "estimate " + g6(vh) + " >= " + g6(large));
  out.data["shifted"] = estimate_to_json(shifted);
  out.data["homogeneous"] = estimate_to_json(homog);
}

const std::vector<PresetDef>& registry() {
  static const std::vector<PresetDef> r = {
      {{"bw-slope", kClaimBw}, preset_bw_slope},
      {{"exact-vs-bounded-uniform", kClaimExactVsBounded}, preset_exact_vs_bounded},
      {{"exact-degree-cap", kClaimExactCap}, preset_exact_cap},
      {{"mahler-duality", kClaimMahler}, preset_mahler},
      {{"minkowski-product", kClaimMinkowski}, preset_minkowski},
      {{"prime-filter", kClaimFilter}, preset_prime_filter},
      {{"ds-witness", kClaimDS}, preset_ds},
      {{"gelfond-exhaustive", kClaimGelfond}, preset_gelfond},
      {{"coprime-lower-bound", kClaimCoprime}, preset_coprime},
      {{"relation-report", kClaimRelations}, preset_relations},
      {{"inhom-liouville", kClaimInhom}, preset_inhom},
  };
  return r;
}

// ---------------------------------------------------------------------------------------------
// commands

struct Produced {
  json artifact;
  std::string csv;
  bool csv_supported = true;
  int exit_code = kExitPass;
};

Produced cmd_construct(const RunConfig& c, const Governor&) {
  ConstructedNumber x = number_from(c.number_spec);
  Produced out;
  out.artifact = describe(x);
  out.csv_supported = false;
  return out;
}

Produced cmd_records(const RunConfig& c, const Governor& gov) {
  CFNumber z = number_from(c.number_spec).value;
  Constraint con = constraint_param(c.params, 1);
  Integer H = c.budgets.Hmax ? *c.budgets.Hmax : integer_param(c.params, "Hmax", Integer(1000));
  RecordList r = best_records(z, con, H, gov.scan());
  Produced out;
  out.artifact = record_list_json(r);
  out.csv = record_list_csv(r);
  if (r.truncated) out.exit_code = kExitBudget;
  return out;
}

Produced cmd_exponents(const RunConfig& c, const Governor& gov) {
  CFNumber z = number_from(c.number_spec).value;
  Constraint con = constraint_param(c.params, 1);
  std::string family = string_param(c.params, "family", "suite");
  Integer H = c.budgets.Hmax ? *c.budgets.Hmax : integer_param(c.params, "Hmax", Integer(1000));
  std::vector<Integer> grid = c.budgets.Xgrid;
  if (grid.empty()) {
    for (Integer x = 10; x <= H; x *= 10) grid.push_back(x);
    if (grid.empty() || grid.back() != H) grid.push_back(H);
  }
  Produced out;
  std::vector<ExponentEstimate> es;
  if (family == "suite") {
    SuiteConfig cfg = suite_defaults(con.n);
    if (c.budgets.Hmax) cfg.Hmax = cfg.star_Hmax = cfg.lambda_Xmax = H;
    if (!c.budgets.Xgrid.empty()) cfg.Xgrid = cfg.lambda_grid = c.budgets.Xgrid;
    cfg.budget = gov.scan();
    es = estimate_suite(z, con.n, cfg);
    RelationReport rep = relation_report(es, con.n, double_param(c.params, "slack", 0.3), &z);
    out.artifact["report"] = report_to_json(rep);
    if (!rep.all_pass()) out.exit_code = kExitAssertion;
  } else if (family == "w") {
    es.push_back(estimate_w(best_records(z, con, H, gov.scan())));
  } else if (family == "w-hat") {
    es.push_back(estimate_uniform(z, con, grid, gov.scan()));
  } else if (family == "w-star") {
    es.push_back(estimate_w_star(z, con, H, gov.scan()));
  } else if (family == "lambda") {
    es.push_back(estimate_lambda(z, con.n, H));
  } else if (family == "lambda-hat") {
    es.push_back(estimate_lambda_uniform(z, con.n, grid));
  } else if (family == "inhom") {
    std::vector<Rational> A;
    const json& a = field(c.params, "alpha");
    if (!a.is_array() || a.empty()) throw ConfigError("inhom needs alpha as an array of rational coefficients");
    for (const auto& x : a) A.push_back(x.is_string() ? parse_rational(x.get<std::string>()) : Rational(x.get<long>()));
    std::vector<Integer> g = c.budgets.Xgrid.empty() ? convergent_grid(z, 12) : c.budgets.Xgrid;
    es.push_back(inhom_w1_hat(z, A, g));
  } else {
    throw ConfigError("family must be suite, w, w-hat, w-star, lambda, lambda-hat or inhom");
  }
  json ej = json::array();
  for (const auto& e : es) {
    ej.push_back(estimate_to_json(e));
    if (e.truncated) out.exit_code = kExitBudget;
  }
  out.artifact["estimates"] = ej;
  std::ostringstream csv;
  csv << "symbol," << "X,log_x,slope_lo,slope_hi\n";
  for (const auto& e : es) {
    std::istringstream lines(slopes_csv(e));
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) csv << e.symbol << "," << line << "\n";
  }
  out.csv = csv.str();
  return out;
}

Produced cmd_minima(const RunConfig& c, const Governor& gov) {
  CFNumber z = number_from(c.number_spec).value;
  int n = static_cast<int>(long_param(c.params, "n", 1));
  if (n < 1 || n > 4) throw ConfigError("n must lie in 1..4");
  std::vector<Rational> grid = c.budgets.Qgrid;
  if (grid.empty()) grid = {Rational(100), Rational(1000), Rational(10000)};
  auto rows = trajectory(n, grid, z, gov.minima());
  Produced out;
  json rj = json::array();
  for (const auto& r : rows)
    rj.push_back({{"Q", rat(r.Q)}, {"j", r.j}, {"psi", ival(r.psi)}, {"psi_star", ival(r.psi_star)}, {"gap", ival(r.gap)}});
  out.artifact = {{"n", n}, {"rows", rj}};
  out.csv = trajectory_csv(rows);
  return out;
}

Produced cmd_primes(const RunConfig& c, const Governor&) {
  IntPoly P = poly_param(c.params, "P"), Q = poly_param(c.params, "Q");
  FilterInstance inst;
  try {
    inst = make_instance(P, Q);
  } catch (const PreconditionViolation& e) {
    throw ConfigError(std::string("invalid pair: ") + e.what());
  }
  Integer bound = integer_param(c.params, "bound", theorem_bound(inst.n, inst.X));
  if (bound < 2) throw ConfigError("bound must be at least 2");
  json bad = json::array();
  for (const auto& p : bad_primes(inst, bound)) bad.push_back(integer_to_json(p));
  Produced out;
  out.artifact = {{"bad_primes", bad}, {"good_prime", integer_to_json(find_good_prime(inst))}};
  out.csv_supported = false;
  return out;
}

Produced cmd_ds(const RunConfig& c, const Governor& gov) {
  json params = c.params;
  params["number"] = c.number_spec;
  if (c.budgets.Hmax) params["Hmax"] = to_string(*c.budgets.Hmax);
  PresetOutcome o;
  preset_ds(o, params, c.seed, gov);
  Produced out;
  out.artifact = o.data;
  std::ostringstream csv;
  csv << "H,poly,c_lo,c_hi\n";
  for (const auto& w : o.data.value("witnesses", json::array()))
    csv << w["H"].get<std::string>() << ",\"" << poly_from_json(w["poly"]).str() << "\","
        << g12(to_double(parse_rational(w["c_value"][0].get<std::string>()))) << ","
        << g12(to_double(parse_rational(w["c_value"][1].get<std::string>()))) << "\n";
  out.csv = csv.str();
  if (o.budget_exhausted) out.exit_code = kExitBudget;
  return out;
}

Produced cmd_verify(const RunConfig& c, const Governor&) {
  std::string name = string_param(c.params, "preset", "");
  if (name.empty()) throw ConfigError("verify needs a preset");
  json params = c.params;
  params.erase("preset");
  if (!c.number_spec.is_null()) params["number"] = c.number_spec;
  if (c.budgets.Hmax) params["Hmax"] = to_string(*c.budgets.Hmax);
  if (!c.budgets.Xgrid.empty()) {
    json g = json::array();
    for (const auto& x : c.budgets.Xgrid) g.push_back(integer_to_json(x));
    params["Xgrid"] = g;
  }
  PresetOutcome o = run_preset(name, params, c.seed, c.budgets);
  Produced out;
  json as = json::array();
  std::ostringstream csv;
  csv << "status,label,claim,detail\n";
  for (const auto& a : o.assertions) {
    as.push_back({{"label", a.label}, {"claim", a.claim}, {"pass", a.pass}, {"detail", a.detail}});
    csv << (a.pass ? "PASS" : "FAIL") << ",\"" << a.label << "\",\"" << a.claim << "\",\"" << a.detail << "\"\n";
  }
  out.artifact = {{"preset", name}, {"passed", o.passed()}, {"assertions", as}, {"data", o.data},
                  {"lines", o.lines()}, {"budget_exhausted", o.budget_exhausted}};
  out.csv = csv.str();
  out.exit_code = o.budget_exhausted ? kExitBudget : o.passed() ? kExitPass : kExitAssertion;
  return out;
}

}  // namespace

bool PresetOutcome::passed() const {
  return !assertions.empty() &&
         std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

std::vector<std::string> PresetOutcome::lines() const {
  std::vector<std::string> out;
  for (const auto& a : assertions)
    out.push_back(std::string(a.pass ? "PASS " : "FAIL ") + preset + ": " + a.label + " | " + a.claim + " | " + a.detail);
  return out;
}

std::vector<PresetInfo> presets() {
  std::vector<PresetInfo> out;
  for (const auto& d : registry()) out.push_back(d.info);
  return out;
}

PresetOutcome run_preset(const std::string& name, const nlohmann::json& params, std::uint64_t seed,
                         const Budgets& budgets) {
  for (const auto& d : registry()) {
    if (d.info.name != name) continue;
    if (!params.is_object()) throw ConfigError("preset parameters must be a JSON object");
    PresetOutcome out;
    out.preset = name;
    Governor gov(budgets);
    try {
      d.body(out, params, seed, gov);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      // a scan cut short by the clock or a counter can leave a later step without input
      bool budget = dynamic_cast<const BudgetExceeded*>(&e) || dynamic_cast<const ResourceLimit*>(&e) || gov.expired();
      if (!budget) throw;
      out.budget_exhausted = true;
      add(out, "budget", d.info.claim, false, std::string("stopped early: ") + e.what());
    }
    return out;
  }
  throw ConfigError("unknown preset " + name);
}

void validate(const RunConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
    throw ConfigError("unknown command " + c.command);
  if (!c.params.is_object()) throw ConfigError("params must be a JSON object");
  const Budgets& b = c.budgets;
  if (b.Hmax && *b.Hmax < 1) throw ConfigError("Hmax must be positive");
  check_increasing(b.Xgrid, "Xgrid");
  for (std::size_t i = 0; i < b.Qgrid.size(); ++i) {
    if (b.Qgrid[i] <= 1) throw ConfigError("Qgrid entries must exceed 1");
    if (i > 0 && b.Qgrid[i] <= b.Qgrid[i - 1]) throw ConfigError("Qgrid must be increasing");
  }
  if (b.bit_limit && (*b.bit_limit < 1 || *b.bit_limit > 62)) throw ConfigError("bit limit must lie in 1..62");
  if (b.time_limit && !(*b.time_limit > 0)) throw ConfigError("time limit must be positive");
  bool needs_number = c.command == "construct" || c.command == "records" || c.command == "exponents" ||
                      c.command == "minima";
  if (needs_number && c.number_spec.is_null()) throw ConfigError(c.command + " needs a number specification");
}

RunResult run(const RunConfig& c) {
  RunResult res;
  Produced p;
  try {
    validate(c);
    Governor gov(c.budgets);
    static const std::map<std::string, Produced (*)(const RunConfig&, const Governor&)> table = {
        {"construct", cmd_construct}, {"records", cmd_records}, {"exponents", cmd_exponents},
        {"minima", cmd_minima},       {"primes", cmd_primes},   {"ds-witness", cmd_ds},
        {"verify", cmd_verify}};
    p = table.at(c.command)(c, gov);
    if (c.format == OutputFormat::Csv && !p.csv_supported)
      throw ConfigError("csv output is not available for " + c.command);
    if (gov.expired() && p.exit_code == kExitPass) p.exit_code = kExitBudget;
    res.exit_code = p.exit_code;
    res.artifact = p.artifact;
  } catch (const ConfigError& e) {
    res.exit_code = kExitConfig;
    res.error = e.what();
  } catch (const BudgetExceeded& e) {
    res.exit_code = kExitBudget;
    res.error = e.what();
  } catch (const ResourceLimit& e) {
    res.exit_code = kExitBudget;
    res.error = e.what();
  } catch (const json::exception& e) {
    res.exit_code = kExitConfig;
    res.error = e.what();
  } catch (const std::invalid_argument& e) {
    res.exit_code = kExitConfig;
    res.error = e.what();
  } catch (const std::exception& e) {
    res.exit_code = kExitAssertion;
    res.error = e.what();
  }
  if (res.exit_code == kExitConfig || (res.exit_code == kExitBudget && res.artifact.is_null())) {
    res.artifact = {{"error", res.error}, {"exit_code", res.exit_code}};
    res.text = res.artifact.dump() + "\n";
  } else {
    if (!res.error.empty()) res.artifact["error"] = res.error;
    res.text = c.format == OutputFormat::Csv ? p.csv : res.artifact.dump() + "\n";
  }
  if (!c.output_path.empty()) {
    std::ofstream f(c.output_path, std::ios::binary);
    if (!f) {
      res.exit_code = kExitConfig;
      res.error = "cannot write " + c.output_path;
    } else {
      f << res.text;
    }
  }
  return res;
}

}  // namespace dioph
