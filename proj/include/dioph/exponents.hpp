#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dioph/cf.hpp"
#include "dioph/intpoly.hpp"
#include "dioph/interval.hpp"
#include "dioph/poly.hpp"

namespace dioph {

enum class DegreeMode { AtMost, ExactIrreducible };

// monic + ExactIrreducible is the algebraic-integer family of exact degree n
struct Constraint {
  DegreeMode mode = DegreeMode::AtMost;
  bool monic = false;
  int n = 1;
};

enum class ExponentKind { W, WStar, Lambda, Inhomogeneous };

// "w_2", "w_{=2}", "ŵ_2^{*int}", "λ_2", "ŵ_1(ζ,α)"
std::string exponent_symbol(ExponentKind kind, const Constraint& c, bool hat);

// |P(zeta)| at height H(P); value certified, height = H(witness)
struct ApproxRecord {
  IntPoly witness;
  Integer height;
  Interval value;
  Constraint constraint;
  bool zero = false;  // value encloses 0 at width <= 2^-256: zeta is taken as a root, the record is terminal
};

struct RecordList {
  Constraint constraint;
  Integer Hmax;
  std::vector<ApproxRecord> records;  // strictly decreasing certified value, increasing height
  Integer exhaustive_height;           // every polynomial of height <= this was considered
  bool truncated = false;              // the work budget stopped the exhaustive scan before Hmax
  bool seeded = false;                 // records above exhaustive_height come from dual-body minima
};

struct ScanBudget {
  std::uint64_t max_work = 600'000'000;  // coefficient vectors (a_1..a_n) visited
  // checked at shell boundaries; passing it counts as exhausting the budget
  std::optional<std::chrono::steady_clock::time_point> deadline;
  bool past_deadline() const { return deadline && std::chrono::steady_clock::now() > *deadline; }
  bool exhausted(double work_after_shell) const {
    return work_after_shell > static_cast<double>(max_work) || past_deadline();
  }
};

// Best approximation polynomials: nonconstant P with H(P) <= Hmax under the constraint, each strictly
// better than every admissible polynomial of smaller height. Exhaustive over all heights: a value
// below 1 forces a_0 to be one of the two integers nearest -sum_{i>=1} a_i zeta^i, and values >= 1
// matter only below the first height with a smaller one, where every a_0 is tried.
// On budget exhaustion the remaining heights are seeded from dual-body minima and flagged.
// Supports 1 <= n <= 6 with ExactIrreducible limited to n <= 4.
RecordList best_records(const CFNumber& zeta, const Constraint& c, const Integer& Hmax,
                        const ScanBudget& budget = {});

// Candidates from all successive-minima witnesses of the dual body on a Q grid of ratio 2^(1/8);
// the shells max|a_1..a_n| = t of the admissible candidates are then scanned in full.
RecordList seeded_records(const CFNumber& zeta, const Constraint& c, const Integer& Hmax);

enum class EstimateMethod { BestRecords, UniformGrid };

struct SlopePoint {
  Integer X;
  double log_x = 0;
  double lo = 0, hi = 0;  // enclosure of -log(value) / log X
};

struct ExponentEstimate {
  std::string symbol;
  ExponentKind kind = ExponentKind::W;
  Constraint constraint;
  bool hat = false;
  // largest multiple of 1/100 with value <= X^(-certified_lower) (times H(alpha)^-1 for starred
  // kinds) holding exactly for the stored witness at witness_X
  Rational certified_lower;
  bool infinite = false;  // exact hit: value 0
  IntPoly witness;                            // polynomial kinds; for Inhomogeneous x_0 + x_1 T
  std::vector<Integer> witness_vector;        // Lambda: (x, y_1..y_n)
  std::optional<AlgebraicWitness> alpha;      // WStar
  Integer witness_height;
  Interval witness_value;
  Integer witness_X;
  std::vector<SlopePoint> slopes;
  EstimateMethod method = EstimateMethod::BestRecords;
  bool heuristic = false;
  bool truncated = false;
};

struct EstimateConfig {
  // best-type estimates read X in [Hmax^(1 - tail_fraction), Hmax] (logarithmic tail)
  double tail_fraction = 0.25;
  // uniform-type estimates read the upper grid_tail share of the grid points
  double grid_tail = 0.5;
};

// value <= X^(-w), by integer powering of the rational exponent; value.hi is used
bool satisfies_exponent(const Interval& value, const Integer& X, const Rational& w);

// best-type: max over the tail X of -log v(X) / log X with v(X) the best record of height <= X.
// Throws std::invalid_argument on an empty list.
ExponentEstimate estimate_w(const RecordList& records, const EstimateConfig& cfg = {});

// uniform-type: min over the grid tail of -log v(X) / log X. Heuristic unless the records are
// exhaustive up to max(Xgrid). Throws std::invalid_argument for fewer than 4 or non-increasing points.
ExponentEstimate estimate_uniform(const CFNumber& zeta, const Constraint& c, const std::vector<Integer>& Xgrid,
                                  const ScanBudget& budget = {}, const EstimateConfig& cfg = {});
ExponentEstimate estimate_uniform_from(const RecordList& records, const std::vector<Integer>& Xgrid,
                                       const EstimateConfig& cfg = {});

// Approximation by algebraic alpha whose minimal polynomial satisfies the constraint.
struct StarRecord {
  AlgebraicWitness alpha;
  Interval distance;  // |zeta - alpha|
  bool zero = false;
};

struct StarRecordList {
  Constraint constraint;
  Integer Hmax;
  // strictly decreasing |zeta - alpha| H(alpha), increasing height
  std::vector<StarRecord> records;
  bool truncated = false;
};

// Per height the candidate closest by a Newton (n >= 3) or closed-form (n <= 2) distance, certified
// with nearest_root; records are prefix minima of |zeta - alpha| H(alpha).
StarRecordList best_star_records(const CFNumber& zeta, const Constraint& c, const Integer& Hmax,
                                 const ScanBudget& budget = {});
// throws NoWitness when no candidate qualifies
ExponentEstimate estimate_w_star(const CFNumber& zeta, const Constraint& c, const Integer& Hmax,
                                 const ScanBudget& budget = {}, const EstimateConfig& cfg = {});
ExponentEstimate estimate_w_star_from(const StarRecordList& records, const EstimateConfig& cfg = {});

// upper endpoint of (160/9) max(1, zeta^2) over a certified enclosure of zeta^2
Rational ds_constant(const CFNumber& zeta);

struct DSWitness {
  AlgebraicWitness alpha;
  Interval distance;
  Interval c_value;  // |zeta - alpha| H(alpha)^3
};

// Every quadratic irrational alpha with H(alpha) <= Hmax and certified |zeta - alpha| H^3 <= ds_constant,
// ordered by height. Throws PreconditionViolation when zeta is rational or a polynomial of degree <= 2
// and height <= Hmax vanishes at zeta.
std::vector<DSWitness> ds_witnesses(const CFNumber& zeta, const Integer& Hmax, const ScanBudget& budget = {});

// min over 0 <= x < count of (b + a x) mod m, with 0 <= a, b < m; argmin is the smallest x found
struct ModMin {
  Integer value;
  Integer x;
};
ModMin min_mod_linear(const Integer& count, const Integer& m, const Integer& a, const Integer& b);
// min over 0 <= x < count of (b - d x) mod m, with 0 <= d, b < m
ModMin min_mod_linear_down(const Integer& count, const Integer& m, const Integer& d, const Integer& b);

// min over 1 <= x_1 <= X and integer x_0 of |A(zeta) + x_0 + zeta x_1|, A with rational coefficients.
// The minimiser is exact for a rational surrogate of zeta close enough that the true minimum lies
// within `slack` of the certified witness value.
struct InhomPoint {
  Integer X;
  Integer x0, x1;
  Interval value;
  Rational slack;
};
InhomPoint inhom_minimum(const CFNumber& zeta, const std::vector<Rational>& A, const Integer& X);

// X_k = floor(sqrt(q_k q_{k+1})) for 1 <= k < K, K the last available index (at most max_index), X_k >= 2
std::vector<Integer> convergent_grid(const CFNumber& zeta, std::size_t max_index);

// uniform estimate along the grid; infinite flag on an exact hit
ExponentEstimate inhom_w1_hat(const CFNumber& zeta, const std::vector<Rational>& A, const std::vector<Integer>& Xgrid,
                              const EstimateConfig& cfg = {});

// Simultaneous approximation records max_j |x zeta^j - y_j| (1 <= j <= n) for 1 <= x <= Xmax.
struct SimRecord {
  std::vector<Integer> v;  // (x, y_1..y_n)
  Interval value;
  bool zero = false;
};
std::vector<SimRecord> simultaneous_records(const CFNumber& zeta, int n, const Integer& Xmax);
ExponentEstimate estimate_lambda(const CFNumber& zeta, int n, const Integer& Xmax, const EstimateConfig& cfg = {});
ExponentEstimate estimate_lambda_uniform(const CFNumber& zeta, int n, const std::vector<Integer>& Xgrid,
                                         const EstimateConfig& cfg = {});

// upper end of the uniform spectrum: mu(1) = 1, mu(2) = (3+sqrt 5)/2, mu(3) = 3+sqrt 2,
// mu(n) = n - 1/2 + sqrt(n^2 - 2n + 5/4); annotation only
double mu_bound(int n);

struct RelationCheck {
  std::string name;
  std::string relation;  // the inequality checked, in symbols
  bool applicable = true;
  bool pass = true;
  std::string detail;
};

struct RelationReport {
  int n = 1;
  double slack = 0.3;
  std::vector<RelationCheck> checks;
  bool all_pass() const;
};

// Checks among certified lower bounds, each within `slack`. Symbols absent from the set make their checks
// not applicable. With zeta given, every starred witness is also pushed through witness_convert.
// Throws std::invalid_argument on duplicate symbols or estimates for degrees above n.
RelationReport relation_report(const std::vector<ExponentEstimate>& estimates, int n, double slack = 0.3,
                               const CFNumber* zeta = nullptr);

// Shared budgets for a full estimate set at degree bound n; every family in one report reads the same
// window so that the relations compare like with like.
struct SuiteConfig {
  Integer Hmax = 10000;                               // best records, every polynomial family
  std::vector<Integer> Xgrid{10, 100, 1000, 10000};   // uniform polynomial families
  Integer star_Hmax = 10000;                          // starred family
  Integer lambda_Xmax = 10000;                        // simultaneous best-type
  std::vector<Integer> lambda_grid{10, 100, 1000, 10000};
  bool monic = true;                                  // include the monic families at degree n
  ScanBudget budget;
  EstimateConfig est;
};

// w_k for k <= n, w_{=k} for 2 <= k <= n, uniform forms at degree n, monic forms, w*_n, λ_n and λ̂_n;
// symbols are unique so the result feeds relation_report directly
std::vector<ExponentEstimate> estimate_suite(const CFNumber& zeta, int n, const SuiteConfig& cfg);
std::vector<ExponentEstimate> estimate_suite(const CFNumber& zeta, int n);

// heights and grids up to 10^6 for n = 1, 10^4 for n = 2, 10^3 for n >= 3
SuiteConfig suite_defaults(int n);

nlohmann::json estimate_to_json(const ExponentEstimate& e);
nlohmann::json report_to_json(const RelationReport& r);
// X, log_x, slope_lo, slope_hi at 12 significant digits
std::string slopes_csv(const ExponentEstimate& e);

}  // namespace dioph
