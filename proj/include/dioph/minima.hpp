#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dioph/cf.hpp"
#include "dioph/intpoly.hpp"
#include "dioph/interval.hpp"

namespace dioph {

enum class BodyKind { Simultaneous, Dual };

// Simultaneous: vectors (x, y_1..y_n) with norm max(|x|/Q, Q^(1/n) max_i |zeta^i x - y_i|).
// Dual: polynomials P = (a_0..a_n) with norm max(H(P)/Q^(1/n), Q |P(zeta)|).
// Both unit bodies have volume comparable to 2^(n+1); the simultaneous one exactly.
struct MinimaBody {
  BodyKind kind = BodyKind::Simultaneous;
  int n = 1;
  Rational Q;
  CFNumber zeta;
};

struct MinimaBudget {
  std::uint64_t max_points = 50'000'000;  // lattice points visited over all radii
};

struct MinimaResult {
  // lambdas[j-1] encloses the j-th minimum; witnesses[j-1] attains it
  std::vector<Interval> lambdas;
  std::vector<std::vector<Integer>> witnesses;
  // false when the budget stopped the search; missing minima then carry the
  // last fully searched radius as a lower bound in both endpoints
  bool complete = true;
  std::uint64_t visited = 0;
};

// certified norm of an integer vector (x, y_1..y_n) or coefficient vector (a_0..a_n)
Interval body_norm(const MinimaBody& body, const std::vector<Integer>& v, const Rational& rel_tol);

// Exact box enumeration with doubling radius; candidates screened in floating point with a
// margin, the chosen witnesses re-certified exactly. Throws PreconditionViolation for Q <= 1 or n < 1.
MinimaResult successive_minima(const MinimaBody& body, const Rational& rel_tol, const MinimaBudget& budget = {});

// rank of integer vectors, exact
int integer_rank(const std::vector<std::vector<Integer>>& rows);

// log_Q of the j-th minimum; throws BudgetExceeded when that minimum was not reached
Interval psi(int n, int j, const Rational& Q, const CFNumber& zeta, const MinimaBudget& budget = {});
Interval psi_star(int n, int j, const Rational& Q, const CFNumber& zeta, const MinimaBudget& budget = {});
// Calibrated: over 2^(1/3) (n <= 3) and the golden ratio (n <= 2) at Q in {10^2, 10^3, 10^4},
// max_j |psi_j + psi*_{n+2-j}| * log Q stays below this constant.
inline constexpr double kMahlerResidualC = 1.0;

// psi_j + psi*_{n+2-j}; throws std::out_of_range for j outside 1..n+1
Interval mahler_gap(int n, int j, const Rational& Q, const CFNumber& zeta, const MinimaBudget& budget = {});

struct TrajectoryRow {
  Rational Q;
  int j = 1;
  Interval psi, psi_star, gap;
};

// one row per (Q, j); each grid point solves both bodies once
std::vector<TrajectoryRow> trajectory(int n, const std::vector<Rational>& Qgrid, const CFNumber& zeta,
                                      const MinimaBudget& budget = {});
// columns Q, j, psi_lo, psi_hi, psi_star_lo, psi_star_hi, gap_lo, gap_hi at 12 significant digits
std::string trajectory_csv(const std::vector<TrajectoryRow>& rows);

struct PsiSummary {
  int n = 1, j = 1;
  BodyKind kind = BodyKind::Simultaneous;
  std::vector<std::pair<Rational, Interval>> series;  // (Q, psi_j(Q))
  // smallest and largest psi over the grid: enclosures of min and max of the true values
  Interval low, high;
  // the two extremes are certifiably separated
  bool oscillation_certified = false;
};

// psi-trajectory summary; throws std::invalid_argument for fewer than 4 or non-increasing grid points
PsiSummary exponent_from_trajectory(int n, int j, const std::vector<Rational>& Qgrid, const CFNumber& zeta,
                                    BodyKind kind, const MinimaBudget& budget = {});

// decimal rendering at 12 significant digits
std::string decimal12(const Rational& r);

}  // namespace dioph
