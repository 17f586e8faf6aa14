#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "dioph/intpoly.hpp"

namespace dioph {

// P = sum b_k T^k (degree <= n-1, b_0 != 0), Q = sum a_k T^k (degree n, a_0 = 0, a_n != 0),
// no common linear factor, (a_1..a_n) not proportional to (b_0..b_{n-1}), X = max(H(P), H(Q)).
struct FilterInstance {
  IntPoly P;
  IntPoly Q;
  int n = 0;
  Integer X;
};

// throws PreconditionViolation when an invariant fails
FilterInstance make_instance(const IntPoly& P, const IntPoly& Q);

// a Q + b P
IntPoly combine(const FilterInstance& inst, const Integer& a, const Integer& b);
IntPoly R_p(const FilterInstance& inst, const Integer& p);  // Q + p P
IntPoly S_p(const FilterInstance& inst, const Integer& p);  // P + p Q

bool is_prime(const Integer& n);  // deterministic Miller-Rabin below 2^64, trial division above
Integer next_prime(const Integer& n);  // smallest prime > n

// Primes p <= bound for which R_p or S_p has a linear factor. Candidates come from the
// divisor structure of b_0 and a_n, independent of the bound; each is confirmed with rational_roots.
std::set<Integer> bad_primes(const FilterInstance& inst, const Integer& bound);
// Same set without the bound.
std::set<Integer> all_bad_primes(const FilterInstance& inst);

// smallest prime with neither R_p nor S_p having a linear factor
Integer find_good_prime(const FilterInstance& inst);

Integer theorem_bound(int n, const Integer& X);  // n X^(n+1)

// n in {2, 3}: the smallest good prime p and the irreducible R_p; throws UnsupportedDegree otherwise
std::pair<Integer, IntPoly> irreducible_combination(const IntPoly& P, const IntPoly& Q);

// Reference check: every prime p <= bound tested directly with rational_roots.
std::set<Integer> bad_primes_by_scan(const FilterInstance& inst, const Integer& bound);

// Seeded random instances with n in [2, max_n] and X <= max_X.
std::vector<FilterInstance> random_instances(std::uint64_t seed, std::size_t count, int max_n, long max_X);

// Calibrated: over the seeded corpus, the count of bad primes up to theorem_bound stays below
// C tau(|b_0|) tau(|a_n|) (1 + log X).
inline constexpr double kBadPrimeCountC = 2.0;

// number of positive divisors
unsigned long divisor_count(const Integer& n);

}  // namespace dioph
