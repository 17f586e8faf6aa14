#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dioph/errors.hpp"
#include "dioph/poly.hpp"
#include "dioph/prime_filter.hpp"

using namespace dioph;

namespace {

using i128 = __int128;

// Oracle: sieve primes up to bound.
std::vector<long> sieve(long bound) {
  std::vector<bool> composite(bound + 1, false);
  std::vector<long> out;
  for (long i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (long j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

std::vector<long> divisors_of(long v) {
  std::vector<long> out;
  v = std::labs(v);
  for (long d = 1; d * d <= v; ++d)
    if (v % d == 0) {
      out.push_back(d);
      if (d * d != v) out.push_back(v / d);
    }
  return out;
}

// Oracle: F(x/y) == 0 via y^deg F(x/y) in 128-bit arithmetic.
bool vanishes(const std::vector<long>& F, long x, long y) {
  i128 acc = 0, ypow = 1;
  std::vector<i128> yp(F.size());
  for (std::size_t k = 0; k < F.size(); ++k) yp[k] = ypow, ypow *= y;
  i128 xp = 1;
  for (std::size_t k = 0; k < F.size(); ++k) {
    acc += static_cast<i128>(F[k]) * xp * yp[F.size() - 1 - k];
    xp *= x;
  }
  return acc == 0;
}

// Oracle: rational root test of F = lead...trail with nonzero trailing coefficient.
bool has_rational_root(const std::vector<long>& F) {
  for (long x : divisors_of(F.front()))
    for (long y : divisors_of(F.back()))
      if (vanishes(F, x, y) || vanishes(F, -x, y)) return true;
  return false;
}

struct Native {
  std::vector<long> a, b;  // Q and P coefficients, index 0..n
};

Native native(const FilterInstance& inst) {
  Native v;
  for (int k = 0; k <= inst.n; ++k) {
    v.a.push_back(inst.Q.coeff(k).get_si());
    v.b.push_back(inst.P.coeff(k).get_si());
  }
  return v;
}

bool oracle_bad(const Native& v, long p) {
  std::size_t n = v.a.size() - 1;
  std::vector<long> R(n + 1), S(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    R[k] = v.a[k] + p * v.b[k];
    S[k] = v.b[k] + p * v.a[k];
  }
  // both have trailing coefficient a multiple of b_0 != 0 and leading a multiple of a_n != 0
  return has_rational_root(R) || has_rational_root(S);
}

std::set<Integer> oracle_bad_primes(const FilterInstance& inst, const std::vector<long>& primes, long bound) {
  Native v = native(inst);
  std::set<Integer> out;
  for (long p : primes) {
    if (p > bound) break;
    if (oracle_bad(v, p)) out.insert(Integer(p));
  }
  return out;
}

IntPoly poly(std::initializer_list<long> c) { return IntPoly(c); }

}  // namespace

TEST_CASE("combine examples") {
  CHECK(combine(make_instance(poly({-1, 1}), poly({0, 0, 1})), 1, 2) == poly({-2, 2, 1}));
  CHECK(combine(make_instance(poly({1}), poly({0, 0, 1})), 1, 5) == poly({5, 0, 1}));
  CHECK(combine(make_instance(poly({1, 1, 1}), poly({0, 0, 0, 1})), 1, 2) == poly({2, 2, 2, 1}));
}

TEST_CASE("instance invariants are enforced") {
  CHECK_THROWS_AS(make_instance(poly({1}), poly({0, 1})), PreconditionViolation);
  CHECK_THROWS_AS(make_instance(poly({1}), poly({1, 0, 1})), PreconditionViolation);
  CHECK_THROWS_AS(make_instance(poly({0, 1}), poly({0, 0, 1})), PreconditionViolation);
  CHECK_THROWS_AS(make_instance(poly({1, 1}), poly({0, 1, 1})), PreconditionViolation);      // proportional
  CHECK_THROWS_AS(make_instance(poly({-1, 1}), poly({0, -1, 0, 1})), PreconditionViolation);  // shared T-1
  CHECK(make_instance(poly({-1, 1}), poly({0, 0, 3})).X == 3);
}

TEST_CASE("bad_primes examples") {
  CHECK(bad_primes(make_instance(poly({-1, 1}), poly({0, 0, 1})), 100) == std::set<Integer>{2});
  CHECK(bad_primes(make_instance(poly({1}), poly({0, 0, 1})), 100).empty());
  CHECK(bad_primes(make_instance(poly({1, 1}), poly({0, 0, 0, 1})), 100).empty());
}

TEST_CASE("find_good_prime examples") {
  CHECK(find_good_prime(make_instance(poly({-1, 1}), poly({0, 0, 1}))) == 3);
  CHECK(find_good_prime(make_instance(poly({1}), poly({0, 0, 1}))) == 2);
  CHECK(find_good_prime(make_instance(poly({1, 1}), poly({0, 0, 0, 1}))) == 2);
}

TEST_CASE("theorem_bound examples") {
  CHECK(theorem_bound(2, 1) == 2);
  CHECK(theorem_bound(3, 5) == 1875);
  CHECK(theorem_bound(2, 10) == 2000);
}

TEST_CASE("irreducible_combination examples") {
  auto a = irreducible_combination(poly({1, 1, 1}), poly({0, 0, 0, 1}));
  CHECK(a.first == 2);
  CHECK(a.second == poly({2, 2, 2, 1}));
  auto b = irreducible_combination(poly({-1, 1}), poly({0, 0, 1}));
  CHECK(b.first == 3);
  CHECK(b.second == poly({-3, 3, 1}));
  // S_2 = 2T^3+T^2+1 vanishes at -1, so 2 is bad
  auto c = irreducible_combination(poly({1, 0, 1}), poly({0, 0, 0, 1}));
  CHECK(c.first == 3);
  CHECK(c.second == poly({3, 0, 3, 1}));
  CHECK_THROWS_AS(irreducible_combination(poly({1}), poly({0, 0, 0, 0, 1})), UnsupportedDegree);
}

TEST_CASE("primality agrees with a sieve") {
  auto primes = sieve(20000);
  std::set<long> ps(primes.begin(), primes.end());
  for (long k = 0; k <= 20000; ++k) CHECK(is_prime(k) == (ps.count(k) == 1));
  CHECK(is_prime(Integer("18446744073709551557")));  // largest prime below 2^64
  CHECK_FALSE(is_prime(Integer("18446744073709551617")));  // 2^64 + 1 = 274177 * 67280421310721
  CHECK(next_prime(Integer("18446744073709551557")) == Integer("18446744073709551629"));
}

TEST_CASE("property: structured bad-prime search matches the brute-force oracle on a seeded corpus") {
  auto corpus = random_instances(20240601, 120, 4, 10);
  REQUIRE(corpus.size() == 120);
  long max_bound = 0;
  for (const auto& inst : corpus) max_bound = std::max(max_bound, theorem_bound(inst.n, inst.X).get_si());
  auto primes = sieve(max_bound + 20000);
  double worst = 0;
  for (const auto& inst : corpus) {
    long bound = theorem_bound(inst.n, inst.X).get_si();
    auto structured = bad_primes(inst, bound);
    CHECK(structured == oracle_bad_primes(inst, primes, bound));
    for (const auto& p : structured) {
      CHECK(p <= bound);
      CHECK((has_linear_factor(R_p(inst, p)) || has_linear_factor(S_p(inst, p))));
    }
    CHECK(all_bad_primes(inst) == structured);
    // 25 primes directly above the bound
    Native v = native(inst);
    auto it = std::upper_bound(primes.begin(), primes.end(), bound);
    for (int k = 0; k < 25; ++k, ++it) {
      REQUIRE(it != primes.end());
      CHECK_FALSE(oracle_bad(v, *it));
    }
    double tau = static_cast<double>(divisor_count(inst.P.coeff(0)) * divisor_count(inst.Q.leading()));
    double ratio = structured.size() / (tau * (1.0 + std::log(inst.X.get_d())));
    worst = std::max(worst, ratio);
    CHECK(static_cast<double>(structured.size()) <= kBadPrimeCountC * tau * (1.0 + std::log(inst.X.get_d())));
  }
  MESSAGE("largest count ratio " << worst);
}
