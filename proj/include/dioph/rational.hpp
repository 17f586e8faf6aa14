#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace dioph {

using Integer = mpz_class;
using Rational = mpq_class;  // always canonical: gcd(num, den) = 1, den >= 1

Rational make_rational(const Integer& num, const Integer& den);
Rational parse_rational(const std::string& text);  // "5", "5/1", "-3/4"
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

Integer floor(const Rational& r);
Integer ceil(const Rational& r);
Integer round_nearest(const Rational& r);  // ties toward +infinity
Rational abs(const Rational& r);
Integer abs(const Integer& z);

Integer ipow(const Integer& base, unsigned long exp);
Rational rpow(const Rational& base, unsigned long exp);
// floor of the nonnegative b-th root of x
Integer iroot(const Integer& x, unsigned long b);

// natural logarithm of |x| for arbitrarily large values; x != 0
double log_abs(const Integer& x);
double log_abs(const Rational& x);
double to_double(const Rational& r);

// rational enclosure [lo, hi] of x^(1/n) with hi - lo <= 2^-bits, x >= 0
std::pair<Rational, Rational> root_bracket(const Rational& x, unsigned long n, unsigned bits);

// ascending; |n| must be nonzero and below 10^18
std::vector<Integer> positive_divisors(const Integer& n);
// distinct primes dividing n, ascending
std::vector<Integer> prime_factors(const Integer& n);

}  // namespace dioph
