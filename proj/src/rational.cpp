#include "dioph/rational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dioph {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(text));
    return make_rational(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational: '" + text + "'");
  }
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer round_nearest(const Rational& r) { return floor(r + Rational(1, 2)); }

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }
Integer abs(const Integer& z) { return z < 0 ? Integer(-z) : z; }

Integer ipow(const Integer& base, unsigned long exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

Rational rpow(const Rational& base, unsigned long exp) {
  return make_rational(ipow(base.get_num(), exp), ipow(base.get_den(), exp));
}

Integer iroot(const Integer& x, unsigned long b) {
  if (x < 0) throw std::invalid_argument("iroot of negative value");
  if (b == 0) throw std::invalid_argument("iroot of order zero");
  Integer out;
  mpz_root(out.get_mpz_t(), x.get_mpz_t(), b);
  return out;
}

double log_abs(const Integer& x) {
  if (x == 0) throw std::domain_error("log of zero");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double log_abs(const Rational& x) { return log_abs(x.get_num()) - log_abs(x.get_den()); }

double to_double(const Rational& r) { return r.get_d(); }

std::pair<Rational, Rational> root_bracket(const Rational& x, unsigned long n, unsigned bits) {
  if (x < 0) throw std::invalid_argument("root of negative value");
  Integer scale = ipow(Integer(2), bits);
  Integer scaled = floor(x * Rational(ipow(scale, n)));
  Integer r = iroot(scaled, n);
  Rational lo = make_rational(r, scale);
  if (ipow(r, n) == scaled && Rational(scaled) == x * Rational(ipow(scale, n))) return {lo, lo};
  return {lo, make_rational(r + 1, scale)};
}

std::vector<Integer> positive_divisors(const Integer& n) {
  Integer m = abs(n);
  if (m == 0) throw std::invalid_argument("divisors of zero");
  if (!m.fits_ulong_p() || m > Integer("1000000000000000000"))
    throw std::overflow_error("value too large for divisor enumeration");
  unsigned long v = m.get_ui();
  std::vector<std::pair<unsigned long, int>> fac;
  for (unsigned long p = 2; p * p <= v; ++p) {
    int e = 0;
    while (v % p == 0) v /= p, ++e;
    if (e) fac.emplace_back(p, e);
  }
  if (v > 1) fac.emplace_back(v, 1);
  std::vector<Integer> divs = {Integer(1)};
  for (auto [p, e] : fac) {
    std::size_t base = divs.size();
    Integer pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(Integer(divs[i] * pk));
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::vector<Integer> prime_factors(const Integer& n) {
  std::vector<Integer> out;
  for (const auto& d : positive_divisors(n)) {
    if (d == 1) continue;
    bool prime = true;
    for (const auto& p : out)
      if (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) prime = false;
    if (prime) out.push_back(d);
  }
  return out;
}

}  // namespace dioph
