#include "dioph/prime_filter.hpp"

#include <random>

#include "dioph/errors.hpp"
#include "dioph/poly.hpp"

namespace dioph {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin(u64 n) {
  if (n < 2) return false;
  static const u64 bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : bases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) d /= 2, ++s;
  for (u64 a : bases) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

// Coefficients as a_k (of Q) and b_k (of P) with the index convention of the invariants.
struct Coeffs {
  std::vector<Integer> a, b;
  int n;
};

Coeffs coeffs_of(const FilterInstance& inst) {
  Coeffs c;
  c.n = inst.n;
  for (int k = 0; k <= inst.n; ++k) {
    c.a.push_back(inst.Q.coeff(k));
    c.b.push_back(inst.P.coeff(k));
  }
  return c;
}

bool has_root(const IntPoly& F, const Rational& r) { return F.eval(r) == 0; }

void add_prime_if(std::set<Integer>& out, const Integer& p, bool bad) {
  if (bad) out.insert(p);
}

// Candidate primes for R_p = Q + pP with a root x/y in lowest terms: y | a_n and x | p b_0,
// so either x = s | b_0, which fixes p = -Q(x/y)/P(x/y), or x = p s with p dividing s, y or the
// first nonzero c_k = s a_k + b_{k-1} y.
void scan_R(const FilterInstance& inst, const Coeffs& c, std::set<Integer>& out) {
  auto ys = positive_divisors(c.a[c.n]);
  auto ss = positive_divisors(c.b[0]);
  for (const auto& y : ys)
    for (const auto& s0 : ss)
      for (int sign : {1, -1}) {
        Integer s = sign * s0;
        Rational r = make_rational(s, y);
        Rational Pv = inst.P.eval(r), Qv = inst.Q.eval(r);
        if (Pv != 0) {
          Rational p = -Qv / Pv;
          if (p.get_den() == 1 && p > 1 && is_prime(p.get_num())) add_prime_if(out, p.get_num(), has_root(R_p(inst, p.get_num()), r));
        }
        std::vector<Integer> cands = prime_factors(s);
        for (const auto& f : prime_factors(y)) cands.push_back(f);
        for (int k = 1; k <= c.n; ++k) {
          Integer ck = s * c.a[k] + c.b[k - 1] * y;
          if (ck == 0) continue;
          for (const auto& f : prime_factors(ck)) cands.push_back(f);
          break;
        }
        for (const auto& p : cands) add_prime_if(out, p, has_root(R_p(inst, p), make_rational(p * s, y)));
      }
}

// Candidate primes for S_p = P + pQ with a root x/y: x | b_0 and y | p a_n, so either y = t | a_n,
// fixing p = -P(x/y)/Q(x/y), or y = p t with p dividing x, t or the first nonzero
// d_m = b_{n-m} t + a_{n-m+1} x.
void scan_S(const FilterInstance& inst, const Coeffs& c, std::set<Integer>& out) {
  auto ts = positive_divisors(c.a[c.n]);
  auto xs = positive_divisors(c.b[0]);
  for (const auto& t : ts)
    for (const auto& x0 : xs)
      for (int sign : {1, -1}) {
        Integer x = sign * x0;
        Rational r = make_rational(x, t);
        Rational Pv = inst.P.eval(r), Qv = inst.Q.eval(r);
        if (Qv != 0) {
          Rational p = -Pv / Qv;
          if (p.get_den() == 1 && p > 1 && is_prime(p.get_num())) add_prime_if(out, p.get_num(), has_root(S_p(inst, p.get_num()), r));
        }
        std::vector<Integer> cands = prime_factors(x);
        for (const auto& f : prime_factors(t)) cands.push_back(f);
        for (int m = 1; m <= c.n; ++m) {
          Integer dm = c.b[c.n - m] * t + c.a[c.n - m + 1] * x;
          if (dm == 0) continue;
          for (const auto& f : prime_factors(dm)) cands.push_back(f);
          break;
        }
        for (const auto& p : cands) add_prime_if(out, p, has_root(S_p(inst, p), make_rational(x, p * t)));
      }
}

}  // namespace

FilterInstance make_instance(const IntPoly& P, const IntPoly& Q) {
  FilterInstance inst{P, Q, Q.degree(), std::max(P.height(), Q.height())};
  int n = inst.n;
  if (n < 2) throw PreconditionViolation("Q must have degree n >= 2");
  if (Q.coeff(0) != 0) throw PreconditionViolation("Q(0) must be 0");
  if (P.is_zero() || P.degree() > n - 1) throw PreconditionViolation("P must be nonzero of degree <= n-1");
  if (P.coeff(0) == 0) throw PreconditionViolation("b_0 must be nonzero");
  bool proportional = true;  // (a_1..a_n) ~ (b_0..b_{n-1}): a_{k+1} b_0 == b_k a_1 for all k
  for (int k = 0; k < n; ++k)
    if (Q.coeff(k + 1) * P.coeff(0) != P.coeff(k) * Q.coeff(1)) proportional = false;
  if (proportional) throw PreconditionViolation("coefficient vectors of Q/T and P are proportional");
  for (const auto& r : rational_roots(P))
    if (Q.eval(r) == 0) throw PreconditionViolation("P and Q share a linear factor");
  return inst;
}

IntPoly combine(const FilterInstance& inst, const Integer& a, const Integer& b) { return a * inst.Q + b * inst.P; }
IntPoly R_p(const FilterInstance& inst, const Integer& p) { return combine(inst, 1, p); }
IntPoly S_p(const FilterInstance& inst, const Integer& p) { return combine(inst, p, 1); }

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (n.fits_ulong_p()) return miller_rabin(n.get_ui());
  if (mpz_even_p(n.get_mpz_t())) return false;
  Integer r = iroot(n, 2);
  for (Integer d = 3; d <= r; d += 2)
    if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) return false;
  return true;
}

Integer next_prime(const Integer& n) {
  Integer c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

std::set<Integer> all_bad_primes(const FilterInstance& inst) {
  Coeffs c = coeffs_of(inst);
  std::set<Integer> out;
  scan_R(inst, c, out);
  scan_S(inst, c, out);
  std::set<Integer> confirmed;
  for (const auto& p : out)
    if (has_linear_factor(R_p(inst, p)) || has_linear_factor(S_p(inst, p))) confirmed.insert(p);
  return confirmed;
}

std::set<Integer> bad_primes(const FilterInstance& inst, const Integer& bound) {
  std::set<Integer> out;
  for (const auto& p : all_bad_primes(inst))
    if (p <= bound) out.insert(p);
  return out;
}

Integer find_good_prime(const FilterInstance& inst) {
  for (Integer p = 2;; p = next_prime(p))
    if (!has_linear_factor(R_p(inst, p)) && !has_linear_factor(S_p(inst, p))) return p;
}

Integer theorem_bound(int n, const Integer& X) { return n * ipow(X, n + 1); }

std::pair<Integer, IntPoly> irreducible_combination(const IntPoly& P, const IntPoly& Q) {
  if (Q.degree() != 2 && Q.degree() != 3)
    throw UnsupportedDegree("irreducible combination is claimed for n in {2, 3} only");
  FilterInstance inst = make_instance(P, Q);
  Integer p = find_good_prime(inst);
  IntPoly R = R_p(inst, p);
  if (!is_irreducible(R.primitive_part())) throw std::logic_error("good prime produced a reducible R_p");
  return {p, R};
}

std::set<Integer> bad_primes_by_scan(const FilterInstance& inst, const Integer& bound) {
  std::set<Integer> out;
  for (Integer p = 2; p <= bound; p = next_prime(p))
    if (has_linear_factor(R_p(inst, p)) || has_linear_factor(S_p(inst, p))) out.insert(p);
  return out;
}

std::vector<FilterInstance> random_instances(std::uint64_t seed, std::size_t count, int max_n, long max_X) {
  std::mt19937_64 rng(seed);
  std::vector<FilterInstance> out;
  while (out.size() < count) {
    int n = std::uniform_int_distribution<int>(2, max_n)(rng);
    long X = std::uniform_int_distribution<long>(1, max_X)(rng);
    std::uniform_int_distribution<long> coef(-X, X);
    std::vector<Integer> a(n + 1), b(n);
    for (int k = 1; k <= n; ++k) a[k] = coef(rng);
    int dP = std::uniform_int_distribution<int>(0, n - 1)(rng);
    for (int k = 0; k <= dP; ++k) b[k] = coef(rng);
    if (a[n] == 0 || b[0] == 0) continue;
    try {
      out.push_back(make_instance(IntPoly(b), IntPoly(a)));
    } catch (const PreconditionViolation&) {
    }
  }
  return out;
}

unsigned long divisor_count(const Integer& n) { return positive_divisors(n).size(); }

}  // namespace dioph
