#include "dioph/poly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

using QPoly = std::vector<Rational>;  // constant term first, no trailing zeros

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly to_q(const IntPoly& P) {
  QPoly out;
  for (const auto& c : P.coeffs()) out.emplace_back(c);
  return out;
}

Rational eval_q(const QPoly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

QPoly derivative_q(const QPoly& p) {
  QPoly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * Rational(static_cast<unsigned long>(i)));
  trim(out);
  return out;
}

// remainder of a by b over Q, b nonzero
QPoly rem_q(QPoly a, const QPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

QPoly quo_q(QPoly a, const QPoly& b) {
  if (a.size() < b.size()) return {};
  QPoly q(a.size() - b.size() + 1);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return q;
}

QPoly gcd_q(QPoly a, QPoly b) {
  while (!b.empty()) {
    QPoly r = rem_q(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

QPoly squarefree(const IntPoly& P) {
  QPoly p = to_q(P);
  QPoly g = gcd_q(p, derivative_q(p));
  return quo_q(p, g);
}

std::vector<QPoly> sturm_chain(const QPoly& s) {
  std::vector<QPoly> chain = {s, derivative_q(s)};
  while (!chain.back().empty()) {
    QPoly r = rem_q(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  if (chain.back().empty()) chain.pop_back();
  return chain;
}

int sign_variations(const std::vector<QPoly>& chain, const Rational& x) {
  int count = 0, last = 0;
  for (const auto& p : chain) {
    int s = sgn(eval_q(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

// exact quotient P / A in Z[T], if any
std::optional<IntPoly> divide_exact(const IntPoly& P, const IntPoly& A) {
  if (A.is_zero()) return std::nullopt;
  std::vector<Integer> r = P.coeffs();
  int da = A.degree();
  if (P.degree() < da) return P.is_zero() ? std::optional<IntPoly>(IntPoly()) : std::nullopt;
  std::vector<Integer> q(P.degree() - da + 1);
  const Integer& la = A.leading();
  for (int i = P.degree(); i >= da; --i) {
    if (r[i] == 0) continue;
    if (!mpz_divisible_p(r[i].get_mpz_t(), la.get_mpz_t())) return std::nullopt;
    Integer f = r[i] / la;
    q[i - da] = f;
    for (int j = 0; j <= da; ++j) r[i - da + j] -= f * A.coeffs()[j];
  }
  for (const auto& c : r)
    if (c != 0) return std::nullopt;
  return IntPoly(std::move(q));
}

// quadratic factor of a degree-4 polynomial without rational roots
std::optional<IntPoly> quadratic_factor(const IntPoly& P) {
  Integer bound = 16 * P.height();
  for (const auto& a2 : positive_divisors(P.leading()))
    for (const auto& d0 : positive_divisors(P.coeff(0)))
      for (int s : {1, -1})
        for (Integer a1 = -bound; a1 <= bound; ++a1) {
          IntPoly A(std::vector<Integer>{Integer(s * d0), a1, a2});
          if (divide_exact(P, A)) return A;
        }
  return std::nullopt;
}

Integer homogeneous_value(const IntPoly& P, const Integer& p, const Integer& q) {
  // sum c_i p^i q^(n-i)
  Integer acc = 0, pp = 1;
  int n = P.degree();
  for (int i = 0; i <= n; ++i) {
    acc += P.coeffs()[i] * pp * ipow(q, n - i);
    pp *= p;
  }
  return acc;
}

}  // namespace

IntPoly product(const IntPoly& P, const IntPoly& Q) { return P * Q; }

std::vector<Rational> rational_roots(const IntPoly& P) {
  if (P.is_zero()) throw std::invalid_argument("rational roots of the zero polynomial");
  std::vector<Rational> roots;
  std::size_t k = 0;
  while (k < P.coeffs().size() && P.coeffs()[k] == 0) ++k;
  if (k > 0) roots.emplace_back(0);
  IntPoly R(std::vector<Integer>(P.coeffs().begin() + k, P.coeffs().end()));
  if (R.degree() >= 1) {
    auto dens = positive_divisors(R.leading());
    auto nums = positive_divisors(R.coeff(0));
    for (const auto& q : dens)
      for (const auto& p0 : nums) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), p0.get_mpz_t(), q.get_mpz_t());
        if (g != 1) continue;
        for (int s : {1, -1}) {
          Integer p = s * p0;
          if (homogeneous_value(R, p, q) == 0) roots.push_back(make_rational(p, q));
        }
      }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

bool has_linear_factor(const IntPoly& P) {
  IntPoly pp = P.primitive_part();
  if (pp.degree() <= 0) return false;
  if (pp.degree() == 1) return true;
  return !rational_roots(pp).empty();
}

bool is_irreducible(const IntPoly& P) {
  if (P.degree() < 1 || P.degree() > 4)
    throw UnsupportedDegree("irreducibility is decided for degrees 1..4 only, got " + std::to_string(P.degree()));
  if (P.content() != 1) throw PreconditionViolation("irreducibility test needs a primitive polynomial");
  if (P.degree() == 1) return true;
  if (has_linear_factor(P)) return false;
  if (P.degree() <= 3) return true;
  return !quadratic_factor(P).has_value();
}

std::vector<std::pair<IntPoly, int>> factor_small(const IntPoly& P) {
  if (P.degree() < 1) return {};
  IntPoly R = P.primitive_part();
  std::vector<std::pair<IntPoly, int>> out;
  for (const auto& r : rational_roots(R)) {
    IntPoly L(std::vector<Integer>{Integer(-r.get_num()), r.get_den()});
    int mult = 0;
    while (auto q = divide_exact(R, L)) {
      R = *q;
      ++mult;
    }
    out.emplace_back(L, mult);
  }
  R = R.primitive_part();
  if (R.degree() <= 0) return out;
  if (R.degree() > 4) throw UnsupportedDegree("factorization needs the part without rational roots to have degree <= 4");
  if (R.degree() <= 3) {
    out.emplace_back(R, 1);
    return out;
  }
  if (auto A = quadratic_factor(R)) {
    IntPoly a = A->primitive_part();
    IntPoly b = divide_exact(R, a)->primitive_part();
    if (a == b) out.emplace_back(a, 2);
    else {
      out.emplace_back(a, 1);
      out.emplace_back(b, 1);
    }
  } else {
    out.emplace_back(R, 1);
  }
  return out;
}

std::vector<Interval> isolate_real_roots(const IntPoly& P, const Rational& max_width) {
  if (P.is_zero()) throw std::invalid_argument("roots of the zero polynomial");
  QPoly s = squarefree(P);
  if (s.size() <= 1) return {};
  auto chain = sturm_chain(s);
  Rational cauchy = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) cauchy = std::max(cauchy, abs(Rational(s[i] / s.back())));
  cauchy += 1;
  Rational B = 1;
  while (B <= cauchy) B *= 2;

  std::vector<Interval> out;
  std::vector<std::pair<Rational, Rational>> stack = {{-B, B}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    int count = sign_variations(chain, a) - sign_variations(chain, b);
    if (count == 0) continue;
    if (count == 1 && b - a <= max_width) {
      out.emplace_back(a, b);
      continue;
    }
    // split point that is not a root
    Rational m = (a + b) / 2;
    for (long k = 3; eval_q(s, m) == 0; k += 2) m = a + (b - a) * make_rational(k - 1, 2 * k);
    stack.emplace_back(a, m);
    stack.emplace_back(m, b);
  }
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  for (const auto& r : rational_roots(P))
    for (auto& I : out)
      if (I.lo < r && r < I.hi) I = Interval(r);
  return out;
}

Interval refine_root(const IntPoly& P, Interval I, const Rational& tol) {
  if (I.is_point()) return I;
  QPoly s = squarefree(P);
  int slo = sgn(eval_q(s, I.lo));
  while (I.width() > tol) {
    Rational m = I.mid();
    int sm = sgn(eval_q(s, m));
    if (sm == 0) return Interval(m);
    if (sm == slo) I.lo = m;
    else I.hi = m;
  }
  return I;
}

namespace {

AlgebraicWitness make_witness(const IntPoly& P, const Interval& I) {
  for (const auto& [F, mult] : factor_small(P)) {
    (void)mult;
    bool inside = false;
    if (F.degree() == 1) {
      Rational r = make_rational(-F.coeff(0), F.coeff(1));
      inside = I.is_point() ? r == I.lo : (I.lo < r && r < I.hi);
    } else if (!I.is_point()) {
      auto chain = sturm_chain(to_q(F));
      inside = sign_variations(chain, I.lo) - sign_variations(chain, I.hi) == 1;
    }
    if (inside) {
      AlgebraicWitness w;
      w.minimal_polynomial = F;
      w.isolating = I;
      w.degree = F.degree();
      w.height = F.height();
      w.monic = F.is_monic();
      return w;
    }
  }
  throw std::logic_error("isolated root not found among the factors");
}

}  // namespace

NearestRoot nearest_root(const IntPoly& P, const CFNumber& zeta, const Rational& tol) {
  auto roots = isolate_real_roots(P);
  if (roots.empty()) throw NoWitness("polynomial " + P.str() + " has no real roots");
  Rational eps = tol / 4;
  std::size_t best = 0;
  std::vector<Interval> dist(roots.size());
  for (int round = 0;; ++round) {
    Interval z = zeta.enclose(eps);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      roots[i] = refine_root(P, roots[i], eps);
      dist[i] = abs(z - roots[i]);
    }
    best = 0;
    for (std::size_t i = 1; i < roots.size(); ++i)
      if (dist[i].hi < dist[best].hi) best = i;
    bool separated = true;
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (i != best && dist[i].lo <= dist[best].hi) separated = false;
    if ((separated && dist[best].width() <= tol) || round >= 40) {
      if (!separated) {
        // unresolved tie: smallest root among the overlapping candidates
        for (std::size_t i = 0; i < roots.size(); ++i)
          if (!disjoint(dist[i], dist[best])) {
            best = i;
            break;
          }
      }
      break;
    }
    eps /= 1 << 16;
  }
  return {make_witness(P, roots[best]), dist[best]};
}

WitnessBound witness_convert(const IntPoly& P, const CFNumber& zeta, const AlgebraicWitness& alpha,
                             const Rational& tol) {
  Interval z = zeta.enclose(tol);
  Interval a = refine_root(alpha.minimal_polynomial, alpha.isolating, tol);
  Interval az = abs(z), aa = abs(a);
  Interval mx(std::max(az.lo, aa.lo), std::max(az.hi, aa.hi));
  Interval one(Rational(1));
  Rational D(P.degree()), H(P.height());
  WitnessBound out;
  out.lhs = abs(P.eval(z));
  out.rhs = (D * H) * (pow(one + mx, P.degree() - 1) * abs(z - a));
  // degree 1: |P(zeta)| = |a_1| |zeta - alpha| with |a_1| <= H, equality is typical so intervals cannot decide
  out.holds = P.degree() == 1 ? true : out.lhs.hi <= out.rhs.lo;
  return out;
}

Rational gelfond_ratio(const IntPoly& P, const IntPoly& Q) {
  return make_rational((P * Q).height(), P.height() * Q.height());
}

GelfondSweep gelfond_exhaustive(int max_degree_sum, int max_height) {
  using Coeffs = std::array<long, 8>;
  auto polys_of_degree = [&](int d) {
    std::vector<Coeffs> out;
    Coeffs c{};
    std::function<void(int)> rec = [&](int i) {
      if (i < 0) {
        out.push_back(c);
        return;
      }
      int lo = i == d ? 1 : -max_height;
      for (int v = lo; v <= max_height; ++v) {
        c[i] = v;
        rec(i - 1);
      }
      c[i] = 0;
    };
    rec(d);
    return out;
  };
  auto height = [](const Coeffs& c, int d) {
    long h = 0;
    for (int i = 0; i <= d; ++i) h = std::max(h, std::labs(c[i]));
    return h;
  };
  auto to_poly = [](const Coeffs& c, int d) {
    std::vector<Integer> v;
    for (int i = 0; i <= d; ++i) v.emplace_back(c[i]);
    return IntPoly(std::move(v));
  };

  GelfondSweep out;
  out.min_ratio = 1e300;
  out.max_ratio = 0;
  out.min_lower_margin = out.min_upper_margin = 1e300;
  std::vector<std::vector<Coeffs>> by_degree(max_degree_sum + 1);
  for (int d = 1; d < max_degree_sum; ++d) by_degree[d] = polys_of_degree(d);
  for (int dp = 1; dp < max_degree_sum; ++dp)
    for (int dq = dp; dp + dq <= max_degree_sum; ++dq) {
      int d = dp + dq;
      for (std::size_t i = 0; i < by_degree[dp].size(); ++i) {
        const Coeffs& p = by_degree[dp][i];
        long hp = height(p, dp);
        for (std::size_t j = dp == dq ? i : 0; j < by_degree[dq].size(); ++j) {
          const Coeffs& q = by_degree[dq][j];
          Coeffs r{};
          for (int a = 0; a <= dp; ++a)
            for (int b = 0; b <= dq; ++b) r[a + b] += p[a] * q[b];
          long hr = height(r, d), hpq = hp * height(q, dq);
          ++out.pairs;
          bool low = (hr << d) < hpq, high = hr > (d + 1) * hpq;
          if (low || high) ++out.violations;
          double ratio = static_cast<double>(hr) / static_cast<double>(hpq);
          double lower_margin = ratio * std::ldexp(1.0, d), upper_margin = (d + 1) / ratio;
          if (ratio < out.min_ratio) {
            out.min_ratio = ratio;
            out.min_P = to_poly(p, dp);
            out.min_Q = to_poly(q, dq);
          }
          if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.max_P = to_poly(p, dp);
            out.max_Q = to_poly(q, dq);
          }
          out.min_lower_margin = std::min(out.min_lower_margin, lower_margin);
          out.min_upper_margin = std::min(out.min_upper_margin, upper_margin);
        }
      }
    }
  return out;
}

}  // namespace dioph
