#include <doctest.h>

#include <cmath>
#include <random>

#include "dioph/errors.hpp"
#include "dioph/poly.hpp"

using namespace dioph;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

IntPoly random_poly(std::mt19937_64& rng, int degree, long height) {
  std::uniform_int_distribution<long> c(-height, height), lead(1, height);
  std::vector<Integer> v;
  for (int i = 0; i < degree; ++i) v.emplace_back(c(rng));
  v.emplace_back(lead(rng));
  return IntPoly(std::move(v));
}

// Oracle: scan every fraction a/b with |a|, |b| <= bound.
std::vector<Rational> scan_roots(const IntPoly& P, long bound) {
  std::vector<Rational> out;
  for (long b = 1; b <= bound; ++b)
    for (long a = -bound; a <= bound; ++a) {
      Rational x = R(a, b);
      if (x.get_den() != b) continue;
      if (P.eval(x) == 0) out.push_back(x);
    }
  std::sort(out.begin(), out.end());
  return out;
}

// Oracle: remainder of P by A over Q by schoolbook division.
bool divides(const IntPoly& A, const IntPoly& P) {
  std::vector<Rational> r(P.coeffs().begin(), P.coeffs().end());
  int da = A.degree();
  for (int i = P.degree(); i >= da; --i) {
    Rational f = r[i] / Rational(A.leading());
    for (int j = 0; j <= da; ++j) r[i - da + j] -= f * Rational(A.coeffs()[j]);
  }
  for (const auto& c : r)
    if (c != 0) return false;
  return true;
}

// Oracle: exhaustive search for a factor of degree 1 or 2 with middle coefficient up to 48.
bool reducible_by_search(const IntPoly& P) {
  int d = P.degree();
  long lead = std::labs(P.leading().get_si()), c0 = std::labs(P.coeff(0).get_si());
  if (c0 == 0) return d >= 2;
  for (long u = 1; u <= lead; ++u) {
    if (lead % u) continue;
    for (long v = -c0; v <= c0; ++v) {
      if (v == 0 || c0 % std::labs(v)) continue;
      if (divides(IntPoly{v, u}, P) && d >= 2) return true;
      if (d == 4)
        for (long m = -48; m <= 48; ++m)
          if (divides(IntPoly{v, m, u}, P)) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("product examples and heights") {
  CHECK(product(IntPoly{1, 1}, IntPoly{-1, 1}) == IntPoly{-1, 0, 1});
  IntPoly pq = product(IntPoly{3, 2}, IntPoly{2, 3});
  CHECK(pq == IntPoly{6, 13, 6});
  CHECK(pq.height() == 13);
  CHECK(IntPoly{3, 2}.height() * IntPoly{2, 3}.height() == 9);
  IntPoly sq = product(IntPoly{-1, 1}, IntPoly{-1, 1});
  CHECK(sq.height() == 2);
  CHECK(IntPoly{-1, 1}.height() * IntPoly{-1, 1}.height() == 1);
  CHECK(IntPoly{-1, 1, 2}.str() == "2T^2+T-1");
}

TEST_CASE("rational_roots examples") {
  CHECK(rational_roots(IntPoly{-1, 1, 2}) == std::vector<Rational>{R(-1), R(1, 2)});
  CHECK(rational_roots(IntPoly{1, 0, 1}).empty());
  CHECK(rational_roots(IntPoly{0, 0, 0, 1}) == std::vector<Rational>{R(0)});
}

TEST_CASE("has_linear_factor examples") {
  CHECK_FALSE(has_linear_factor(IntPoly{-3, 3, 1}));
  CHECK(has_linear_factor(IntPoly{-1, 1, 2}));
  CHECK(has_linear_factor(IntPoly{0, 0, 1}));
  CHECK(has_linear_factor(IntPoly{4, 2}));
}

TEST_CASE("is_irreducible examples and domain") {
  CHECK(is_irreducible(IntPoly{1, 1, 1}));
  CHECK(is_irreducible(IntPoly{2, 2, 2, 1}));
  CHECK(is_irreducible(IntPoly{1, 0, 0, 0, 1}));
  CHECK_FALSE(is_irreducible(IntPoly{4, 0, 0, 0, 1}));  // (T^2+2T+2)(T^2-2T+2)
  CHECK_FALSE(is_irreducible(IntPoly{1, 0, 2, 0, 1}));  // (T^2+1)^2
  CHECK_THROWS_AS(is_irreducible(IntPoly{1, 0, 0, 0, 0, 1}), UnsupportedDegree);
  CHECK_THROWS_AS(is_irreducible(IntPoly{3}), UnsupportedDegree);
  CHECK_THROWS_AS(is_irreducible(IntPoly{2, 2}), PreconditionViolation);
}

TEST_CASE("factor_small") {
  auto f = factor_small(IntPoly{4, 0, 0, 0, 1});
  REQUIRE(f.size() == 2);
  CHECK(f[0].first * f[1].first == IntPoly{4, 0, 0, 0, 1});
  auto g = factor_small(product(product(IntPoly{-1, 1}, IntPoly{-1, 1}), IntPoly{-2, 0, 1}));
  REQUIRE(g.size() == 2);
  CHECK(g[0].first == IntPoly{-1, 1});
  CHECK(g[0].second == 2);
  CHECK(g[1].first == IntPoly{-2, 0, 1});
}

TEST_CASE("isolate_real_roots examples") {
  auto r = isolate_real_roots(IntPoly{-2, 0, 1});
  REQUIRE(r.size() == 2);
  CHECK(r[0].lo >= R(-3, 2));
  CHECK(r[0].hi <= R(-1));
  CHECK(r[1].lo >= R(1));
  CHECK(r[1].hi <= R(3, 2));
  CHECK(isolate_real_roots(IntPoly{1, 0, 1}).empty());
  auto c = isolate_real_roots(IntPoly{0, -1, 0, 1});
  REQUIRE(c.size() == 3);
  CHECK(c[1] .is_point());
  CHECK(c[1].lo == 0);
}

TEST_CASE("nearest_root examples") {
  auto sqrt2 = nearest_root(IntPoly{-2, 0, 1}, CFNumber::from_rational(R(7, 5)), R(1, 1000000000));
  CHECK(sqrt2.witness.minimal_polynomial == IntPoly{-2, 0, 1});
  CHECK(sqrt2.witness.degree == 2);
  CHECK(sqrt2.witness.monic);
  CHECK(std::fabs(to_double(sqrt2.distance.mid()) - 0.014213) < 1e-6);

  auto zero = nearest_root(IntPoly{0, -1, 0, 1}, CFNumber::from_rational(R(2, 5)), R(1, 1000));
  CHECK(zero.witness.isolating == Interval(R(0)));
  CHECK(zero.witness.minimal_polynomial == IntPoly{0, 1});
  CHECK(zero.distance.lo == R(2, 5));
  CHECK(zero.distance.hi == R(2, 5));

  auto tie = nearest_root(product(IntPoly{-1, 1}, IntPoly{-3, 1}), CFNumber::from_rational(R(2)), R(1, 1000));
  CHECK(tie.witness.isolating == Interval(R(1)));
  CHECK(tie.distance == Interval(R(1)));

  CHECK_THROWS_AS(nearest_root(IntPoly{1, 0, 1}, CFNumber::golden(), R(1, 100)), NoWitness);
}

TEST_CASE("witness_convert examples") {
  const Rational tol = R(1, 1000000000);
  auto a = nearest_root(IntPoly{-2, 0, 1}, CFNumber::from_rational(R(7, 5)), tol);
  auto b = witness_convert(IntPoly{-2, 0, 1}, CFNumber::from_rational(R(7, 5)), a.witness, tol);
  CHECK(b.holds);
  CHECK(b.lhs == Interval(R(1, 25)));
  CHECK(std::fabs(to_double(b.rhs.mid()) - 0.1373) < 1e-4);

  auto g = nearest_root(IntPoly{-1, -1, 1}, CFNumber::from_rational(R(3, 2)), tol);
  auto c = witness_convert(IntPoly{-1, -1, 1}, CFNumber::from_rational(R(3, 2)), g.witness, tol);
  CHECK(c.holds);
  CHECK(c.lhs == Interval(R(1, 4)));
  CHECK(std::fabs(to_double(c.rhs.mid()) - 0.618) < 1e-3);
}

TEST_CASE("property: rational_roots agrees with a fraction scan") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    std::uniform_int_distribution<int> deg(1, 4);
    IntPoly P = random_poly(rng, deg(rng), 6);
    if (trial % 3 == 0) P = product(P, IntPoly{static_cast<long>(trial % 5) - 2, 1 + trial % 3});
    long bound = P.height().get_si() + 1;
    CHECK(rational_roots(P) == scan_roots(P, bound));
  }
}

TEST_CASE("property: is_irreducible agrees with exhaustive factor search (degree <= 4, height <= 3)") {
  std::size_t checked = 0;
  for (int d = 1; d <= 4; ++d) {
    std::vector<long> c(d + 1, -3);
    c[d] = 1;
    while (true) {
      IntPoly P(std::vector<Integer>(c.begin(), c.end()));
      if (P.content() == 1) {
        CHECK(is_irreducible(P) == !reducible_by_search(P));
        ++checked;
      }
      int i = 0;
      while (i <= d && ++c[i] > 3) {
        c[i] = i == d ? 1 : -3;
        ++i;
      }
      if (i > d) break;
    }
  }
  MESSAGE("checked " << checked << " primitive polynomials");
  CHECK(checked > 8000);
}

TEST_CASE("property: isolating intervals contain exactly the sign changes") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    std::uniform_int_distribution<int> deg(1, 5);
    IntPoly P = random_poly(rng, deg(rng), 9);
    auto roots = isolate_real_roots(P, R(1, 64));
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const Interval& I = roots[i];
      if (I.is_point()) {
        CHECK(P.eval(I.lo) == 0);
      } else {
        CHECK(I.width() <= R(1, 64));
        CHECK(sgn(P.eval(I.lo)) * sgn(P.eval(I.hi)) < 0);  // random P is squarefree here
      }
      if (i > 0) CHECK(roots[i - 1].hi <= I.lo);
    }
  }
}

TEST_CASE("Gelfond ratio bracket on a small exhaustive sweep") {
  GelfondSweep s = gelfond_exhaustive(4, 2);
  MESSAGE("pairs " << s.pairs << " ratio range [" << s.min_ratio << ", " << s.max_ratio << "] min "
                   << s.min_P.str() << " * " << s.min_Q.str() << " max " << s.max_P.str() << " * "
                   << s.max_Q.str());
  CHECK(s.pairs > 0);
  CHECK(s.violations == 0);
  CHECK(gelfond_ratio(IntPoly{3, 2}, IntPoly{2, 3}) == R(13, 9));
}
