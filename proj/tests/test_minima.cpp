#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dioph/construct.hpp"
#include "dioph/errors.hpp"
#include "dioph/minima.hpp"

using namespace dioph;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }
const Rational kTol = R(1, 1000000000);

// Oracle rank: Gaussian elimination over Q from scratch.
int rank_of(std::vector<std::vector<Rational>> m) {
  int rank = 0;
  std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t i = c; i < cols; ++i) m[r][i] -= f * m[rank][i];
    }
    ++rank;
  }
  return rank;
}

// Oracle: exact norms over a full box for rational zeta and Q a perfect n-th power.
std::vector<Rational> oracle_minima(BodyKind kind, int n, long root, const Rational& zeta, double radius) {
  Rational Q = ipow(Integer(root), n);
  std::vector<std::pair<Rational, std::vector<Rational>>> pts;
  std::vector<Rational> zp(n + 1, Rational(1));
  for (int i = 1; i <= n; ++i) zp[i] = zp[i - 1] * zeta;
  const Rational bound(radius);
  if (kind == BodyKind::Simultaneous) {
    long X = static_cast<long>(radius * to_double(Q)) + 1;
    for (long x = 0; x <= X; ++x) {
      std::vector<long> lo(n + 1), hi(n + 1), y(n + 1);
      for (int i = 1; i <= n; ++i) {
        double c = to_double(zp[i]) * x, w = radius / root + 1;
        lo[i] = static_cast<long>(std::floor(c - w));
        hi[i] = static_cast<long>(std::ceil(c + w));
      }
      y = lo;
      while (true) {
        Rational d = 0;
        for (int i = 1; i <= n; ++i) d = std::max(d, abs(Rational(zp[i] * x - y[i])));
        Rational norm = std::max(Rational(Rational(x) / Q), Rational(root * d));
        std::vector<Rational> v = {Rational(x)};
        for (int i = 1; i <= n; ++i) v.emplace_back(y[i]);
        if (norm > 0 && norm <= bound) pts.emplace_back(norm, v);
        int i = 1;
        while (i <= n && ++y[i] > hi[i]) y[i] = lo[i], ++i;
        if (i > n) break;
      }
    }
  } else {
    long B = static_cast<long>(radius * root) + 1;
    std::vector<long> a(n + 1, -B);
    std::vector<double> zd(n + 1);
    for (int i = 0; i <= n; ++i) zd[i] = to_double(zp[i]);
    const double qd = to_double(Q);
    while (true) {
      double approx = 0;
      for (int i = 0; i <= n; ++i) approx += zd[i] * a[i];
      // generous margin: only a coarse pre-screen, the exact norm decides
      if (qd * std::fabs(approx) > radius * 2 + 1) {
        int i = 0;
        while (i <= n && ++a[i] > B) a[i] = -B, ++i;
        if (i > n) break;
        continue;
      }
      Rational val = 0, h = 0;
      for (int i = 0; i <= n; ++i) val += zp[i] * a[i], h = std::max(h, Rational(std::labs(a[i])));
      Rational norm = std::max(Rational(h / root), Rational(Q * abs(val)));
      if (h > 0 && norm <= bound) {
        std::vector<Rational> v;
        for (long e : a) v.emplace_back(e);
        pts.emplace_back(norm, v);
      }
      int i = 0;
      while (i <= n && ++a[i] > B) a[i] = -B, ++i;
      if (i > n) break;
    }
  }
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::vector<Rational>> chosen;
  std::vector<Rational> out;
  for (const auto& [norm, v] : pts) {
    chosen.push_back(v);
    if (rank_of(chosen) == static_cast<int>(chosen.size())) out.push_back(norm);
    else chosen.pop_back();
    if (static_cast<int>(out.size()) == n + 1) break;
  }
  return out;
}

std::vector<CFNumber> corpus_numbers() {
  return {cube_root_two().value, golden_ratio().value, build_bw(3, 1, 7).value};
}

}  // namespace

TEST_CASE("successive minima example: zeta = 1/2, n = 1, Q = 10") {
  MinimaBody b{BodyKind::Simultaneous, 1, R(10), CFNumber::from_rational(R(1, 2))};
  MinimaResult m = successive_minima(b, kTol);
  REQUIRE(m.complete);
  REQUIRE(m.lambdas.size() == 2);
  CHECK(m.lambdas[0].contains(R(1, 5)));
  CHECK(m.lambdas[1].contains(R(5)));
  CHECK(m.witnesses[0] == std::vector<Integer>{2, 1});
  CHECK(m.witnesses[1] == std::vector<Integer>{1, 0});
  Interval prod = m.lambdas[0] * m.lambdas[1];
  CHECK(prod.contains(R(1)));
  CHECK(prod.hi <= 1);
  CHECK(prod.lo >= R(1, 2));
}

TEST_CASE("psi examples and ranges") {
  CFNumber half = CFNumber::from_rational(R(1, 2));
  Interval p1 = psi(1, 1, R(10), half), p2 = psi(1, 2, R(10), half);
  CHECK(p1.contains(Rational(std::log10(0.2))));
  CHECK(p2.contains(Rational(std::log10(5.0))));
  CHECK(p1.width() < Rational(1e-7));
  Interval s = psi_star(1, 1, R(10), half);
  CHECK(s.lo >= Rational(-1 - std::log(2.0) / std::log(10.0)));
  CHECK_THROWS_AS(mahler_gap(1, 3, R(10), half), std::out_of_range);
  CHECK_THROWS_AS(mahler_gap(1, 0, R(10), half), std::out_of_range);
  CHECK_THROWS_AS(psi(1, 1, R(1), half), PreconditionViolation);
}

TEST_CASE("golden ratio: lambda_1 at Q = q_k is attained by the previous convergent") {
  CFNumber g = CFNumber::golden();
  for (std::size_t k = 3; k <= 14; ++k) {
    Convergent c = g.convergent(k), prev = g.convergent(k - 1);
    MinimaBody b{BodyKind::Simultaneous, 1, Rational(c.q), g};
    MinimaResult m = successive_minima(b, kTol);
    CHECK(m.witnesses[0] == std::vector<Integer>{prev.q, prev.p});
    // (q_k, p_k) itself sits on the boundary of the unit body
    CHECK(body_norm(b, {c.q, c.p}, kTol).contains(R(1)));
    CHECK(m.lambdas[0].hi < 1);
  }
}

TEST_CASE("psi_star of cube root of two at Q = 100, n = 2 stays in range") {
  Interval s = psi_star(2, 1, R(100), cube_root_two().value);
  double eps = std::log(2.0) / std::log(100.0);
  CHECK(s.lo >= Rational(-1 - eps));
  CHECK(s.hi <= Rational(1 + eps));
}

TEST_CASE("property: minima agree with an exact full-box oracle") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 2;
    long root = std::uniform_int_distribution<long>(2, n == 1 ? 30 : 4)(rng);
    long den = std::uniform_int_distribution<long>(2, n == 1 ? 25 : 9)(rng);
    long num = std::uniform_int_distribution<long>(1, 2 * den)(rng);
    Rational zeta = R(num, den);
    for (BodyKind kind : {BodyKind::Simultaneous, BodyKind::Dual}) {
      MinimaBody b{kind, n, Rational(ipow(Integer(root), n)), CFNumber::from_rational(zeta)};
      MinimaResult m = successive_minima(b, kTol);
      REQUIRE(m.complete);
      auto oracle = oracle_minima(kind, n, root, zeta, to_double(m.lambdas.back().hi) * 1.01);
      REQUIRE(oracle.size() == m.lambdas.size());
      for (std::size_t j = 0; j < oracle.size(); ++j) CHECK(m.lambdas[j].contains(oracle[j]));
    }
  }
}

TEST_CASE("property: monotone minima, independent witnesses, certified witness norms") {
  std::mt19937_64 rng(7);
  auto zs = corpus_numbers();
  for (int trial = 0; trial < 18; ++trial) {
    int n = 1 + trial % 3;
    long Q = std::uniform_int_distribution<long>(10, n == 3 ? 1000 : 5000)(rng);
    for (BodyKind kind : {BodyKind::Simultaneous, BodyKind::Dual}) {
      MinimaBody b{kind, n, R(Q), zs[trial % zs.size()]};
      MinimaResult m = successive_minima(b, kTol);
      if (!m.complete) continue;
      CHECK(integer_rank(m.witnesses) == n + 1);
      for (std::size_t j = 0; j < m.lambdas.size(); ++j) {
        if (j > 0) CHECK(m.lambdas[j - 1].lo <= m.lambdas[j].hi);
        Interval w = body_norm(b, m.witnesses[j], kTol);
        CHECK_FALSE(disjoint(w, m.lambdas[j]));
        CHECK(m.lambdas[j].width() <= kTol * m.lambdas[j].hi * 100);
      }
      if (kind == BodyKind::Dual) {
        // dual witnesses are polynomials whose value interval reproduces the claimed norm
        IntPoly P(m.witnesses[0]);
        Interval val = R(Q) * abs(eval_poly(P, b.zeta, kTol));
        CHECK(val.hi <= m.lambdas[0].hi);
      }
    }
  }
}

TEST_CASE("property: Minkowski product bracket on seeded simultaneous bodies") {
  std::mt19937_64 rng(99);
  auto zs = corpus_numbers();
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + trial % 3;
    long Q = std::uniform_int_distribution<long>(2, n == 3 ? 2000 : 10000)(rng);
    MinimaBody b{BodyKind::Simultaneous, n, R(Q), zs[(trial / 3) % zs.size()]};
    MinimaResult m = successive_minima(b, kTol);
    REQUIRE(m.complete);
    Interval prod(R(1));
    for (const auto& l : m.lambdas) prod = prod * l;
    Integer fact = 1;
    for (int k = 2; k <= n + 1; ++k) fact *= k;
    CHECK(prod.lo >= make_rational(1, fact));
    CHECK(prod.hi <= 1);
  }
}

TEST_CASE("Mahler duality residual shrinks for the cube root of two, n = 2") {
  auto rows = trajectory(2, {R(100), R(1000), R(10000)}, cube_root_two().value);
  REQUIRE(rows.size() == 9);
  auto residual = [&](std::size_t q) {
    Rational worst = 0;
    for (int j = 0; j < 3; ++j) worst = std::max(worst, rows[q * 3 + j].gap.magnitude());
    return worst;
  };
  for (std::size_t q = 0; q < 3; ++q)
    CHECK(to_double(residual(q)) * std::log(to_double(rows[q * 3].Q)) <= kMahlerResidualC);
  CHECK(residual(2) < residual(0));
  std::string csv = trajectory_csv(rows);
  CHECK(csv.rfind("Q,j,psi_lo,psi_hi,psi_star_lo,psi_star_hi,gap_lo,gap_hi\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("property: residual calibration corpus") {
  // each residual times log Q stays below the constant, and never more than doubles along the grid
  std::vector<Rational> grid = {R(100), R(1000), R(10000)};
  std::vector<std::pair<CFNumber, int>> corpus;
  for (int n = 1; n <= 3; ++n) corpus.emplace_back(cube_root_two().value, n);
  for (int n = 1; n <= 2; ++n) corpus.emplace_back(golden_ratio().value, n);
  double worst = 0;
  for (const auto& [z, n] : corpus) {
    auto rows = trajectory(n, grid, z);
    std::vector<Rational> res(grid.size(), Rational(0));
    for (const auto& r : rows) {
      std::size_t q = std::find(grid.begin(), grid.end(), r.Q) - grid.begin();
      res[q] = std::max(res[q], r.gap.magnitude());
    }
    for (std::size_t q = 0; q < grid.size(); ++q) {
      double scaled = to_double(res[q]) * std::log(to_double(grid[q]));
      worst = std::max(worst, scaled);
      CHECK(scaled <= kMahlerResidualC);
      if (q > 0) CHECK(res[q] <= 2 * res[q - 1]);
    }
  }
  MESSAGE("largest residual * log Q " << worst);
}

TEST_CASE("exponent_from_trajectory") {
  CHECK_THROWS_AS(exponent_from_trajectory(1, 1, {}, golden_ratio().value, BodyKind::Simultaneous),
                  std::invalid_argument);
  PsiSummary g = exponent_from_trajectory(1, 1, {R(10), R(100), R(1000), R(10000)}, golden_ratio().value,
                                          BodyKind::Simultaneous);
  // badly approximable: psi_{1,1} stays in a narrow band strictly inside (-1, 0)
  CHECK(g.low.lo > Rational(-0.5));
  CHECK(g.high.hi < 0);
  PsiSummary b = exponent_from_trajectory(1, 1, {R(10), R(30), R(100), R(300), R(1000), R(3000), R(10000)},
                                          build_bw(3, 1, 7).value, BodyKind::Simultaneous);
  CHECK(b.oscillation_certified);
  MESSAGE("B_3 psi_{1,1} band [" << to_double(b.low.lo) << ", " << to_double(b.high.hi) << "]");
}
