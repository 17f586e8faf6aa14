#include <doctest.h>

#include <cmath>

#include "dioph/construct.hpp"
#include "dioph/errors.hpp"

using namespace dioph;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

std::vector<long> as_longs(const std::vector<Integer>& v) {
  std::vector<long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

// Independent oracle for floor(q^(a/b)): largest r with r^b <= q^a, by bisection.
Integer floor_pow_oracle(long q, long a, long b) {
  Integer target = ipow(Integer(q), a), lo = 0, hi = target + 1;
  while (hi - lo > 1) {
    Integer mid = (lo + hi) / 2;
    (ipow(mid, b) <= target ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("floor_pow examples and oracle agreement") {
  CHECK(floor_pow(2, R(2)) == 4);
  CHECK(floor_pow(9, R(2)) == 81);
  CHECK(floor_pow(10, R(3, 2)) == 31);
  for (long q = 1; q <= 40; ++q)
    for (long a = 0; a <= 6; ++a)
      for (long b = 1; b <= 4; ++b) CHECK(floor_pow(q, R(a, b)) == floor_pow_oracle(q, a, b));
}

TEST_CASE("B_w examples") {
  auto b2 = build_bw(R(2), 1, 5);
  CHECK(as_longs(b2.terms) == std::vector<long>{0, 2, 2, 5, 27, 734});
  std::vector<long> q2;
  for (std::size_t i = 0; i <= 4; ++i) q2.push_back(b2.value.convergent(i).q.get_si());
  CHECK(q2 == std::vector<long>{1, 2, 5, 27, 734});

  auto b3 = build_bw(R(3), 1, 4);
  CHECK(as_longs(b3.terms) == std::vector<long>{0, 2, 4, 81, 534361});
  std::vector<long> q3;
  for (std::size_t i = 0; i <= 3; ++i) q3.push_back(b3.value.convergent(i).q.get_si());
  CHECK(q3 == std::vector<long>{1, 2, 9, 731});
  CHECK(b3.value.convergent(3).p == 325);

  auto b1 = build_bw(R(1), 1, 6);
  CHECK(as_longs(b1.terms) == std::vector<long>{0, 2, 1, 1, 1, 1, 1});
}

TEST_CASE("B_w claims pairs only for w >= 2n - 1") {
  auto b5 = build_bw(R(5), 1, 3);
  REQUIRE(b5.claimed_Dnw.size() == 3);
  for (const auto& [n, w] : b5.claimed_Dnw) CHECK(w >= 2 * n - 1);
  CHECK(build_bw(R(3, 2), 1, 3).claimed_Dnw.size() == 1);
}

TEST_CASE("B_w bit budget truncates and flags") {
  auto b = build_bw(R(5), 1, 50, 2000);
  CHECK(b.overflow);
  CHECK(b.truncated);
  CHECK(b.terms.size() < 51);
}

TEST_CASE("strong Liouville examples") {
  auto s = build_strong_liouville(3);
  CHECK(as_longs(s.terms) == std::vector<long>{0, 2, 2, 25});
  CHECK(s.value.convergent(3).q == 127);
  CHECK(std::fabs(std::log(25.0) / std::log(2.0) - 4.64) < 0.01);
  auto two = build_strong_liouville(2);
  CHECK(two.truncated);
  CHECK(two.value.bracket(1).lo == R(2, 5));
  CHECK(two.value.bracket(1).is_point());
}

TEST_CASE("property: B_w denominators stay inside the growth band") {
  const Rational ws[] = {R(1), R(3, 2), R(2), R(5, 2), R(3), R(4), R(5)};
  for (const auto& w : ws) {
    for (long M = 1; M <= 3; ++M) {
      auto b = build_bw(w, M, 6);
      for (std::size_t j = 2; j < b.terms.size(); ++j) {
        Integer qj = b.value.convergent(j).q, qm = b.value.convergent(j - 1).q;
        CHECK(M * floor_pow(qm, w - 1) * qm < qj);
        // q_j <= M q_{j-1}^w + q_{j-1}, compared as q^(w*den) powers
        Integer lhs = qj - qm;
        unsigned long b_den = w.get_den().get_ui(), a_num = w.get_num().get_ui();
        CHECK(ipow(lhs, b_den) <= ipow(Integer(M), b_den) * ipow(qm, a_num));
      }
    }
  }
}

TEST_CASE("property: B_w slope brackets approach w") {
  const long ws[] = {2, 3, 4, 5};
  for (long w : ws) {
    auto b = build_bw(R(w), 1, 6);
    for (std::size_t j = 3; j + 1 < b.terms.size(); ++j) {
      auto [lo, hi] = convergent_slope_bracket(b.value, j);
      CHECK(lo <= hi);
      CHECK(lo < w + 0.2);
      CHECK(hi > w - 0.2);
    }
  }
}

TEST_CASE("strong Liouville log ratios increase") {
  auto s = build_strong_liouville(6);
  double prev = 0;
  for (std::size_t j = 2; j + 1 < s.terms.size(); ++j) {
    double ratio = log_abs(s.terms[j + 1]) / log_abs(s.value.convergent(j).q);
    CHECK(ratio > prev);
    prev = ratio;
  }
}

TEST_CASE("algebraic numbers expand lazily and correctly") {
  auto c = cube_root_two();
  // 2^(1/3) = [1; 3, 1, 5, 1, 1, 4, 1, 1, 8, 1, 14, ...]
  const long expect[] = {1, 3, 1, 5, 1, 1, 4, 1, 1, 8, 1, 14};
  for (std::size_t i = 0; i < 12; ++i) CHECK(*c.value.term(i) == expect[i]);
  Interval I = c.value.enclose_bits(200);
  CHECK(pow(I, 3).contains(Rational(2)));
  auto r = build_algebraic(IntPoly{-1, 2}, R(0), R(1));
  CHECK(r.value.finite_length(10).has_value());
}

TEST_CASE("construction spec round trip") {
  auto x = construct_from_json(nlohmann::json::parse(R"({"class":"Bw","w":"5/1","M":1,"max_terms":8})"));
  CHECK(x.tag == ClassTag::Bw);
  CHECK(x.w == 5);
  CHECK(x.terms.size() == 9);
  auto d = describe(x);
  CHECK(d["class"] == "Bw");
  CHECK(d["q"][2] == "33");
  CHECK_THROWS_AS(construct_from_json(nlohmann::json::parse(R"({"class":"Nope"})")), std::invalid_argument);
  CHECK_THROWS_AS(construct_from_json(nlohmann::json::parse(R"({"w":"3"})")), std::invalid_argument);
}
