#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "dioph/cf.hpp"
#include "dioph/intpoly.hpp"

namespace dioph {

enum class ClassTag { Bw, BInfinity, Algebraic, Custom };

struct ConstructedNumber {
  explicit ConstructedNumber(CFNumber v) : value(std::move(v)) {}
  CFNumber value;
  ClassTag tag = ClassTag::Custom;
  Rational w;             // Bw only
  Integer M;              // Bw only
  std::string schedule;   // BInfinity only
  // (n, w) pairs the construction is claimed to satisfy; present only when w >= 2n - 1
  std::vector<std::pair<int, Rational>> claimed_Dnw;
  std::vector<Integer> terms;  // a_0 .. a_k as built
  bool truncated = false;
  bool overflow = false;  // stopped by the bit budget before max_terms
};

// floor(q^(a/b)) as the integer b-th root of q^a; exponent >= 0
Integer floor_pow(const Integer& q, const Rational& exponent);

// a_0 = 0, a_1 = 2, a_{j+1} = M * floor(q_j^(w-1)); terms a_1 .. a_{max_terms}
ConstructedNumber build_bw(const Rational& w, const Integer& M, std::size_t max_terms,
                           std::size_t bit_budget = std::size_t(1) << 22);

// a_0 = 0, a_1 = 2, a_{j+1} = q_j^j
ConstructedNumber build_strong_liouville(std::size_t max_terms, std::size_t bit_budget = std::size_t(1) << 22);

// real root of P isolated by the sign change on [lo, hi]; partial quotients are
// produced lazily from rational enclosures of the root
ConstructedNumber build_algebraic(const IntPoly& P, const Rational& lo, const Rational& hi);

ConstructedNumber build_custom(std::vector<Integer> terms);

// {"class":"Bw","w":"5/1","M":1,"max_terms":8}, {"class":"BInfinity","max_terms":6},
// {"class":"Algebraic","poly":[-2,0,0,1],"lo":"1","hi":"2"}, {"class":"Golden"},
// {"class":"Custom","terms":[0,2,2]}, {"class":"Rational","value":"1/2"}
ConstructedNumber construct_from_json(const nlohmann::json& spec);
nlohmann::json describe(const ConstructedNumber& x);

// Encloses -log|q_j zeta - p_j| / log q_j using |q_j zeta - p_j| in (1/(q_j+q_{j+1}), 1/q_{j+1}).
std::pair<double, double> convergent_slope_bracket(const CFNumber& x, std::size_t j);

// Convenience numbers used throughout the tests and presets.
ConstructedNumber cube_root_two();
ConstructedNumber golden_ratio();

}  // namespace dioph
