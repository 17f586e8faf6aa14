#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "dioph/intpoly.hpp"
#include "dioph/interval.hpp"
#include "dioph/rational.hpp"

namespace dioph {

struct Convergent {
  Integer p;
  Integer q;
  Rational value() const { return make_rational(p, q); }
};

struct EncloseBudget {
  std::size_t max_index = 100000;
  std::size_t max_bits = std::size_t(1) << 24;  // bit length of q
};

// Real number given by a (lazy) regular continued fraction [a_0; a_1, a_2, ...].
// a_0 may be any integer, a_i >= 1 for i >= 1.
// Convergents satisfy p_i q_{i-1} - p_{i-1} q_i = (-1)^{i-1} and q_1 < q_2 < ...
// Copies share the term cache.
class CFNumber {
 public:
  // Returns a_i given q_0..q_{i-1}; nullopt ends the expansion.
  using Generator = std::function<std::optional<Integer>(std::size_t i, const std::vector<Integer>& q)>;

  static CFNumber from_terms(std::vector<Integer> terms);
  static CFNumber from_generator(Generator gen);
  static CFNumber from_rational(const Rational& r);
  static CFNumber golden();  // [1; 1, 1, ...]

  std::optional<Integer> term(std::size_t i) const;
  // throws RationalCase when the expansion ends before index i
  Convergent convergent(std::size_t i) const;
  // number of terms if the expansion ends within `probe` terms
  std::optional<std::size_t> finite_length(std::size_t probe) const;

  // Encloses the number using terms up to a_{k+2}: between p_{k+1}/q_{k+1} and
  // the mediant (p_{k+1}+p_k)/(q_{k+1}+q_k). Exact point once the expansion ends.
  Interval bracket(std::size_t k) const;
  // throws ResourceLimit carrying the best bracket when the budget runs out
  Interval enclose(const Rational& abs_tol, const EncloseBudget& budget = {}) const;
  Interval enclose_bits(unsigned bits) const;

  // |q_k zeta - p_k| lies in (1/(q_k + q_{k+1}), 1/q_{k+1}); throws RationalCase
  // when a_{k+1} does not exist
  std::pair<Integer, Integer> slope_bracket_denominators(std::size_t k) const;

 private:
  struct State {
    Generator gen;
    std::vector<Integer> a, p, q;
    bool ended = false;
  };
  explicit CFNumber(std::shared_ptr<State> s) : s_(std::move(s)) {}
  bool extend_to(std::size_t i) const;
  std::shared_ptr<State> s_;
};

Convergent convergent(const CFNumber& x, std::size_t i);
Interval enclose(const CFNumber& x, const Rational& abs_tol, const EncloseBudget& budget = {});

// P(zeta) in the returned interval, and either width <= rel_tol * max(|lo|, |hi|)
// or 0 lies inside and width <= abs_floor. Throws ResourceLimit past max_bits.
Interval eval_poly(const IntPoly& P, const CFNumber& x, const Rational& rel_tol,
                   const Rational& abs_floor = make_rational(1, ipow(Integer(2), 256)),
                   unsigned max_bits = 1u << 16);

}  // namespace dioph
