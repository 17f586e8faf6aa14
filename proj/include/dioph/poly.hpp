#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dioph/cf.hpp"
#include "dioph/intpoly.hpp"
#include "dioph/interval.hpp"

namespace dioph {

// Real algebraic number: root of `minimal_polynomial` isolated by `isolating`
// (open interval, or a point when the root is rational).
struct AlgebraicWitness {
  IntPoly minimal_polynomial;  // primitive, irreducible, positive leading coefficient
  Interval isolating;
  int degree = 0;
  Integer height;
  bool monic = false;
};

IntPoly product(const IntPoly& P, const IntPoly& Q);

// distinct rational roots, ascending
std::vector<Rational> rational_roots(const IntPoly& P);
bool has_linear_factor(const IntPoly& P);

// Irreducibility over Z for primitive P of degree 1..4.
// Throws UnsupportedDegree outside that range and PreconditionViolation for non-primitive input.
bool is_irreducible(const IntPoly& P);

// Irreducible factors over Z (primitive, positive leading coefficient) with multiplicity.
// Supports inputs whose part without rational roots has degree <= 4.
std::vector<std::pair<IntPoly, int>> factor_small(const IntPoly& P);

// Disjoint isolating intervals of the distinct real roots, ascending, each of width <= max_width.
// Endpoints are never roots; a rational root found exactly is returned as a point.
std::vector<Interval> isolate_real_roots(const IntPoly& P, const Rational& max_width = Rational(1, 2));

// Shrinks an isolating interval of a simple root of P to width <= tol.
Interval refine_root(const IntPoly& P, Interval I, const Rational& tol);

struct NearestRoot {
  AlgebraicWitness witness;
  Interval distance;  // encloses |zeta - alpha|
};

// Real root of P nearest to zeta; ties resolve to the smaller root. Throws NoWitness
// when P has no real roots.
NearestRoot nearest_root(const IntPoly& P, const CFNumber& zeta, const Rational& tol);

struct WitnessBound {
  Interval lhs;  // |P(zeta)|
  Interval rhs;  // D * H * (1 + max(|zeta|, |alpha|))^(D-1) * |zeta - alpha|
  bool holds = false;  // certified lhs <= rhs
};

// |P(zeta)| <= D H(P) (1 + max(|zeta|, |alpha|))^(D-1) |zeta - alpha| for a root alpha of P.
WitnessBound witness_convert(const IntPoly& P, const CFNumber& zeta, const AlgebraicWitness& alpha,
                             const Rational& tol);

// H(PQ) / (H(P) H(Q))
Rational gelfond_ratio(const IntPoly& P, const IntPoly& Q);

struct GelfondSweep {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double min_ratio = 0, max_ratio = 0;
  // extremal pairs normalized by the bracket: ratio / 2^-(dP+dQ) and (dP+dQ+1) / ratio
  double min_lower_margin = 0, min_upper_margin = 0;
  IntPoly min_P, min_Q, max_P, max_Q;
};

// All pairs of nonconstant P, Q with deg P + deg Q <= max_degree_sum and heights <= max_height,
// checked against 2^-(dP+dQ) <= H(PQ)/(H(P)H(Q)) <= dP+dQ+1.
GelfondSweep gelfond_exhaustive(int max_degree_sum, int max_height);

}  // namespace dioph
