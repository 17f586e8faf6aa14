#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "dioph/interval.hpp"
#include "dioph/rational.hpp"

namespace dioph {

// Integer polynomial, coefficients constant term first, no trailing zeros.
class IntPoly {
 public:
  IntPoly() = default;
  IntPoly(std::vector<Integer> coeffs);
  IntPoly(std::initializer_list<long> coeffs);

  // -1 for the zero polynomial
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Integer>& coeffs() const { return c_; }
  Integer coeff(int i) const;
  Integer leading() const;
  Integer height() const;
  Integer content() const;
  IntPoly primitive_part() const;  // positive leading coefficient
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  Rational eval(const Rational& x) const;
  Interval eval(const Interval& x) const;
  IntPoly derivative() const;

  std::string str() const;  // "2T^2+T-1"
  bool operator==(const IntPoly& o) const { return c_ == o.c_; }

 private:
  std::vector<Integer> c_;
};

IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const Integer& k, const IntPoly& a);

}  // namespace dioph
