#pragma once

#include <string>

#include "dioph/rational.hpp"

namespace dioph {

// Closed interval with rational endpoints, lo <= hi.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  explicit Interval(const Rational& point) : lo(point), hi(point) {}
  Interval(const Rational& lo, const Rational& hi);

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }
  bool is_point() const { return lo == hi; }
  // max(|lo|, |hi|)
  Rational magnitude() const;
  // min |x| over the interval
  Rational mignitude() const;
  std::string str() const;
  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(const Rational& k, const Interval& a);
Interval abs(const Interval& a);
Interval pow(const Interval& a, unsigned long e);
Interval hull(const Interval& a, const Interval& b);
bool subset(const Interval& inner, const Interval& outer);
bool disjoint(const Interval& a, const Interval& b);

// enclosure of log(x)/log(base) for x > 0, base > 1; reporting layer only
std::pair<double, double> log_ratio(const Interval& x, double log_base);

}  // namespace dioph
