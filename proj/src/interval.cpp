#include "dioph/interval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dioph {

Interval::Interval(const Rational& lo_, const Rational& hi_) : lo(lo_), hi(hi_) {
  if (hi < lo) throw std::invalid_argument("interval with lo > hi");
}

Rational Interval::magnitude() const { return std::max(abs(lo), abs(hi)); }

Rational Interval::mignitude() const {
  if (contains_zero()) return Rational(0);
  return std::min(abs(lo), abs(hi));
}

std::string Interval::str() const { return "[" + to_string(lo) + ", " + to_string(hi) + "]"; }

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  if (a.is_point() && b.is_point()) return Interval(a.lo * b.lo);
  Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

Interval operator*(const Rational& k, const Interval& a) {
  if (k >= 0) return {k * a.lo, k * a.hi};
  return {k * a.hi, k * a.lo};
}

Interval abs(const Interval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  return {Rational(0), std::max(Rational(-a.lo), a.hi)};
}

Interval pow(const Interval& a, unsigned long e) {
  if (e == 0) return Interval(Rational(1));
  if (e % 2 == 1 || a.lo >= 0) return {rpow(a.lo, e), rpow(a.hi, e)};
  if (a.hi <= 0) return {rpow(a.hi, e), rpow(a.lo, e)};
  return {Rational(0), std::max(rpow(a.lo, e), rpow(a.hi, e))};
}

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

bool subset(const Interval& inner, const Interval& outer) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

bool disjoint(const Interval& a, const Interval& b) { return a.hi < b.lo || b.hi < a.lo; }

std::pair<double, double> log_ratio(const Interval& x, double log_base) {
  if (x.lo <= 0) throw std::domain_error("log of nonpositive interval");
  const double slack = 1e-12;
  double a = log_abs(x.lo) / log_base, b = log_abs(x.hi) / log_base;
  if (log_base < 0) std::swap(a, b);
  return {a - slack * (1 + std::fabs(a)), b + slack * (1 + std::fabs(b))};
}

}  // namespace dioph
