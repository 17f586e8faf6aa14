#include "dioph/intpoly.hpp"

#include <algorithm>

namespace dioph {

namespace {
void trim(std::vector<Integer>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}
}  // namespace

IntPoly::IntPoly(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(c_); }

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
  for (long v : coeffs) c_.emplace_back(v);
  trim(c_);
}

Integer IntPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return c_[i];
}

Integer IntPoly::leading() const { return c_.empty() ? Integer(0) : c_.back(); }

Integer IntPoly::height() const {
  Integer h = 0;
  for (const auto& v : c_) h = std::max(h, abs(v));
  return h;
}

Integer IntPoly::content() const {
  Integer g = 0;
  for (const auto& v : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  return g;
}

IntPoly IntPoly::primitive_part() const {
  if (c_.empty()) return *this;
  Integer g = content();
  if (c_.back() < 0) g = -g;
  std::vector<Integer> out;
  for (const auto& v : c_) out.push_back(v / g);
  return IntPoly(std::move(out));
}

Rational IntPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Rational(*it);
  return acc;
}

Interval IntPoly::eval(const Interval& x) const {
  Interval acc(Rational(0));
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Interval(Rational(*it));
  return acc;
}

IntPoly IntPoly::derivative() const {
  std::vector<Integer> out;
  for (std::size_t i = 1; i < c_.size(); ++i) out.push_back(c_[i] * static_cast<unsigned long>(i));
  return IntPoly(std::move(out));
}

std::string IntPoly::str() const {
  if (c_.empty()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const Integer& v = c_[i];
    if (v == 0) continue;
    Integer m = abs(v);
    if (v < 0) out += "-";
    else if (!out.empty()) out += "+";
    if (m != 1 || i == 0) out += m.get_str();
    if (i >= 1) out += "T";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<Integer> out(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
  return IntPoly(std::move(out));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + Integer(-1) * b; }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly();
  std::vector<Integer> out(a.coeffs().size() + b.coeffs().size() - 1);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) out[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return IntPoly(std::move(out));
}

IntPoly operator*(const Integer& k, const IntPoly& a) {
  std::vector<Integer> out;
  for (const auto& v : a.coeffs()) out.push_back(k * v);
  return IntPoly(std::move(out));
}

}  // namespace dioph
