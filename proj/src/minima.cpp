#include "dioph/minima.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

using ld = long double;

// relative slack covering floating-point ordering errors among screened candidates
constexpr double kOrderSlack = 1e-8;

struct Candidate {
  ld norm;
  std::vector<long long> v;
};

struct Screen {
  std::vector<Candidate> found;
  bool budget_hit = false;
};

using i128 = __int128;

// Integer vectors c spanning the annihilator of the already chosen minima: a screened vector lies in
// their span iff every c . v vanishes. Empty `ok` means the entries overflowed and nothing is filtered.
struct SpanFilter {
  std::vector<std::vector<i128>> annihilator;
  bool ok = false;
  bool keep(const std::vector<long long>& v) const {
    if (!ok) return true;
    for (const auto& c : annihilator) {
      i128 d = 0;
      for (std::size_t i = 0; i < v.size(); ++i) d += c[i] * v[i];
      if (d != 0) return true;
    }
    return false;
  }
};

SpanFilter make_filter(const std::vector<std::vector<Integer>>& basis, std::size_t dim) {
  // reduced row echelon form over Q
  std::vector<std::vector<Rational>> m;
  for (const auto& b : basis) m.emplace_back(b.begin(), b.end());
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < dim && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][c];
    for (auto& e : m[row]) e *= inv;
    for (std::size_t r = 0; r < m.size(); ++r)
      if (r != row && m[r][c] != 0) {
        Rational f = m[r][c];
        for (std::size_t i = 0; i < dim; ++i) m[r][i] -= f * m[row][i];
      }
    pivot_col.push_back(static_cast<int>(c));
    ++row;
  }
  // annihilator of the row space = null space of the transpose; here: vectors orthogonal to all rows.
  // Free columns give null-space vectors x of m (m x = 0); those are orthogonal to the rows.
  SpanFilter f;
  f.ok = true;
  std::vector<bool> is_pivot(dim, false);
  for (int c : pivot_col) is_pivot[c] = true;
  const Integer lim("100000000000000000000");  // keeps c . v inside 128 bits for |v| < 2^60
  for (std::size_t free = 0; free < dim; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> x(dim, Rational(0));
    x[free] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = -m[r][free];
    Integer l = 1;
    for (const auto& e : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.get_den_mpz_t());
    std::vector<i128> c;
    for (const auto& e : x) {
      Integer z = e.get_num() * (l / e.get_den());
      if (abs(z) > lim) {
        f.ok = false;
        return f;
      }
      // two 64-bit halves
      Integer hi = z / Integer("18446744073709551616"), lo = z - hi * Integer("18446744073709551616");
      if (lo < 0) lo += Integer("18446744073709551616"), hi -= 1;
      c.push_back(static_cast<i128>(hi.get_si()) * (static_cast<i128>(1) << 64) + static_cast<i128>(lo.get_ui()));
    }
    f.annihilator.push_back(std::move(c));
  }
  return f;
}

struct Setup {
  int n;
  ld Q;
  ld root;  // Q^(1/n)
  std::vector<ld> zp;  // zeta^i, i = 0..n
};

Setup make_setup(const MinimaBody& body) {
  Setup s;
  s.n = body.n;
  s.Q = static_cast<ld>(to_double(body.Q));
  s.root = std::pow(s.Q, 1.0L / body.n);
  Rational m = body.zeta.enclose_bits(96).mid();
  // two-term split keeps long double precision beyond a single double
  double head = to_double(m);
  ld zeta = static_cast<ld>(head) + static_cast<ld>(to_double(Rational(m - Rational(head))));
  s.zp.assign(body.n + 1, 1.0L);
  for (int i = 1; i <= body.n; ++i) s.zp[i] = s.zp[i - 1] * zeta;
  return s;
}

// all (x, y) with x >= 0 and screened norm <= r; x = 0 contributes the unit vectors only,
// since every (0, y) has norm Q^(1/n) max|y_i|
Screen screen_simultaneous(const Setup& s, ld r, const SpanFilter& filter, std::uint64_t& visited, std::uint64_t cap) {
  Screen out;
  const ld lim = r * (1 + kOrderSlack);
  if (s.root <= lim)
    for (int i = 1; i <= s.n; ++i) {
      std::vector<long long> e(s.n + 1, 0);
      e[i] = 1;
      if (filter.keep(e)) out.found.push_back({s.root, e});
    }
  const long long xmax = static_cast<long long>(std::floor(lim * s.Q));
  const ld w = lim / s.root + 1e-12L;
  std::vector<long long> lo(s.n + 1), hi(s.n + 1), cur(s.n + 1);
  for (long long x = 1; x <= xmax; ++x) {
    if (++visited > cap) {
      out.budget_hit = true;
      return out;
    }
    bool empty = false;
    for (int i = 1; i <= s.n && !empty; ++i) {
      ld c = s.zp[i] * x;
      lo[i] = static_cast<long long>(std::ceil(c - w));
      hi[i] = static_cast<long long>(std::floor(c + w));
      empty = lo[i] > hi[i];
    }
    if (empty) continue;
    cur = lo;
    cur[0] = x;
    while (true) {
      ld d = 0;
      for (int i = 1; i <= s.n; ++i) d = std::max(d, std::fabs(s.zp[i] * x - static_cast<ld>(cur[i])));
      ld norm = std::max(static_cast<ld>(x) / s.Q, s.root * d);
      if (norm <= lim && filter.keep(cur)) out.found.push_back({norm, cur});
      if (++visited > cap) {
        out.budget_hit = true;
        return out;
      }
      int i = 1;
      while (i <= s.n && ++cur[i] > hi[i]) cur[i] = lo[i], ++i;
      if (i > s.n) break;
    }
  }
  return out;
}

// coefficient vectors (a_0..a_n) with screened norm <= r, sign fixed by the top nonzero a_i (i >= 1)
Screen screen_dual(const Setup& s, ld r, const SpanFilter& filter, std::uint64_t& visited, std::uint64_t cap) {
  Screen out;
  const ld lim = r * (1 + kOrderSlack);
  const long long B = static_cast<long long>(std::floor(lim * s.root));
  if (s.Q <= lim && 1 / s.root <= lim) {
    std::vector<long long> one(s.n + 1, 0);
    one[0] = 1;
    if (filter.keep(one)) out.found.push_back({std::max(s.Q, 1 / s.root), one});
  }
  if (B < 1) return out;
  std::vector<long long> a(s.n + 1, -B);
  a[0] = 0;
  while (true) {
    // skip all-zero tails and negative leading signs
    int top = s.n;
    while (top >= 1 && a[top] == 0) --top;
    if (top >= 1 && a[top] > 0) {
      if (++visited > cap) {
        out.budget_hit = true;
        return out;
      }
      ld sum = 0, h = 0;
      for (int i = 1; i <= s.n; ++i) {
        sum += a[i] * s.zp[i];
        h = std::max(h, static_cast<ld>(std::llabs(a[i])));
      }
      ld w = lim / s.Q + 1e-15L * (std::fabs(sum) + 1);
      long long lo = std::max(-B, static_cast<long long>(std::ceil(-sum - w)));
      long long hi = std::min(B, static_cast<long long>(std::floor(-sum + w)));
      for (long long a0 = lo; a0 <= hi; ++a0) {
        ld hh = std::max(h, static_cast<ld>(std::llabs(a0)));
        ld norm = std::max(hh / s.root, s.Q * std::fabs(sum + a0));
        if (norm <= lim) {
          auto v = a;
          v[0] = a0;
          if (filter.keep(v)) out.found.push_back({norm, v});
        }
      }
    }
    int i = 1;
    while (i <= s.n && ++a[i] > B) a[i] = -B, ++i;
    if (i > s.n) break;
  }
  return out;
}

// Incremental exact rank via fraction-free elimination.
class RankTracker {
 public:
  explicit RankTracker(std::size_t dim) : dim_(dim) {}
  bool add(std::vector<Integer> v) {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const auto& b = rows_[k];
      std::size_t c = pivots_[k];
      if (v[c] == 0) continue;
      Integer f = v[c], g = b[c];
      for (std::size_t i = 0; i < dim_; ++i) v[i] = Integer(g * v[i] - f * b[i]);
    }
    std::size_t c = 0;
    while (c < dim_ && v[c] == 0) ++c;
    if (c == dim_) return false;
    Integer g = 0;
    for (const auto& e : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
    for (auto& e : v) e /= g;
    rows_.push_back(std::move(v));
    pivots_.push_back(c);
    return true;
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::size_t dim_;
  std::vector<std::vector<Integer>> rows_;
  std::vector<std::size_t> pivots_;
};

std::vector<Integer> to_integers(const std::vector<long long>& v) {
  std::vector<Integer> out;
  for (long long e : v) out.push_back(Integer(std::to_string(e)));
  return out;
}

std::pair<Rational, Rational> root_of(const MinimaBody& body) { return root_bracket(body.Q, body.n, 128); }

Interval interval_max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

Interval to_interval(std::pair<double, double> p) { return Interval(Rational(p.first), Rational(p.second)); }

void validate(const MinimaBody& body) {
  if (body.n < 1) throw PreconditionViolation("dimension n must be >= 1");
  if (body.Q <= 1) throw PreconditionViolation("parameter Q must exceed 1");
}

}  // namespace

Interval body_norm(const MinimaBody& body, const std::vector<Integer>& v, const Rational& rel_tol) {
  validate(body);
  if (static_cast<int>(v.size()) != body.n + 1) throw std::invalid_argument("vector length must be n+1");
  auto [rlo, rhi] = root_of(body);
  Interval root(rlo, rhi);
  Rational tol = rel_tol / 4;
  if (body.kind == BodyKind::Simultaneous) {
    Interval out(abs(Rational(v[0])) / body.Q);
    for (int i = 1; i <= body.n; ++i) {
      std::vector<Integer> c(i + 1, Integer(0));
      c[0] = -v[i];
      c[i] = v[0];
      Interval d = abs(eval_poly(IntPoly(c), body.zeta, tol));
      out = interval_max(out, root * d);
    }
    return out;
  }
  IntPoly P(v);
  Rational H(P.height());
  Interval h(H / rhi, H / rlo);
  Interval val = body.Q * abs(eval_poly(P, body.zeta, tol));
  return interval_max(h, val);
}

int integer_rank(const std::vector<std::vector<Integer>>& rows) {
  if (rows.empty()) return 0;
  RankTracker t(rows.front().size());
  for (const auto& r : rows) t.add(r);
  return static_cast<int>(t.rank());
}

MinimaResult successive_minima(const MinimaBody& body, const Rational& rel_tol, const MinimaBudget& budget) {
  validate(body);
  Setup s = make_setup(body);
  const std::size_t dim = body.n + 1;
  MinimaResult res;
  ld r = 1;
  ld searched = 0;  // radius fully enumerated so far
  std::vector<Candidate> best;
  // Everything of norm <= searched lies in the span of `best` (greedy maximality), so each new
  // radius only needs vectors outside that span; the greedy then continues from `best`.
  while (true) {
    std::vector<std::vector<Integer>> basis;
    for (const auto& c : best) basis.push_back(to_integers(c.v));
    SpanFilter filter = make_filter(basis, dim);
    Screen sc = body.kind == BodyKind::Simultaneous ? screen_simultaneous(s, r, filter, res.visited, budget.max_points)
                                                     : screen_dual(s, r, filter, res.visited, budget.max_points);
    if (sc.budget_hit) {
      res.complete = false;
      break;
    }
    searched = r;
    std::stable_sort(sc.found.begin(), sc.found.end(),
                     [](const Candidate& a, const Candidate& b) { return a.norm < b.norm; });
    RankTracker t(dim);
    for (auto& b : basis) t.add(b);
    for (const auto& c : sc.found) {
      if (t.add(to_integers(c.v))) best.push_back(c);
      if (t.rank() == dim) break;
    }
    if (best.size() == dim) break;
    r *= 2;
  }
  // re-certify; the j-th minimum is at most the largest of the first j exact norms
  Rational running_hi = 0;
  for (const auto& c : best) {
    auto v = to_integers(c.v);
    Interval n = body_norm(body, v, rel_tol);
    running_hi = std::max(running_hi, n.hi);
    Rational lo = n.lo * Rational(1 - kOrderSlack);
    if (!res.lambdas.empty()) lo = std::max(lo, res.lambdas.back().lo);
    res.lambdas.emplace_back(lo, running_hi);
    res.witnesses.push_back(std::move(v));
  }
  if (!res.complete) {
    Rational floor_r(static_cast<double>(searched));
    while (res.lambdas.size() < dim) res.lambdas.emplace_back(floor_r, floor_r);
  }
  return res;
}

namespace {

Interval log_q(const MinimaBody& body, int j, const MinimaBudget& budget) {
  if (j < 1 || j > body.n + 1) throw std::out_of_range("minimum index j must lie in 1..n+1");
  MinimaResult m = successive_minima(body, make_rational(1, 1000000000), budget);
  if (static_cast<int>(m.witnesses.size()) < j) throw BudgetExceeded("enumeration budget exhausted before minimum " + std::to_string(j));
  return to_interval(log_ratio(m.lambdas[j - 1], log_abs(body.Q)));
}

}  // namespace

Interval psi(int n, int j, const Rational& Q, const CFNumber& zeta, const MinimaBudget& budget) {
  return log_q(MinimaBody{BodyKind::Simultaneous, n, Q, zeta}, j, budget);
}

Interval psi_star(int n, int j, const Rational& Q, const CFNumber& zeta, const MinimaBudget& budget) {
  return log_q(MinimaBody{BodyKind::Dual, n, Q, zeta}, j, budget);
}

Interval mahler_gap(int n, int j, const Rational& Q, const CFNumber& zeta, const MinimaBudget& budget) {
  if (j < 1 || j > n + 1) throw std::out_of_range("minimum index j must lie in 1..n+1");
  return psi(n, j, Q, zeta, budget) + psi_star(n, n + 2 - j, Q, zeta, budget);
}

std::vector<TrajectoryRow> trajectory(int n, const std::vector<Rational>& Qgrid, const CFNumber& zeta,
                                      const MinimaBudget& budget) {
  std::vector<TrajectoryRow> rows;
  const Rational tol = make_rational(1, 1000000000);
  for (const auto& Q : Qgrid) {
    MinimaBody sim{BodyKind::Simultaneous, n, Q, zeta}, dual{BodyKind::Dual, n, Q, zeta};
    MinimaResult a = successive_minima(sim, tol, budget), b = successive_minima(dual, tol, budget);
    if (!a.complete || !b.complete) throw BudgetExceeded("enumeration budget exhausted at Q = " + to_string(Q));
    double lq = log_abs(Q);
    for (int j = 1; j <= n + 1; ++j) {
      TrajectoryRow row;
      row.Q = Q;
      row.j = j;
      row.psi = to_interval(log_ratio(a.lambdas[j - 1], lq));
      row.psi_star = to_interval(log_ratio(b.lambdas[j - 1], lq));
      Interval dual_partner = to_interval(log_ratio(b.lambdas[n + 1 - j], lq));
      row.gap = row.psi + dual_partner;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string decimal12(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", to_double(r));
  return buf;
}

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::ostringstream os;
  os << "Q,j,psi_lo,psi_hi,psi_star_lo,psi_star_hi,gap_lo,gap_hi\n";
  for (const auto& r : rows)
    os << decimal12(r.Q) << ',' << r.j << ',' << decimal12(r.psi.lo) << ',' << decimal12(r.psi.hi) << ','
       << decimal12(r.psi_star.lo) << ',' << decimal12(r.psi_star.hi) << ',' << decimal12(r.gap.lo) << ','
       << decimal12(r.gap.hi) << '\n';
  return os.str();
}

PsiSummary exponent_from_trajectory(int n, int j, const std::vector<Rational>& Qgrid, const CFNumber& zeta,
                                    BodyKind kind, const MinimaBudget& budget) {
  if (Qgrid.size() < 4) throw std::invalid_argument("trajectory grid needs at least 4 points");
  for (std::size_t i = 1; i < Qgrid.size(); ++i)
    if (!(Qgrid[i - 1] < Qgrid[i])) throw std::invalid_argument("trajectory grid must be increasing");
  PsiSummary s;
  s.n = n;
  s.j = j;
  s.kind = kind;
  for (const auto& Q : Qgrid) {
    Interval v = kind == BodyKind::Simultaneous ? psi(n, j, Q, zeta, budget) : psi_star(n, j, Q, zeta, budget);
    s.series.emplace_back(Q, v);
  }
  s.low = s.high = s.series.front().second;
  for (const auto& [Q, v] : s.series) {
    s.low = Interval(std::min(s.low.lo, v.lo), std::min(s.low.hi, v.hi));
    s.high = Interval(std::max(s.high.lo, v.lo), std::max(s.high.hi, v.hi));
  }
  s.oscillation_certified = s.high.lo > s.low.hi;
  return s;
}

}  // namespace dioph
