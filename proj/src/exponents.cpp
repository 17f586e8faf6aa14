#include "dioph/exponents.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dioph/errors.hpp"
#include "dioph/minima.hpp"

namespace dioph {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;
using ld = long double;

constexpr int kMaxN = 6;
using Coeffs = std::array<long, kMaxN + 1>;  // a_0 .. a_n

Integer to_integer(i128 v) {
  bool neg = v < 0;
  u128 u = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  Integer r = Integer(static_cast<unsigned long>(u >> 64));
  r <<= 64;
  r += Integer(static_cast<unsigned long>(u & ~0UL));
  return neg ? Integer(-r) : r;
}

i128 to_i128(const Integer& z) {
  Integer a = abs(z);
  Integer hi = a >> 64;
  Integer lo = a - (hi << 64);
  u128 u = (static_cast<u128>(hi.get_ui()) << 64) | lo.get_ui();
  return z < 0 ? -static_cast<i128>(u) : static_cast<i128>(u);
}

Integer pos_mod(const Integer& x, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer floor_div(const Integer& x, const Integer& m) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer ceil_div(const Integer& x, const Integer& m) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

Rational pow2(long e) {
  return e >= 0 ? Rational(ipow(Integer(2), e)) : make_rational(1, ipow(Integer(2), -e));
}

// exact value when the expansion ends within the probe
std::optional<Rational> rational_value(const CFNumber& z) {
  auto len = z.finite_length(200);
  if (!len) return std::nullopt;
  return z.bracket(*len).lo;
}

// |P(zeta)|: exact for rational zeta, otherwise relative width rel_tol or an enclosure of 0 of width <= 2^-256
Interval certified_abs(const IntPoly& P, const CFNumber& z, const std::optional<Rational>& exact,
                       const Rational& rel_tol) {
  if (exact) return Interval(abs(P.eval(*exact)));
  return abs(eval_poly(P, z, rel_tol));
}

IntPoly to_poly(const Coeffs& a, int n) {
  std::vector<Integer> c;
  for (int i = 0; i <= n; ++i) c.emplace_back(a[i]);
  return IntPoly(c);
}

// zeta^i * 2^K rounded, with |sum a_i z_i - 2^K sum a_i zeta^i| <= err whenever |a_i| <= Hmax
struct Fixed {
  int n = 1;
  int K = 0;
  std::vector<i128> z;
  std::vector<ld> zl;  // zeta^i
  i128 one = 0;
  i128 err = 0;
  ld zabs = 0;  // max(1, |zeta|)
};

Fixed make_fixed(const CFNumber& zeta, int n, const Integer& Hmax) {
  Fixed f;
  f.n = n;
  Interval coarse = zeta.enclose_bits(64);
  Rational mag = std::max(Rational(1), coarse.magnitude());
  Rational bound = Rational(n) * Rational(Hmax) * rpow(mag, n) + Rational(Hmax) + 2;
  long bits = static_cast<long>(mpz_sizeinbase(ceil(bound).get_mpz_t(), 2));
  f.K = static_cast<int>(124 - bits);
  if (f.K < 48) throw PreconditionViolation("height range too large for 128-bit fixed-point screening");
  Interval enc = zeta.enclose_bits(static_cast<unsigned>(f.K + 32 + 8 * n));
  Rational scale = pow2(f.K);
  for (int i = 0; i <= n; ++i) {
    Interval p = pow(enc, static_cast<unsigned long>(i));
    f.z.push_back(to_i128(round_nearest(p.mid() * scale)));
    f.zl.push_back(static_cast<ld>(to_double(p.mid())));
  }
  f.one = static_cast<i128>(1) << f.K;
  f.err = to_i128(Integer(n) * Hmax + 2);
  f.zabs = static_cast<ld>(to_double(mag));
  return f;
}

ld to_ld(i128 v, int K) { return std::ldexp(static_cast<ld>(v), -K); }

long top_of(const Coeffs& a, int n) {
  long t = 0;
  for (int i = 1; i <= n; ++i) t = std::max(t, std::labs(a[i]));
  return t;
}

int degree_of(const Coeffs& a, int n) {
  int d = n;
  while (d > 0 && a[d] == 0) --d;
  return d;
}

bool square_free_disc(const Coeffs& a) {
  i128 disc = static_cast<i128>(a[1]) * a[1] - static_cast<i128>(4) * a[2] * a[0];
  if (disc < 0) return true;
  Integer D = to_integer(disc);
  return mpz_perfect_square_p(D.get_mpz_t()) == 0;
}

long content_of(const Coeffs& a, int n) {
  long g = 0;
  for (int i = 0; i <= n; ++i) g = std::gcd(g, std::labs(a[i]));
  return g;
}

// primitive and irreducible of exact degree d (d = degree of a)
bool irreducible_primitive(const Coeffs& a, int d) {
  if (content_of(a, d) != 1) return false;
  if (d == 1) return true;
  if (d == 2) return square_free_disc(a);
  return is_irreducible(to_poly(a, d));
}

// a sign-normalized (leading coefficient positive), nonconstant
bool admissible(const Coeffs& a, const Constraint& c) {
  int d = degree_of(a, c.n);
  if (c.monic && a[d] != 1) return false;
  if (c.mode == DegreeMode::AtMost) return true;
  if (d != c.n) return false;
  return irreducible_primitive(a, d);
}

// candidate minimal polynomial for starred families: irreducible, primitive, degree <= n (== n when exact)
bool admissible_star(const Coeffs& a, const Constraint& c) {
  int d = degree_of(a, c.n);
  if (c.mode == DegreeMode::ExactIrreducible && d != c.n) return false;
  if (c.monic && a[d] != 1) return false;
  return irreducible_primitive(a, d);
}

void check_constraint(const Constraint& c) {
  if (c.n < 1 || c.n > kMaxN) throw UnsupportedDegree("record scans support 1 <= n <= 6");
  if (c.mode == DegreeMode::ExactIrreducible && c.n > 4)
    throw UnsupportedDegree("irreducibility filter supports n <= 4");
}

long checked_long(const Integer& H) {
  if (H < 1) throw PreconditionViolation("height bound must be >= 1");
  if (H > Integer(1) << 40) throw PreconditionViolation("height bound above 2^40");
  return H.get_si();
}

// number of (a_1..a_n) in the shell max|a_i| = t passing the degree/monic filters
double shell_size(const Constraint& c, long t) {
  double total = 0;
  int dlo = c.mode == DegreeMode::ExactIrreducible ? c.n : 1;
  for (int d = dlo; d <= c.n; ++d) {
    double full = std::pow(2.0 * t + 1, d - 1), inner = std::pow(2.0 * t - 1, d - 1);
    if (d == 1) {
      total += (!c.monic || t == 1) ? 1 : 0;
    } else if (c.monic) {
      total += t == 1 ? full : full - inner;
    } else {
      total += full + (t - 1) * (full - inner);
    }
  }
  return total;
}

// Visits every (a_1..a_n) with max|a_i| = t, leading nonzero coefficient positive (1 when monic), degree n
// when exact; f(a, s) receives s = sum_{i>=1} a_i z_i. Returns the number visited.
template <class F>
std::uint64_t scan_shell(const Fixed& fx, const Constraint& c, long t, F&& f) {
  const int n = c.n;
  std::uint64_t visited = 0;
  Coeffs a{};
  int dlo = c.mode == DegreeMode::ExactIrreducible ? n : 1;
  for (int d = dlo; d <= n; ++d) {
    if (d == 1) {
      if (!c.monic || t == 1) {
        a.fill(0);
        a[1] = t;
        f(a, static_cast<i128>(t) * fx.z[1]);
        ++visited;
      }
      continue;
    }
    long lead_hi = c.monic ? 1 : t;
    for (long lead = 1; lead <= lead_hi; ++lead) {
      a.fill(0);
      a[d] = lead;
      for (int i = 2; i < d; ++i) a[i] = -t;
      while (true) {
        long mx = lead;
        i128 base = 0;
        for (int i = 2; i <= d; ++i) {
          mx = std::max(mx, std::labs(a[i]));
          base += static_cast<i128>(a[i]) * fx.z[i];
        }
        const i128 z1 = fx.z[1];
        if (mx == t) {
          i128 s = base - static_cast<i128>(t) * z1;
          for (long x = -t; x <= t; ++x, s += z1) {
            a[1] = x;
            f(a, s);
          }
          visited += 2 * t + 1;
        } else {
          a[1] = -t;
          f(a, base - static_cast<i128>(t) * z1);
          a[1] = t;
          f(a, base + static_cast<i128>(t) * z1);
          visited += 2;
        }
        int i = 2;
        while (i < d && a[i] == t) a[i++] = -t;
        if (i >= d) break;
        ++a[i];
      }
    }
  }
  return visited;
}

struct Slot {
  i128 v = 0;
  Coeffs a{};
  bool set = false;
};

struct ScanState {
  const Fixed& fx;
  const Constraint& c;
  long Hmax;
  std::vector<Slot> slots;  // index = height

  ScanState(const Fixed& f, const Constraint& cc, long H) : fx(f), c(cc), Hmax(H), slots(H + 1) {}

  void offer(const Coeffs& a, long a0, i128 v, long top) {
    long h = std::max(top, std::labs(a0));
    if (h > Hmax) return;
    Slot& s = slots[h];
    if (s.set && v >= s.v) return;
    Coeffs b = a;
    b[0] = a0;
    if (!admissible(b, c)) return;
    s.v = v;
    s.a = b;
    s.set = true;
  }

  // both constant terms nearest -s
  void nearest(const Coeffs& a, i128 s, long t) {
    i128 fl = s >> fx.K;
    i128 frac = s - (fl << fx.K);
    long a0 = -static_cast<long>(fl);
    offer(a, a0, frac, t);
    offer(a, a0 - 1, fx.one - frac, t);
  }

  std::uint64_t scan_nearest(long t) {
    return scan_shell(fx, c, t, [&](const Coeffs& a, i128 s) { nearest(a, s, t); });
  }

  // every a_0 with |a_0| <= hb on shells t <= hb: exhaustive below height hb + 1
  std::uint64_t scan_all_constants(long hb) {
    std::uint64_t work = 0;
    for (long t = 1; t <= hb; ++t)
      work += scan_shell(fx, c, t, [&](const Coeffs& a, i128 s) {
        for (long a0 = -hb; a0 <= hb; ++a0) {
          i128 v = s + (static_cast<i128>(a0) << fx.K);
          offer(a, a0, v < 0 ? -v : v, t);
        }
      });
    return work;
  }

  // smallest height whose best value is certainly below 1
  long first_below_one() const {
    for (long h = 1; h <= Hmax; ++h)
      if (slots[h].set && slots[h].v < fx.one - fx.err) return h;
    return Hmax + 1;
  }
};

Coeffs normalized(const std::vector<Integer>& v, int n, bool& ok) {
  Coeffs a{};
  ok = true;
  for (int i = 0; i <= n; ++i) {
    if (!v[i].fits_slong_p()) {
      ok = false;
      return a;
    }
    a[i] = v[i].get_si();
  }
  int d = degree_of(a, n);
  if (d == 0) {
    ok = false;
    return a;
  }
  if (a[d] < 0)
    for (int i = 0; i <= n; ++i) a[i] = -a[i];
  return a;
}

i128 fixed_value(const Fixed& fx, const Coeffs& a) {
  i128 s = static_cast<i128>(a[0]) << fx.K;
  for (int i = 1; i <= fx.n; ++i) s += static_cast<i128>(a[i]) * fx.z[i];
  return s < 0 ? -s : s;
}

// Dual-body successive-minima witnesses on Q = 2^(k/8), until the first minimum exceeds Hmax.
std::vector<Coeffs> dual_seeds(const CFNumber& zeta, int n, long Hmax) {
  std::vector<Coeffs> out;
  const Rational grid_den = pow2(20);
  for (int k = 8;; ++k) {
    Rational Q = make_rational(floor(Rational(std::exp2(k / 8.0)) * grid_den), ipow(Integer(2), 20));
    if (Q > Rational(Integer(1) << 40)) break;
    MinimaBody body{BodyKind::Dual, n, Q, zeta};
    MinimaResult r;
    try {
      r = successive_minima(body, make_rational(1, 1000000000), MinimaBudget{});
    } catch (const PreconditionViolation&) {
      continue;
    }
    Integer first_height = -1;
    bool annihilated = false;
    for (std::size_t j = 0; j < r.witnesses.size(); ++j) {
      bool ok = false;
      Coeffs a = normalized(r.witnesses[j], n, ok);
      if (!ok) continue;
      if (j == 0) {
        first_height = IntPoly(r.witnesses[j]).height();
        // a vanishing first minimum stays first for every larger Q and ends the records
        annihilated = eval_poly(IntPoly(r.witnesses[j]), zeta, pow2(-64)).contains_zero();
      }
      out.push_back(a);
    }
    if (!r.complete || first_height > Hmax || annihilated) break;
  }
  return out;
}

struct RecordExtraction {
  std::vector<ApproxRecord> records;
};

// strict prefix minima over the slots 1..final_h, certified exactly
std::vector<ApproxRecord> extract_records(const ScanState& st, const CFNumber& zeta, long final_h) {
  auto exact = rational_value(zeta);
  const Rational coarse = pow2(-64), fine = pow2(-200);
  std::vector<ApproxRecord> out;
  i128 best_fixed = 0;
  for (long h = 1; h <= final_h; ++h) {
    const Slot& s = st.slots[h];
    if (!s.set) continue;
    if (!out.empty() && s.v > best_fixed + 2 * st.fx.err) continue;
    IntPoly P = to_poly(s.a, st.c.n);
    Interval val = certified_abs(P, zeta, exact, coarse);
    bool zero = val.contains_zero();
    bool accept = out.empty();
    if (!accept) {
      Interval& cur = out.back().value;
      if (val.hi < cur.lo) {
        accept = true;
      } else if (val.lo < cur.hi) {
        Interval a = certified_abs(P, zeta, exact, fine);
        Interval b = certified_abs(out.back().witness, zeta, exact, fine);
        accept = a.hi < b.lo;
        if (accept) val = a;
      }
    }
    if (!accept) continue;
    out.push_back(ApproxRecord{P, P.height(), val, st.c, zero});
    best_fixed = s.v;
    if (zero) break;
  }
  return out;
}

}  // namespace

std::string exponent_symbol(ExponentKind kind, const Constraint& c, bool hat) {
  std::string sub = c.mode == DegreeMode::ExactIrreducible ? "{=" + std::to_string(c.n) + "}"
                    : c.n < 10                              ? std::to_string(c.n)
                                                            : "{" + std::to_string(c.n) + "}";
  switch (kind) {
    case ExponentKind::Lambda:
      return std::string(hat ? "λ̂_" : "λ_") + sub;
    case ExponentKind::Inhomogeneous:
      return std::string(hat ? "ŵ_" : "w_") + sub + "(ζ,α)";
    default:
      break;
  }
  std::string sup;
  if (kind == ExponentKind::WStar) sup += "*";
  if (c.monic) sup += "int";
  return std::string(hat ? "ŵ_" : "w_") + sub + (sup.empty() ? "" : "^{" + sup + "}");
}

RecordList best_records(const CFNumber& zeta, const Constraint& c, const Integer& Hmax, const ScanBudget& budget) {
  check_constraint(c);
  long H = checked_long(Hmax);
  Fixed fx = make_fixed(zeta, c.n, Hmax);
  ScanState st(fx, c, H);
  RecordList out;
  out.constraint = c;
  out.Hmax = Hmax;
  std::uint64_t work = 0;
  long done = 0;
  for (long t = 1; t <= H; ++t) {
    if (budget.exhausted(work + shell_size(c, t))) break;
    work += st.scan_nearest(t);
    done = t;
  }
  long h1 = std::min(st.first_below_one(), done + 1);
  if (h1 > 1) st.scan_all_constants(h1 - 1);
  out.exhaustive_height = done;
  if (done < H) {
    out.truncated = true;
  }
  // seeding costs a minima sweep up to H; skipped once the clock has run out
  if (done < H && !budget.past_deadline()) {
    out.seeded = true;
    for (const Coeffs& a : dual_seeds(zeta, c.n, H)) {
      long t = top_of(a, c.n);
      if (t > done) st.offer(a, a[0], fixed_value(fx, a), t);
    }
  }
  out.records = extract_records(st, zeta, H);
  return out;
}

RecordList seeded_records(const CFNumber& zeta, const Constraint& c, const Integer& Hmax) {
  check_constraint(c);
  long H = checked_long(Hmax);
  Fixed fx = make_fixed(zeta, c.n, Hmax);
  ScanState st(fx, c, H);
  std::set<long> shells;
  for (const Coeffs& a : dual_seeds(zeta, c.n, H)) {
    long t = top_of(a, c.n);
    if (t >= 1 && t <= H) shells.insert(t);
  }
  for (long t : shells) st.scan_nearest(t);
  long h1 = st.first_below_one();
  if (h1 > 1) st.scan_all_constants(std::min(h1 - 1, H));
  RecordList out;
  out.constraint = c;
  out.Hmax = Hmax;
  out.exhaustive_height = std::min(h1 - 1, H);
  out.seeded = true;
  out.records = extract_records(st, zeta, H);
  return out;
}

// ---------------------------------------------------------------------------------------------
// folds from (X, value) data to estimates

namespace {

struct Event {
  Integer X;
  Interval value;
  std::size_t witness = 0;
  bool zero = false;
};

std::pair<double, double> slope_of(const Interval& v, const Integer& X) {
  auto lr = log_ratio(v, log_abs(X));
  return {-lr.second, -lr.first};
}

Rational hundredths_floor(double x) {
  return make_rational(floor(Rational(std::floor(x * 100.0))), 100);
}

struct Fold {
  Rational certified;
  bool infinite = false;
  std::size_t witness = 0;
  Integer X;
  Interval value;
  std::vector<SlopePoint> slopes;
};

SlopePoint slope_point(const Integer& X, const Interval& v) {
  SlopePoint p;
  p.X = X;
  p.log_x = log_abs(X);
  if (v.lo <= 0) {
    p.lo = p.hi = std::numeric_limits<double>::infinity();
  } else {
    auto s = slope_of(v, X);
    p.lo = s.first;
    p.hi = s.second;
  }
  return p;
}

// Largest hundredth w <= start with every (value, X) satisfying value <= X^-w.
Rational certify_down(Rational w, const std::vector<std::pair<Interval, Integer>>& checks) {
  for (int i = 0; i < 100000; ++i, w -= make_rational(1, 100)) {
    bool ok = true;
    for (const auto& [v, X] : checks)
      if (!satisfies_exponent(v, X, w)) {
        ok = false;
        break;
      }
    if (ok) return w;
  }
  throw std::logic_error("exponent certification did not converge");
}

// events sorted by X, strictly decreasing values. Window: X in [Xtop^(1-tail), Xtop].
Fold fold_best(const std::vector<Event>& events, const Integer& Xtop, double tail) {
  if (events.empty()) throw std::invalid_argument("no records to estimate from");
  Fold f;
  for (const auto& e : events)
    if (e.X >= 2) f.slopes.push_back(slope_point(e.X, e.value));
  double lx = std::exp((1.0 - tail) * log_abs(Xtop));
  Integer Xlo = std::max(Integer(2), Integer(static_cast<long>(std::ceil(lx))));
  if (Xlo > Xtop) Xlo = Xtop;
  std::vector<Integer> points{Xlo};
  for (const auto& e : events)
    if (e.X > Xlo && e.X <= Xtop) points.push_back(e.X);
  double best = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (const Integer& X : points) {
    // best event with height <= X
    std::size_t k = events.size();
    for (std::size_t i = 0; i < events.size() && events[i].X <= X; ++i) k = i;
    if (k == events.size()) continue;
    const Event& e = events[k];
    if (e.zero) {
      f.infinite = true;
      f.witness = k;
      f.X = X;
      f.value = e.value;
      break;
    }
    SlopePoint p = slope_point(X, e.value);
    if (X != e.X) f.slopes.push_back(p);
    if (!found || p.lo > best) {
      best = p.lo;
      f.witness = k;
      f.X = X;
      f.value = e.value;
      found = true;
    }
  }
  if (!found && !f.infinite) throw std::invalid_argument("no record at or below the tail window");
  std::sort(f.slopes.begin(), f.slopes.end(), [](const SlopePoint& a, const SlopePoint& b) { return a.X < b.X; });
  if (found) f.certified = certify_down(hundredths_floor(best), {{f.value, f.X}});
  return f;
}

// per grid point values; the estimate is the minimum over the upper grid_tail share of points
Fold fold_uniform(const std::vector<Event>& per_x, double grid_tail) {
  Fold f;
  std::size_t first = static_cast<std::size_t>(std::floor(per_x.size() * (1.0 - grid_tail)));
  first = std::min(first, per_x.size() - 1);
  double worst = std::numeric_limits<double>::infinity();
  bool finite = false;
  std::vector<std::pair<Interval, Integer>> checks;
  for (std::size_t i = 0; i < per_x.size(); ++i) {
    SlopePoint p = slope_point(per_x[i].X, per_x[i].value);
    f.slopes.push_back(p);
    if (i < first) continue;
    checks.emplace_back(per_x[i].value, per_x[i].X);
    if (per_x[i].zero) continue;
    if (!finite || p.lo < worst) {
      worst = p.lo;
      f.witness = i;
      f.X = per_x[i].X;
      f.value = per_x[i].value;
      finite = true;
    }
  }
  if (!finite) {
    f.infinite = true;
    f.witness = first;
    f.X = per_x[first].X;
    f.value = per_x[first].value;
    return f;
  }
  f.certified = certify_down(hundredths_floor(worst), checks);
  return f;
}

void check_grid(const std::vector<Integer>& grid) {
  if (grid.size() < 4) throw std::invalid_argument("grid needs at least 4 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 2) throw std::invalid_argument("grid points must be >= 2");
    if (i > 0 && grid[i] <= grid[i - 1]) throw std::invalid_argument("grid must be increasing");
  }
}

std::vector<Event> record_events(const RecordList& r) {
  std::vector<Event> ev;
  for (std::size_t i = 0; i < r.records.size(); ++i)
    ev.push_back({r.records[i].height, r.records[i].value, i, r.records[i].zero});
  return ev;
}

}  // namespace

bool satisfies_exponent(const Interval& value, const Integer& X, const Rational& w) {
  if (value.hi <= 0) return true;
  if (X < 1) throw std::invalid_argument("X must be positive");
  const Integer& p = w.get_num();
  unsigned long q = w.get_den().get_ui();
  Rational lhs = rpow(value.hi, q);
  if (p >= 0) return lhs * Rational(ipow(X, p.get_ui())) <= 1;
  return lhs <= Rational(ipow(X, Integer(-p).get_ui()));
}

ExponentEstimate estimate_w(const RecordList& records, const EstimateConfig& cfg) {
  if (records.records.empty()) throw std::invalid_argument("empty record list");
  auto ev = record_events(records);
  Fold f = fold_best(ev, records.Hmax, cfg.tail_fraction);
  ExponentEstimate e;
  e.kind = ExponentKind::W;
  e.constraint = records.constraint;
  e.symbol = exponent_symbol(e.kind, e.constraint, false);
  e.certified_lower = f.certified;
  e.infinite = f.infinite;
  const ApproxRecord& r = records.records[f.witness];
  e.witness = r.witness;
  e.witness_height = r.height;
  e.witness_value = r.value;
  e.witness_X = f.X;
  e.slopes = f.slopes;
  e.method = EstimateMethod::BestRecords;
  e.heuristic = records.seeded;
  e.truncated = records.truncated;
  return e;
}

ExponentEstimate estimate_uniform_from(const RecordList& records, const std::vector<Integer>& Xgrid,
                                       const EstimateConfig& cfg) {
  check_grid(Xgrid);
  if (Xgrid.back() > records.Hmax) throw std::invalid_argument("grid exceeds the record height bound");
  if (records.records.empty()) throw std::invalid_argument("empty record list");
  std::vector<Event> per_x;
  for (const Integer& X : Xgrid) {
    std::size_t k = records.records.size();
    for (std::size_t i = 0; i < records.records.size() && records.records[i].height <= X; ++i) k = i;
    if (k == records.records.size()) throw std::invalid_argument("no record below the first grid point");
    per_x.push_back({X, records.records[k].value, k, records.records[k].zero});
  }
  Fold f = fold_uniform(per_x, cfg.grid_tail);
  ExponentEstimate e;
  e.kind = ExponentKind::W;
  e.constraint = records.constraint;
  e.hat = true;
  e.symbol = exponent_symbol(e.kind, e.constraint, true);
  e.certified_lower = f.certified;
  e.infinite = f.infinite;
  const ApproxRecord& r = records.records[per_x[f.witness].witness];
  e.witness = r.witness;
  e.witness_height = r.height;
  e.witness_value = r.value;
  e.witness_X = f.X;
  e.slopes = f.slopes;
  e.method = EstimateMethod::UniformGrid;
  e.heuristic = records.exhaustive_height < Xgrid.back();
  e.truncated = records.truncated;
  return e;
}

ExponentEstimate estimate_uniform(const CFNumber& zeta, const Constraint& c, const std::vector<Integer>& Xgrid,
                                  const ScanBudget& budget, const EstimateConfig& cfg) {
  check_grid(Xgrid);
  return estimate_uniform_from(best_records(zeta, c, Xgrid.back(), budget), Xgrid, cfg);
}

// ---------------------------------------------------------------------------------------------
// starred families

namespace {

// distance from zeta to the nearest real root of the candidate, or < 0 when none is found;
// v = P(zeta) (signed), exact closed form for degree <= 2, Newton step otherwise
ld approx_root_distance(const Coeffs& a, int n, ld v, const Fixed& fx) {
  int d = degree_of(a, n);
  ld zeta = fx.zl[1];
  if (d == 1) return std::fabs(v) / static_cast<ld>(a[1]);
  ld deriv = 0;
  for (int i = 1; i <= d; ++i) deriv += static_cast<ld>(i) * a[i] * fx.zl[i - 1];
  ld newton = deriv != 0 ? std::fabs(v / deriv) : std::numeric_limits<ld>::infinity();
  if (d == 2) {
    ld A = a[2], B = a[1], C = a[0];
    ld disc = B * B - 4 * A * C;
    if (disc < 0) return -1;
    ld sq = std::sqrt(disc);
    // Newton is off by a relative newton / separation; keep it only where that is negligible
    if (newton * (1 << 24) < sq / A) return newton;
    ld qv = -(B + (B >= 0 ? sq : -sq)) / 2;
    ld r1 = qv / A;
    ld r2 = qv != 0 ? C / qv : r1;
    return std::min(std::fabs(zeta - r1), std::fabs(zeta - r2));
  }
  return newton;
}

struct StarSlot {
  ld dist = 0;
  Coeffs a{};
  bool set = false;
};

}  // namespace

StarRecordList best_star_records(const CFNumber& zeta, const Constraint& c, const Integer& Hmax,
                                 const ScanBudget& budget) {
  check_constraint(c);
  if (c.n > 4) throw UnsupportedDegree("minimal polynomials are tested up to degree 4");
  long H = checked_long(Hmax);
  Fixed fx = make_fixed(zeta, c.n, Hmax);
  std::vector<StarSlot> slots(H + 1);
  ld dscale = 0;
  for (int i = 1; i <= c.n; ++i) dscale += i * std::pow(fx.zabs, i - 1);
  auto offer = [&](const Coeffs& a, long a0, i128 vsigned, long top) {
    long h = std::max(top, std::labs(a0));
    if (h > H) return;
    StarSlot& s = slots[h];
    ld v = to_ld(vsigned, fx.K);
    if (s.set && std::fabs(v) / (top * dscale) >= s.dist) return;
    Coeffs b = a;
    b[0] = a0;
    ld d = approx_root_distance(b, c.n, v, fx);
    if (d < 0 || (s.set && d >= s.dist)) return;
    if (!admissible_star(b, c)) return;
    s.dist = d;
    s.a = b;
    s.set = true;
  };
  StarRecordList out;
  out.constraint = c;
  out.Hmax = Hmax;
  std::uint64_t work = 0;
  long done = 0;
  for (long t = 1; t <= H; ++t) {
    if (budget.exhausted(work + shell_size(c, t))) break;
    work += scan_shell(fx, c, t, [&](const Coeffs& a, i128 s) {
      i128 fl = s >> fx.K;
      i128 frac = s - (fl << fx.K);
      offer(a, -static_cast<long>(fl), frac, t);
      offer(a, -static_cast<long>(fl) - 1, frac - fx.one, t);
    });
    done = t;
  }
  out.truncated = done < H;
  // small heights: every constant term, within a share of the budget
  long hb = std::min<long>({H, done, 30});
  while (hb > 1 && std::pow(2.0 * hb + 1, c.n + 1) > static_cast<double>(budget.max_work) / 10) --hb;
  for (long t = 1; t <= hb; ++t)
    scan_shell(fx, c, t, [&](const Coeffs& a, i128 s) {
      for (long a0 = -hb; a0 <= hb; ++a0) offer(a, a0, s + (static_cast<i128>(a0) << fx.K), t);
    });
  // certify prefix minima of dist * H
  ld best_approx = std::numeric_limits<ld>::infinity();
  Interval best_score;
  bool have = false;
  for (long h = 1; h <= H; ++h) {
    const StarSlot& s = slots[h];
    if (!s.set) continue;
    ld approx = s.dist * h;
    if (have && approx > best_approx * (1 + 1e-9L) + 1e-60L) continue;
    IntPoly P = to_poly(s.a, degree_of(s.a, c.n));
    Rational tol = s.dist > 0 ? Rational(static_cast<double>(s.dist)) * pow2(-40) : pow2(-300);
    if (tol <= 0 || tol > pow2(-40)) tol = std::min(Rational(pow2(-40)), tol > 0 ? tol : pow2(-300));
    NearestRoot nr;
    try {
      nr = nearest_root(P, zeta, tol);
    } catch (const NoWitness&) {
      continue;
    }
    Interval score = Rational(nr.witness.height) * nr.distance;
    bool zero = nr.distance.contains_zero();
    if (have && !(score.hi < best_score.lo)) continue;
    out.records.push_back({nr.witness, nr.distance, zero});
    best_score = score;
    best_approx = approx;
    have = true;
    if (zero) break;
  }
  return out;
}

ExponentEstimate estimate_w_star_from(const StarRecordList& records, const EstimateConfig& cfg) {
  if (records.records.empty()) throw NoWitness("no algebraic witness under the constraint");
  std::vector<Event> ev;
  for (std::size_t i = 0; i < records.records.size(); ++i) {
    const StarRecord& r = records.records[i];
    ev.push_back({r.alpha.height, Rational(r.alpha.height) * r.distance, i, r.zero});
  }
  Fold f = fold_best(ev, records.Hmax, cfg.tail_fraction);
  ExponentEstimate e;
  e.kind = ExponentKind::WStar;
  e.constraint = records.constraint;
  e.symbol = exponent_symbol(e.kind, e.constraint, false);
  e.certified_lower = f.certified;
  e.infinite = f.infinite;
  const StarRecord& r = records.records[f.witness];
  e.alpha = r.alpha;
  e.witness = r.alpha.minimal_polynomial;
  e.witness_height = r.alpha.height;
  e.witness_value = r.distance;
  e.witness_X = f.X;
  e.slopes = f.slopes;
  e.method = EstimateMethod::BestRecords;
  e.heuristic = true;
  e.truncated = records.truncated;
  return e;
}

ExponentEstimate estimate_w_star(const CFNumber& zeta, const Constraint& c, const Integer& Hmax,
                                 const ScanBudget& budget, const EstimateConfig& cfg) {
  return estimate_w_star_from(best_star_records(zeta, c, Hmax, budget), cfg);
}

// ---------------------------------------------------------------------------------------------
// quadratic witnesses with the cubic-power distance bound

Rational ds_constant(const CFNumber& zeta) {
  Interval z = zeta.enclose_bits(96);
  Interval sq = pow(z, 2);
  Rational m = std::max(Rational(1), sq.hi);  // straddling 1: the larger endpoint governs
  return make_rational(160, 9) * m;
}

std::vector<DSWitness> ds_witnesses(const CFNumber& zeta, const Integer& Hmax, const ScanBudget& budget) {
  if (rational_value(zeta)) throw PreconditionViolation("zeta is rational");
  long H = checked_long(Hmax);
  const Constraint c{DegreeMode::ExactIrreducible, false, 2};
  const Rational K = ds_constant(zeta);
  const ld Kd = static_cast<ld>(to_double(K));
  Fixed fx = make_fixed(zeta, 2, Hmax);
  const ld zabs = std::fabs(fx.zl[1]);
  // below this height a constant term other than the two nearest can still qualify
  long h_all = static_cast<long>(std::floor(std::sqrt(static_cast<double>(Kd * (2 * zabs + 2 * Kd + 1))))) + 1;
  h_all = std::min(h_all, H);
  std::vector<Coeffs> cands;
  std::set<std::array<long, 3>> seen;
  auto hit = [&](const Coeffs& b) {
    Interval v = eval_poly(to_poly(b, 2), zeta, pow2(-64));
    if (v.contains_zero())
      throw PreconditionViolation("zeta is a root of " + to_poly(b, 2).str());
  };
  auto consider = [&](const Coeffs& a, long a0, i128 vsigned, long top, bool low) {
    long h = std::max(top, std::labs(a0));
    if (h > H || (low ? h > h_all : h <= h_all)) return;
    i128 vabs = vsigned < 0 ? -vsigned : vsigned;
    Coeffs b = a;
    b[0] = a0;
    if (vabs <= fx.err) hit(b);
    ld v = to_ld(vsigned, fx.K);
    ld thr = Kd / (static_cast<ld>(h) * h * h) * (1 + 1e-6L) + 1e-30L;
    if (std::fabs(v) > thr * top * (2 * zabs + 1) * (1 + 1e-6L)) return;
    ld d = approx_root_distance(b, 2, v, fx);
    if (d < 0 || d > thr) return;
    if (!irreducible_primitive(b, 2)) return;
    if (seen.insert({b[0], b[1], b[2]}).second) cands.push_back(b);
  };
  for (long t = 1; t <= h_all; ++t)
    scan_shell(fx, c, t, [&](const Coeffs& a, i128 s) {
      for (long a0 = -h_all; a0 <= h_all; ++a0) consider(a, a0, s + (static_cast<i128>(a0) << fx.K), t, true);
    });
  std::uint64_t work = 0;
  for (long t = 1; t <= H; ++t) {
    if (budget.exhausted(work + shell_size(c, t)))
      throw BudgetExceeded("quadratic witness scan exceeded its work budget");
    work += scan_shell(fx, c, t, [&](const Coeffs& a, i128 s) {
      i128 fl = s >> fx.K;
      i128 frac = s - (fl << fx.K);
      consider(a, -static_cast<long>(fl), frac, t, false);
      consider(a, -static_cast<long>(fl) - 1, frac - fx.one, t, false);
    });
  }
  std::vector<DSWitness> out;
  for (const Coeffs& b : cands) {
    IntPoly P = to_poly(b, 2);
    Rational Hh = Rational(P.height());
    Rational tol = K / (Hh * Hh * Hh) * pow2(-40);
    // both roots can qualify at small heights
    for (Interval root : isolate_real_roots(P)) {
      Interval dist, cv;
      for (int round = 0; round < 4; ++round, tol *= pow2(-32)) {
        root = refine_root(P, root, tol);
        dist = abs(zeta.enclose(tol) - root);
        cv = (Hh * Hh * Hh) * dist;
        if (cv.hi <= K || cv.lo > K) break;
      }
      if (cv.hi > K) continue;
      AlgebraicWitness w;
      w.minimal_polynomial = P;
      w.isolating = root;
      w.degree = 2;
      w.height = P.height();
      w.monic = P.leading() == 1;
      out.push_back({w, dist, cv});
    }
  }
  std::sort(out.begin(), out.end(), [](const DSWitness& x, const DSWitness& y) {
    if (x.alpha.height != y.alpha.height) return x.alpha.height < y.alpha.height;
    if (x.alpha.minimal_polynomial.coeffs() != y.alpha.minimal_polynomial.coeffs())
      return x.alpha.minimal_polynomial.coeffs() < y.alpha.minimal_polynomial.coeffs();
    return x.alpha.isolating.lo < y.alpha.isolating.lo;
  });
  return out;
}

// ---------------------------------------------------------------------------------------------
// inhomogeneous approximation

ModMin min_mod_linear(const Integer& count, const Integer& m, const Integer& a, const Integer& b) {
  if (count < 1) throw std::invalid_argument("empty range");
  if (a == 0) return {b, 0};
  // wraps past a multiple of m happen at positions 1..count-1; after a wrap the value lies in [0, a)
  Integer T = floor_div(a * (count - 1) + b, m);
  if (T == 0) return {b, 0};
  Integer w0 = pos_mod(b - m, a);
  Integer d = pos_mod(m, a);
  // successive wrap values decrease by d modulo a
  ModMin sub = d == 0 ? ModMin{w0, 0} : min_mod_linear_down(T, a, d, w0);
  if (sub.value >= b) return {b, 0};
  return {sub.value, ceil_div((sub.x + 1) * m - b, a)};
}

ModMin min_mod_linear_down(const Integer& count, const Integer& m, const Integer& d, const Integer& b) {
  if (count < 1) throw std::invalid_argument("empty range");
  if (d == 0) return {b, 0};
  Integer x0 = floor_div(b, d);
  if (x0 >= count - 1) return {b - d * (count - 1), count - 1};
  // run ends (last value before wrapping up) lie in [0, d) and increase by m mod d modulo d
  Integer T = ceil_div(count * d - b, m);
  Integer e0 = pos_mod(b, d);
  Integer c = pos_mod(m, d);
  ModMin sub = c == 0 ? ModMin{e0, 0} : min_mod_linear(T, d, c, e0);
  Integer xs = floor_div(b + sub.x * m, d);
  Integer vlast = pos_mod(b - d * (count - 1), m);
  if (vlast < sub.value) return {vlast, count - 1};
  return {sub.value, xs};
}

namespace {

Rational eval_rational_poly(const std::vector<Rational>& A, const Rational& x) {
  Rational r = 0;
  for (std::size_t i = A.size(); i-- > 0;) r = r * x + A[i];
  return r;
}

Integer lcm_den(const std::vector<Rational>& A) {
  Integer l = 1;
  for (const auto& c : A) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  return l;
}

}  // namespace

InhomPoint inhom_minimum(const CFNumber& zeta, const std::vector<Rational>& A, const Integer& X) {
  if (X < 1) throw std::invalid_argument("X must be >= 1");
  auto exact = rational_value(zeta);
  Rational zt, slack = 0;
  if (exact) {
    zt = *exact;
  } else {
    // convergent with q^2 far above X: the surrogate minimum is within slack of the true one
    Integer need = X * X * (Integer(1) << 64);
    std::size_t k = 1;
    Convergent cv = zeta.convergent(k);
    while (cv.q * cv.q < need) cv = zeta.convergent(++k);
    zt = cv.value();
    Rational e = make_rational(1, cv.q * cv.q);
    Rational spread = Rational(X);
    Rational base = abs(zt) + 1;
    for (std::size_t i = 1; i < A.size(); ++i) spread += Rational(static_cast<long>(i)) * abs(A[i]) * rpow(base, i - 1);
    slack = 2 * e * spread;
  }
  Rational at = eval_rational_poly(A, zt);
  Integer m;
  mpz_lcm(m.get_mpz_t(), zt.get_den().get_mpz_t(), at.get_den().get_mpz_t());
  Integer a = pos_mod(zt.get_num() * (m / zt.get_den()), m);
  Integer b = pos_mod(at.get_num() * (m / at.get_den()), m);
  // x_1 = 1 + x', 0 <= x' < X: distance below (up) and above (down) the nearest integer
  ModMin up = min_mod_linear(X, m, a, pos_mod(a + b, m));
  ModMin down = min_mod_linear_down(X, m, a, pos_mod(-a - b, m));
  InhomPoint p;
  p.X = X;
  Rational y;
  if (up.value <= down.value) {
    p.x1 = up.x + 1;
    y = Rational(p.x1) * zt + at;
    p.x0 = -floor(y);
  } else {
    p.x1 = down.x + 1;
    y = Rational(p.x1) * zt + at;
    p.x0 = -ceil(y);
  }
  Integer D = lcm_den(A);
  D = D == 0 ? Integer(1) : D;
  std::vector<Integer> coef(std::max<std::size_t>(A.size(), 2), 0);
  for (std::size_t i = 0; i < A.size(); ++i) coef[i] = floor(A[i] * Rational(D));
  coef[0] += D * p.x0;
  coef[1] += D * p.x1;
  IntPoly P(coef);
  Interval v = P.is_zero() ? Interval(Rational(0)) : certified_abs(P, zeta, exact, pow2(-64));
  p.value = Interval(v.lo / Rational(D), v.hi / Rational(D));
  p.slack = slack;
  return p;
}

std::vector<Integer> convergent_grid(const CFNumber& zeta, std::size_t max_index) {
  std::vector<Integer> q;
  for (std::size_t i = 0; i <= max_index; ++i) {
    try {
      q.push_back(zeta.convergent(i).q);
    } catch (const RationalCase&) {
      break;
    }
  }
  std::vector<Integer> out;
  for (std::size_t k = 1; k + 1 < q.size(); ++k) {
    Integer X = iroot(q[k] * q[k + 1], 2);
    if (X >= 2 && (out.empty() || X > out.back())) out.push_back(X);
  }
  return out;
}

ExponentEstimate inhom_w1_hat(const CFNumber& zeta, const std::vector<Rational>& A, const std::vector<Integer>& Xgrid,
                              const EstimateConfig& cfg) {
  check_grid(Xgrid);
  std::vector<Event> per_x;
  std::vector<InhomPoint> pts;
  for (std::size_t i = 0; i < Xgrid.size(); ++i) {
    pts.push_back(inhom_minimum(zeta, A, Xgrid[i]));
    per_x.push_back({Xgrid[i], pts.back().value, i, pts.back().value.contains_zero()});
  }
  Fold f = fold_uniform(per_x, cfg.grid_tail);
  ExponentEstimate e;
  e.kind = ExponentKind::Inhomogeneous;
  e.constraint = Constraint{DegreeMode::AtMost, false, 1};
  e.hat = true;
  e.symbol = exponent_symbol(e.kind, e.constraint, true);
  e.certified_lower = f.certified;
  e.infinite = f.infinite;
  const InhomPoint& p = pts[f.witness];
  e.witness = IntPoly(std::vector<Integer>{p.x0, p.x1});
  e.witness_vector = {p.x0, p.x1};
  e.witness_height = std::max(abs(p.x0), abs(p.x1));
  e.witness_value = p.value;
  e.witness_X = p.X;
  e.slopes = f.slopes;
  e.method = EstimateMethod::UniformGrid;
  e.heuristic = false;
  return e;
}

// ---------------------------------------------------------------------------------------------
// simultaneous approximation

std::vector<SimRecord> simultaneous_records(const CFNumber& zeta, int n, const Integer& Xmax) {
  if (n < 1 || n > kMaxN) throw UnsupportedDegree("simultaneous records support 1 <= n <= 6");
  long Xl = checked_long(Xmax);
  Fixed fx = make_fixed(zeta, n, Xmax);
  auto exact = rational_value(zeta);
  const i128 err = to_i128(Xmax + 2);
  const i128 mask = fx.one - 1;
  std::vector<i128> acc(n + 1, 0);
  std::vector<SimRecord> out;
  i128 best = fx.one;
  for (long x = 1; x <= Xl; ++x) {
    i128 v = 0;
    for (int j = 1; j <= n; ++j) {
      acc[j] += fx.z[j];
      i128 frac = acc[j] & mask;
      v = std::max(v, std::min(frac, fx.one - frac));
    }
    if (v >= best) continue;
    SimRecord r;
    r.v.push_back(Integer(x));
    Interval val(Rational(0));
    for (int j = 1; j <= n; ++j) {
      i128 y = (acc[j] + (fx.one >> 1)) >> fx.K;
      r.v.push_back(to_integer(y));
      std::vector<Integer> c(j + 1, 0);
      c[0] = -to_integer(y);
      c[j] += Integer(x);
      IntPoly P(c);
      Interval d = P.is_zero() ? Interval(Rational(0)) : certified_abs(P, zeta, exact, pow2(-64));
      val = Interval(std::max(val.lo, d.lo), std::max(val.hi, d.hi));
    }
    r.value = val;
    r.zero = val.contains_zero();
    if (!out.empty() && !(val.hi < out.back().value.lo)) {
      if (v + 2 * err < best) best = v;
      continue;
    }
    out.push_back(r);
    best = v;
    if (r.zero) break;
  }
  return out;
}

ExponentEstimate estimate_lambda(const CFNumber& zeta, int n, const Integer& Xmax, const EstimateConfig& cfg) {
  auto recs = simultaneous_records(zeta, n, Xmax);
  std::vector<Event> ev;
  for (std::size_t i = 0; i < recs.size(); ++i) ev.push_back({recs[i].v[0], recs[i].value, i, recs[i].zero});
  Fold f = fold_best(ev, Xmax, cfg.tail_fraction);
  ExponentEstimate e;
  e.kind = ExponentKind::Lambda;
  e.constraint = Constraint{DegreeMode::AtMost, false, n};
  e.symbol = exponent_symbol(e.kind, e.constraint, false);
  e.certified_lower = f.certified;
  e.infinite = f.infinite;
  e.witness_vector = recs[f.witness].v;
  e.witness_height = recs[f.witness].v[0];
  e.witness_value = recs[f.witness].value;
  e.witness_X = f.X;
  e.slopes = f.slopes;
  return e;
}

ExponentEstimate estimate_lambda_uniform(const CFNumber& zeta, int n, const std::vector<Integer>& Xgrid,
                                         const EstimateConfig& cfg) {
  check_grid(Xgrid);
  auto recs = simultaneous_records(zeta, n, Xgrid.back());
  std::vector<Event> per_x;
  for (const Integer& X : Xgrid) {
    std::size_t k = recs.size();
    for (std::size_t i = 0; i < recs.size() && recs[i].v[0] <= X; ++i) k = i;
    if (k == recs.size()) throw std::invalid_argument("no simultaneous record below the first grid point");
    per_x.push_back({X, recs[k].value, k, recs[k].zero});
  }
  Fold f = fold_uniform(per_x, cfg.grid_tail);
  ExponentEstimate e;
  e.kind = ExponentKind::Lambda;
  e.constraint = Constraint{DegreeMode::AtMost, false, n};
  e.hat = true;
  e.symbol = exponent_symbol(e.kind, e.constraint, true);
  e.certified_lower = f.certified;
  e.infinite = f.infinite;
  const SimRecord& r = recs[per_x[f.witness].witness];
  e.witness_vector = r.v;
  e.witness_height = r.v[0];
  e.witness_value = r.value;
  e.witness_X = f.X;
  e.slopes = f.slopes;
  e.method = EstimateMethod::UniformGrid;
  return e;
}

double mu_bound(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n == 1) return 1.0;
  if (n == 2) return (3.0 + std::sqrt(5.0)) / 2.0;
  if (n == 3) return 3.0 + std::sqrt(2.0);
  double m = n;
  return m - 0.5 + std::sqrt(m * m - 2 * m + 1.25);
}

// ---------------------------------------------------------------------------------------------
// relation report

bool RelationReport::all_pass() const {
  for (const auto& c : checks)
    if (c.applicable && !c.pass) return false;
  return true;
}

namespace {

struct Key {
  ExponentKind kind;
  DegreeMode mode;
  bool monic, hat;
  int n;
  bool operator<(const Key& o) const {
    return std::tie(kind, mode, monic, hat, n) < std::tie(o.kind, o.mode, o.monic, o.hat, o.n);
  }
};

double value_of(const ExponentEstimate& e) {
  return e.infinite ? std::numeric_limits<double>::infinity() : to_double(e.certified_lower);
}

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace

RelationReport relation_report(const std::vector<ExponentEstimate>& estimates, int n, double slack,
                               const CFNumber* zeta) {
  std::map<Key, const ExponentEstimate*> by;
  std::set<std::string> symbols;
  for (const auto& e : estimates) {
    if (!symbols.insert(e.symbol).second) throw std::invalid_argument("duplicate estimate " + e.symbol);
    if (e.constraint.n > n || e.constraint.n < 1) throw std::invalid_argument("estimate " + e.symbol + " exceeds n");
    by[Key{e.kind, e.constraint.mode, e.constraint.monic, e.hat, e.constraint.n}] = &e;
  }
  auto get = [&](ExponentKind k, DegreeMode m, bool monic, bool hat, int deg) -> const ExponentEstimate* {
    auto it = by.find(Key{k, m, monic, hat, deg});
    if (it != by.end()) return it->second;
    // linear polynomials are irreducible: the exact and at-most degree-1 families coincide
    if (deg == 1 && (k == ExponentKind::W || k == ExponentKind::WStar)) {
      DegreeMode other = m == DegreeMode::AtMost ? DegreeMode::ExactIrreducible : DegreeMode::AtMost;
      it = by.find(Key{k, other, monic, hat, deg});
      if (it != by.end()) return it->second;
    }
    return nullptr;
  };
  RelationReport rep;
  rep.n = n;
  rep.slack = slack;
  auto add_le = [&](const std::string& name, const std::string& rel, const ExponentEstimate* a, double ka,
                    double offset, const ExponentEstimate* b) {
    RelationCheck c{name, rel, true, true, ""};
    if (!a || !b) {
      c.applicable = false;
      c.detail = "missing estimate";
    } else {
      double lhs = ka * value_of(*a) + offset, rhs = value_of(*b);
      c.pass = std::isinf(rhs) || (!std::isinf(lhs) && lhs <= rhs + slack);
      c.detail = a->symbol + " -> " + fmt(lhs) + ", " + b->symbol + " = " + fmt(rhs);
    }
    rep.checks.push_back(c);
  };
  const auto W = ExponentKind::W, WS = ExponentKind::WStar, L = ExponentKind::Lambda;
  const auto AM = DegreeMode::AtMost, EX = DegreeMode::ExactIrreducible;
  std::string ns = std::to_string(n);
  for (bool monic : {false, true}) {
    std::string tag = monic ? " (monic)" : "";
    add_le("exact degree below bounded degree" + tag, "w_{=n} <= w_n", get(W, EX, monic, false, n), 1, 0,
           get(W, AM, monic, false, n));
    add_le("uniform exact degree below uniform bounded degree" + tag, "ŵ_{=n} <= ŵ_n", get(W, EX, monic, true, n), 1,
           0, get(W, AM, monic, true, n));
    add_le("starred below unstarred" + tag, "w*_n <= w_n", get(WS, AM, monic, false, n), 1, 0,
           get(W, AM, monic, false, n));
    add_le("starred below unstarred, exact degree" + tag, "w*_{=n} <= w_{=n}", get(WS, EX, monic, false, n), 1, 0,
           get(W, EX, monic, false, n));
    add_le("unstarred within n-1 of starred" + tag, "w_n <= w*_n + n - 1", get(W, AM, monic, false, n), 1,
           -(n - 1.0), get(WS, AM, monic, false, n));
    for (auto mode : {AM, EX})
      add_le(std::string("uniform below best") + (mode == EX ? ", exact degree" : "") + tag,
             mode == EX ? "ŵ_{=n} <= w_{=n}" : "ŵ_n <= w_n", get(W, mode, monic, true, n), 1, 0,
             get(W, mode, monic, false, n));
  }
  add_le("monic below general", "w_n^{int} <= w_n", get(W, AM, true, false, n), 1, 0, get(W, AM, false, false, n));
  for (int k = 1; k < n; ++k)
    add_le("monotone in the degree bound", "w_" + std::to_string(k) + " <= w_" + ns, get(W, AM, false, false, k), 1, 0,
           get(W, AM, false, false, n));
  {
    RelationCheck c{"bounded degree is the maximum over exact degrees", "w_n = max_k w_{=k}", true, true, ""};
    const ExponentEstimate* wn = get(W, AM, false, false, n);
    double mx = -std::numeric_limits<double>::infinity();
    std::string parts;
    for (int k = 1; k <= n && c.applicable; ++k) {
      const ExponentEstimate* e = get(W, EX, false, false, k);
      if (!e) {
        c.applicable = false;
        break;
      }
      mx = std::max(mx, value_of(*e));
      parts += e->symbol + "=" + fmt(value_of(*e)) + " ";
    }
    if (!wn) c.applicable = false;
    if (c.applicable) {
      double w = value_of(*wn);
      c.pass = (std::isinf(w) && std::isinf(mx)) || std::fabs(w - mx) <= slack;
      c.detail = wn->symbol + "=" + fmt(w) + " vs " + parts;
    } else {
      c.detail = "missing estimate";
    }
    rep.checks.push_back(c);
  }
  {
    const ExponentEstimate* wn = get(W, AM, false, false, n);
    const ExponentEstimate* ln = get(L, AM, false, false, n);
    add_le("transference, simultaneous to polynomial", "n λ_n + n - 1 <= w_n", ln, n, n - 1.0, wn);
    RelationCheck c{"transference, polynomial to simultaneous", "(w_n - n + 1) / ((n-1) w_n + n) <= λ_n", true, true,
                    ""};
    if (!wn || !ln) {
      c.applicable = false;
      c.detail = "missing estimate";
    } else {
      double w = value_of(*wn), l = value_of(*ln);
      double lhs = std::isinf(w) ? (n == 1 ? w : 1.0 / (n - 1)) : (w - n + 1) / ((n - 1) * w + n);
      c.pass = std::isinf(l) || (!std::isinf(lhs) && lhs <= l + slack);
      c.detail = "bound " + fmt(lhs) + ", " + ln->symbol + " = " + fmt(l);
    }
    rep.checks.push_back(c);
  }
  auto floor_check = [&](const std::string& name, const std::string& rel, const ExponentEstimate* e, double lo,
                         const std::string& note) {
    RelationCheck c{name, rel, true, true, ""};
    if (!e) {
      c.applicable = false;
      c.detail = "missing estimate";
    } else {
      double v = value_of(*e);
      c.pass = v >= lo - slack;
      c.detail = e->symbol + " = " + fmt(v) + note;
    }
    rep.checks.push_back(c);
  };
  char mu[64];
  std::snprintf(mu, sizeof mu, "; uniform spectrum ends at %.6g", mu_bound(n));
  floor_check("pigeonhole floor", "w_n >= n", get(W, AM, false, false, n), n, "");
  floor_check("pigeonhole floor, uniform", "ŵ_n >= n", get(W, AM, false, true, n), n, mu);
  floor_check("pigeonhole floor, simultaneous", "λ_n >= 1/n", get(L, AM, false, false, n), 1.0 / n, "");
  floor_check("pigeonhole floor, simultaneous uniform", "λ̂_n >= 1/n", get(L, AM, false, true, n), 1.0 / n, "");
  add_le("uniform below best, simultaneous", "λ̂_n <= λ_n", get(L, AM, false, true, n), 1, 0,
         get(L, AM, false, false, n));
  // starred witnesses convert to unstarred ones
  for (const auto& e : estimates) {
    if (e.kind != ExponentKind::WStar) continue;
    RelationCheck c{"witness conversion " + e.symbol, "|P(ζ)| <= D H (1 + max(|ζ|,|α|))^(D-1) |ζ - α|", true, true,
                    ""};
    if (!zeta || !e.alpha) {
      c.applicable = false;
      c.detail = zeta ? "no algebraic witness stored" : "number not supplied";
    } else if (e.infinite) {
      // alpha = zeta: both sides vanish
      c.detail = e.alpha->minimal_polynomial.str() + ": exact hit, both sides 0";
    } else {
      WitnessBound wb = witness_convert(e.alpha->minimal_polynomial, *zeta, *e.alpha, pow2(-80));
      c.pass = wb.holds;
      c.detail = e.alpha->minimal_polynomial.str() + ": lhs " + wb.lhs.str() + ", rhs " + wb.rhs.str();
    }
    rep.checks.push_back(c);
  }
  return rep;
}

std::vector<ExponentEstimate> estimate_suite(const CFNumber& zeta, int n, const SuiteConfig& cfg) {
  if (n < 1) throw std::invalid_argument("estimate_suite: n must be positive");
  Integer top = std::max(cfg.Hmax, cfg.Xgrid.empty() ? Integer(1) : cfg.Xgrid.back());
  std::vector<ExponentEstimate> out;
  for (int k = 1; k <= n; ++k) {
    std::vector<DegreeMode> modes{DegreeMode::AtMost};
    if (k >= 2) modes.push_back(DegreeMode::ExactIrreducible);
    for (auto mode : modes) {
      RecordList all = best_records(zeta, Constraint{mode, false, k}, top, cfg.budget);
      RecordList capped = all;
      std::erase_if(capped.records, [&](const ApproxRecord& r) { return r.height > cfg.Hmax; });
      capped.Hmax = cfg.Hmax;
      capped.exhaustive_height = std::min(capped.exhaustive_height, cfg.Hmax);
      if (!capped.records.empty()) out.push_back(estimate_w(capped, cfg.est));
      if (k == n) out.push_back(estimate_uniform_from(all, cfg.Xgrid, cfg.est));
    }
  }
  if (cfg.monic) {
    std::vector<DegreeMode> modes{DegreeMode::AtMost};
    if (n >= 2) modes.push_back(DegreeMode::ExactIrreducible);
    for (auto mode : modes) {
      RecordList all = best_records(zeta, Constraint{mode, true, n}, top, cfg.budget);
      RecordList capped = all;
      std::erase_if(capped.records, [&](const ApproxRecord& r) { return r.height > cfg.Hmax; });
      capped.Hmax = cfg.Hmax;
      capped.exhaustive_height = std::min(capped.exhaustive_height, cfg.Hmax);
      if (!capped.records.empty()) out.push_back(estimate_w(capped, cfg.est));
      out.push_back(estimate_uniform_from(all, cfg.Xgrid, cfg.est));
    }
  }
  out.push_back(estimate_w_star(zeta, Constraint{DegreeMode::AtMost, false, n}, cfg.star_Hmax, cfg.budget, cfg.est));
  out.push_back(estimate_lambda(zeta, n, cfg.lambda_Xmax, cfg.est));
  out.push_back(estimate_lambda_uniform(zeta, n, cfg.lambda_grid, cfg.est));
  return out;
}

std::vector<ExponentEstimate> estimate_suite(const CFNumber& zeta, int n) {
  return estimate_suite(zeta, n, suite_defaults(n));
}

SuiteConfig suite_defaults(int n) {
  SuiteConfig cfg;
  long top = n == 1 ? 1'000'000 : n == 2 ? 10'000 : 1'000;
  cfg.Hmax = top;
  cfg.lambda_Xmax = top;
  cfg.star_Hmax = top;
  cfg.Xgrid.clear();
  for (long x = top; x >= 10 && cfg.Xgrid.size() < 4; x /= 10) cfg.Xgrid.insert(cfg.Xgrid.begin(), Integer(x));
  while (cfg.Xgrid.size() < 4) cfg.Xgrid.push_back(cfg.Xgrid.back() * 2);
  cfg.lambda_grid = cfg.Xgrid;
  return cfg;
}

// ---------------------------------------------------------------------------------------------
// serialization

namespace {

nlohmann::json interval_json(const Interval& v) { return nlohmann::json::array({to_string(v.lo), to_string(v.hi)}); }

nlohmann::json integers_json(const std::vector<Integer>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) {
    if (x.fits_slong_p())
      a.push_back(x.get_si());
    else
      a.push_back(to_string(x));
  }
  return a;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace

nlohmann::json estimate_to_json(const ExponentEstimate& e) {
  nlohmann::json j;
  j["symbol"] = e.symbol;
  j["certified_lower"] = to_string(e.certified_lower);
  j["infinite"] = e.infinite;
  j["method"] = e.method == EstimateMethod::BestRecords ? "best_records" : "uniform_grid";
  j["heuristic"] = e.heuristic;
  j["truncated"] = e.truncated;
  nlohmann::json w;
  if (e.kind == ExponentKind::Lambda)
    w["vector"] = integers_json(e.witness_vector);
  else
    w["poly"] = integers_json(e.witness.coeffs());
  w["H"] = to_string(e.witness_height);
  w["X"] = to_string(e.witness_X);
  w["value"] = interval_json(e.witness_value);
  if (e.alpha) w["alpha_isolating"] = interval_json(e.alpha->isolating);
  j["witness"] = w;
  nlohmann::json s = nlohmann::json::array();
  for (const auto& p : e.slopes) {
    if (!std::isfinite(p.lo)) continue;
    s.push_back(nlohmann::json::array({round12(p.log_x), round12(p.lo), round12(p.hi)}));
  }
  j["slopes"] = s;
  return j;
}

nlohmann::json report_to_json(const RelationReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["slack"] = r.slack;
  j["all_pass"] = r.all_pass();
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : r.checks)
    cs.push_back({{"name", c.name},
                  {"relation", c.relation},
                  {"applicable", c.applicable},
                  {"pass", c.pass},
                  {"detail", c.detail}});
  j["checks"] = cs;
  return j;
}

std::string slopes_csv(const ExponentEstimate& e) {
  std::ostringstream os;
  os << "X,log_x,slope_lo,slope_hi\n";
  char buf[128];
  for (const auto& p : e.slopes) {
    std::snprintf(buf, sizeof buf, ",%.12g,%.12g,%.12g\n", p.log_x, p.lo, p.hi);
    os << to_string(p.X) << buf;
  }
  return os.str();
}

}  // namespace dioph
