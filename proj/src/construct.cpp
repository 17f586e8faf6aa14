#include "dioph/construct.hpp"

#include <stdexcept>

#include "dioph/json_io.hpp"

namespace dioph {

namespace {

std::vector<Integer> rational_terms(const Rational& r) {
  std::vector<Integer> terms;
  Integer n = r.get_num(), d = r.get_den();
  while (d != 0) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    terms.push_back(a);
    Integer rem = n - a * d;
    n = d;
    d = rem;
  }
  return terms;
}

// Shared prefix a_0..a_k valid for every number in [lo, hi]: both expansions agree
// there and continue past k, so both complete quotients lie strictly inside (a_k, a_k + 1).
std::vector<Integer> common_prefix(const Rational& lo, const Rational& hi) {
  auto a = rational_terms(lo), b = rational_terms(hi);
  std::vector<Integer> out;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i + 1 < n && a[i] == b[i]; ++i) out.push_back(a[i]);
  return out;
}

std::vector<Integer> denominators(const std::vector<Integer>& a) {
  std::vector<Integer> q;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k == 0) q.push_back(1);
    else if (k == 1) q.push_back(a[1]);
    else q.push_back(Integer(a[k] * q[k - 1] + q[k - 2]));
  }
  return q;
}

template <class NextTerm>
void grow(ConstructedNumber& out, std::size_t max_terms, std::size_t bit_budget, NextTerm next) {
  out.terms = {Integer(0)};
  std::vector<Integer> q = {Integer(1)};
  for (std::size_t j = 0; j < max_terms; ++j) {
    if (mpz_sizeinbase(q.back().get_mpz_t(), 2) > bit_budget) {
      out.overflow = true;
      break;
    }
    Integer a = j == 0 ? Integer(2) : next(j, q[j]);
    out.terms.push_back(a);
    Integer next_q = j == 0 ? a : Integer(a * q[j] + q[j - 1]);
    q.push_back(next_q);
  }
  out.truncated = true;
  out.value = CFNumber::from_terms(out.terms);
}

}  // namespace

Integer floor_pow(const Integer& q, const Rational& exponent) {
  if (exponent < 0) throw std::invalid_argument("floor_pow needs a nonnegative exponent");
  if (q < 0) throw std::invalid_argument("floor_pow needs a nonnegative base");
  unsigned long a = exponent.get_num().get_ui(), b = exponent.get_den().get_ui();
  return iroot(ipow(q, a), b);
}

ConstructedNumber build_bw(const Rational& w, const Integer& M, std::size_t max_terms, std::size_t bit_budget) {
  if (w < 1) throw std::invalid_argument("B_w needs w >= 1");
  if (M < 1) throw std::invalid_argument("B_w needs M >= 1");
  ConstructedNumber out(CFNumber::golden());
  out.tag = ClassTag::Bw;
  out.w = w;
  out.M = M;
  for (int n = 1; Rational(2 * n - 1) <= w; ++n) out.claimed_Dnw.emplace_back(n, w);
  Rational e = w - 1;
  grow(out, max_terms, bit_budget, [&](std::size_t, const Integer& qj) -> Integer { return M * floor_pow(qj, e); });
  return out;
}

ConstructedNumber build_strong_liouville(std::size_t max_terms, std::size_t bit_budget) {
  ConstructedNumber out(CFNumber::golden());
  out.tag = ClassTag::BInfinity;
  out.schedule = "a_{j+1}=q_j^j";
  grow(out, max_terms, bit_budget, [](std::size_t j, const Integer& qj) { return ipow(qj, j); });
  return out;
}

ConstructedNumber build_algebraic(const IntPoly& P, const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("isolating interval needs lo < hi");
  int slo = sgn(P.eval(lo)), shi = sgn(P.eval(hi));
  if (slo * shi > 0) throw std::invalid_argument("no sign change on the isolating interval");
  struct Root {
    IntPoly P;
    Rational lo, hi;
    int slo;
    std::vector<Integer> known;
    bool exact = false;
  };
  auto st = std::make_shared<Root>();
  st->P = P;
  st->lo = lo;
  st->hi = hi;
  st->slo = slo;
  if (slo == 0) st->exact = true, st->hi = lo;
  else if (shi == 0) st->exact = true, st->lo = hi;
  if (st->exact) st->known = rational_terms(st->lo);
  ConstructedNumber out(CFNumber::from_generator(
      [st](std::size_t i, const std::vector<Integer>&) -> std::optional<Integer> {
        while (st->known.size() <= i) {
          if (st->exact) return std::nullopt;
          for (int step = 0; step < 64; ++step) {
            Rational mid = (st->lo + st->hi) / 2;
            int s = sgn(st->P.eval(mid));
            if (s == 0) {
              st->exact = true;
              st->lo = st->hi = mid;
              st->known = rational_terms(mid);
              break;
            }
            if (s == st->slo) st->lo = mid;
            else st->hi = mid;
          }
          if (!st->exact) st->known = common_prefix(st->lo, st->hi);
        }
        return st->known[i];
      }));
  out.tag = ClassTag::Algebraic;
  return out;
}

ConstructedNumber build_custom(std::vector<Integer> terms) {
  ConstructedNumber out(CFNumber::from_terms(terms));
  out.terms = std::move(terms);
  return out;
}

ConstructedNumber cube_root_two() { return build_algebraic(IntPoly{-2, 0, 0, 1}, Rational(1), Rational(2)); }

ConstructedNumber golden_ratio() {
  ConstructedNumber out(CFNumber::golden());
  out.tag = ClassTag::Algebraic;
  return out;
}

namespace {
std::string str_field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw std::invalid_argument(std::string("field '") + key + "' must be a rational string or integer");
}
}  // namespace

ConstructedNumber construct_from_json(const nlohmann::json& spec) {
  try {
    std::string cls = spec.at("class").get<std::string>();
    if (cls == "Bw") {
      Integer M = spec.contains("M") ? Integer(str_field(spec, "M")) : Integer(1);
      return build_bw(parse_rational(str_field(spec, "w")), M, spec.value("max_terms", 8));
    }
    if (cls == "BInfinity") return build_strong_liouville(spec.value("max_terms", 6));
    if (cls == "Golden") return golden_ratio();
    if (cls == "CubeRootTwo") return cube_root_two();
    if (cls == "Algebraic") {
      return build_algebraic(poly_from_json(spec.at("poly")), parse_rational(str_field(spec, "lo")),
                             parse_rational(str_field(spec, "hi")));
    }
    if (cls == "Custom") {
      std::vector<Integer> terms;
      for (const auto& v : spec.at("terms")) terms.push_back(integer_from_json(v));
      return build_custom(std::move(terms));
    }
    if (cls == "Rational") {
      Rational r = parse_rational(str_field(spec, "value"));
      return build_custom(rational_terms(r));
    }
    throw std::invalid_argument("unknown number class '" + cls + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed construction spec: ") + e.what());
  }
}

nlohmann::json describe(const ConstructedNumber& x) {
  nlohmann::json j;
  switch (x.tag) {
    case ClassTag::Bw:
      j["class"] = "Bw";
      j["w"] = to_string(x.w);
      j["M"] = x.M.get_str();
      break;
    case ClassTag::BInfinity:
      j["class"] = "BInfinity";
      j["schedule"] = x.schedule;
      break;
    case ClassTag::Algebraic: j["class"] = "Algebraic"; break;
    case ClassTag::Custom: j["class"] = "Custom"; break;
  }
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& a : x.terms) terms.push_back(a.get_str());
  j["terms"] = terms;
  nlohmann::json q = nlohmann::json::array();
  for (const auto& v : denominators(x.terms)) q.push_back(v.get_str());
  j["q"] = q;
  nlohmann::json claims = nlohmann::json::array();
  for (const auto& [n, w] : x.claimed_Dnw) claims.push_back({n, to_string(w)});
  j["claimed_Dnw"] = claims;
  j["truncated"] = x.truncated;
  j["overflow"] = x.overflow;
  return j;
}

std::pair<double, double> convergent_slope_bracket(const CFNumber& x, std::size_t j) {
  auto [den_hi, den_lo] = x.slope_bracket_denominators(j);
  double lq = log_abs(x.convergent(j).q);
  if (lq <= 0) throw std::domain_error("slope undefined for q_j = 1");
  return {log_abs(den_lo) / lq, log_abs(den_hi) / lq};
}

}  // namespace dioph
