#include "dioph/cf.hpp"

#include <stdexcept>

#include "dioph/errors.hpp"

namespace dioph {

CFNumber CFNumber::from_terms(std::vector<Integer> terms) {
  if (terms.empty()) throw std::invalid_argument("empty continued fraction");
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i] < 1) throw std::invalid_argument("partial quotient a_i < 1 for i >= 1");
  auto shared = std::make_shared<std::vector<Integer>>(std::move(terms));
  return from_generator([shared](std::size_t i, const std::vector<Integer>&) -> std::optional<Integer> {
    if (i < shared->size()) return (*shared)[i];
    return std::nullopt;
  });
}

CFNumber CFNumber::from_generator(Generator gen) {
  auto s = std::make_shared<State>();
  s->gen = std::move(gen);
  return CFNumber(std::move(s));
}

CFNumber CFNumber::from_rational(const Rational& r) {
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
  return from_terms(std::move(terms));
}

CFNumber CFNumber::golden() {
  return from_generator([](std::size_t, const std::vector<Integer>&) { return std::optional<Integer>(1); });
}

bool CFNumber::extend_to(std::size_t i) const {
  State& st = *s_;
  while (st.a.size() <= i) {
    if (st.ended) return false;
    auto next = st.gen(st.a.size(), st.q);
    if (!next) {
      st.ended = true;
      return false;
    }
    std::size_t k = st.a.size();
    if (k >= 1 && *next < 1) throw std::logic_error("generator produced a_i < 1");
    if (k == 0) {
      st.p.push_back(*next);
      st.q.push_back(1);
    } else if (k == 1) {
      st.p.push_back(Integer(*next * st.p[0] + 1));
      st.q.push_back(*next);
    } else {
      st.p.push_back(Integer(*next * st.p[k - 1] + st.p[k - 2]));
      st.q.push_back(Integer(*next * st.q[k - 1] + st.q[k - 2]));
    }
    st.a.push_back(*next);
  }
  return true;
}

std::optional<Integer> CFNumber::term(std::size_t i) const {
  if (!extend_to(i)) return std::nullopt;
  return s_->a[i];
}

Convergent CFNumber::convergent(std::size_t i) const {
  if (!extend_to(i)) {
    std::size_t last = s_->a.size() - 1;
    throw RationalCase(make_rational(s_->p[last], s_->q[last]), last);
  }
  return {s_->p[i], s_->q[i]};
}

std::optional<std::size_t> CFNumber::finite_length(std::size_t probe) const {
  if (extend_to(probe)) return std::nullopt;
  return s_->a.size();
}

Interval CFNumber::bracket(std::size_t k) const {
  if (!extend_to(k + 1)) return Interval(make_rational(s_->p.back(), s_->q.back()));
  Rational conv = make_rational(s_->p[k + 1], s_->q[k + 1]);
  if (!extend_to(k + 2)) return Interval(conv);
  const auto& p = s_->p;
  const auto& q = s_->q;
  Rational mediant = make_rational(p[k + 1] + p[k], q[k + 1] + q[k]);
  return conv < mediant ? Interval(conv, mediant) : Interval(mediant, conv);
}

Interval CFNumber::enclose(const Rational& abs_tol, const EncloseBudget& budget) const {
  if (abs_tol <= 0) throw std::invalid_argument("tolerance must be positive");
  for (std::size_t k = 0;; ++k) {
    Interval b = bracket(k);
    if (b.width() <= abs_tol) return b;
    bool over_index = k >= budget.max_index;
    bool over_bits = mpz_sizeinbase(s_->q.back().get_mpz_t(), 2) > budget.max_bits;
    if (over_index || over_bits) throw ResourceLimit("enclosure budget exhausted", b);
  }
}

Interval CFNumber::enclose_bits(unsigned bits) const {
  return enclose(make_rational(1, ipow(Integer(2), bits)));
}

std::pair<Integer, Integer> CFNumber::slope_bracket_denominators(std::size_t k) const {
  Convergent next = convergent(k + 1);
  Convergent cur = convergent(k);
  return {cur.q + next.q, next.q};
}

Convergent convergent(const CFNumber& x, std::size_t i) { return x.convergent(i); }

Interval enclose(const CFNumber& x, const Rational& abs_tol, const EncloseBudget& budget) {
  return x.enclose(abs_tol, budget);
}

Interval eval_poly(const IntPoly& P, const CFNumber& x, const Rational& rel_tol, const Rational& abs_floor,
                   unsigned max_bits) {
  Interval best;
  for (unsigned bits = 64;; bits *= 2) {
    Interval z = x.enclose_bits(bits);
    best = P.eval(z);
    if (z.is_point()) return best;
    if (best.width() <= rel_tol * best.magnitude()) return best;
    if (best.contains_zero() && best.width() <= abs_floor) return best;
    if (bits >= max_bits) throw ResourceLimit("polynomial evaluation budget exhausted", best);
  }
}

}  // namespace dioph
