#include "nashdcf/interval.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>
#include <vector>

namespace nashdcf {

// ---------------------------------------------------------------- Dyadic

Dyadic::Dyadic(Integer m, long e) : m_(std::move(m)), e_(e) {
  if (m_ == 0) {
    e_ = 0;
    return;
  }
  mp_bitcnt_t k = mpz_scan1(m_.get_mpz_t(), 0);
  if (k > 0) {
    mpz_tdiv_q_2exp(m_.get_mpz_t(), m_.get_mpz_t(), k);
    e_ += static_cast<long>(k);
  }
}

Dyadic Dyadic::floor(const Rational& q, long bits) {
  Integer n = q.get_num();
  Integer r;
  if (bits >= 0) {
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    mpz_fdiv_q(r.get_mpz_t(), n.get_mpz_t(), q.get_den_mpz_t());
  } else {
    Integer d = q.get_den();
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(-bits));
    mpz_fdiv_q(r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  }
  return Dyadic(r, -bits);
}

Dyadic Dyadic::ceil(const Rational& q, long bits) { return -floor(-q, bits); }

Rational Dyadic::to_rational() const {
  Rational q(m_);
  if (e_ >= 0) {
    mpz_mul_2exp(q.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e_));
  } else {
    mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e_));
    q.canonicalize();
  }
  return q;
}

long Dyadic::magnitude() const {
  if (m_ == 0) return LONG_MIN / 4;
  return static_cast<long>(bit_length(m_)) + e_;
}

Dyadic Dyadic::round_down(long bits) const {
  long len = static_cast<long>(bit_length(m_));
  if (len <= bits) return *this;
  Integer r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), m_.get_mpz_t(), static_cast<mp_bitcnt_t>(len - bits));
  return Dyadic(r, e_ + len - bits);
}

Dyadic Dyadic::round_up(long bits) const {
  long len = static_cast<long>(bit_length(m_));
  if (len <= bits) return *this;
  Integer r;
  mpz_cdiv_q_2exp(r.get_mpz_t(), m_.get_mpz_t(), static_cast<mp_bitcnt_t>(len - bits));
  return Dyadic(r, e_ + len - bits);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.m_ == 0) return b;
  if (b.m_ == 0) return a;
  long e = std::min(a.e_, b.e_);
  Integer x = a.m_, y = b.m_;
  if (a.e_ > e) mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(a.e_ - e));
  if (b.e_ > e) mpz_mul_2exp(y.get_mpz_t(), y.get_mpz_t(), static_cast<mp_bitcnt_t>(b.e_ - e));
  return Dyadic(Integer(x + y), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(Integer(a.m_ * b.m_), a.e_ + b.e_); }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Dyadic::str() const { return to_string(to_rational()); }

Dyadic Dyadic::parse(std::string_view s) {
  Rational q = parse_rational(s);
  const Integer& d = q.get_den();
  if (mpz_popcount(d.get_mpz_t()) != 1) throw std::invalid_argument("not a dyadic rational: " + std::string(s));
  long k = static_cast<long>(mpz_scan1(d.get_mpz_t(), 0));
  return Dyadic(q.get_num(), -k);
}

Dyadic round_rational(const Rational& q, long bits, int dir) {
  if (q == 0) return Dyadic{};
  long mag = static_cast<long>(bit_length(q.get_num())) - static_cast<long>(bit_length(q.get_den()));
  long frac = bits - mag + 1;
  Dyadic d = dir < 0 ? Dyadic::floor(q, frac) : Dyadic::ceil(q, frac);
  return dir < 0 ? d.round_down(bits) : d.round_up(bits);
}

// ---------------------------------------------------------------- Interval

Interval::Interval(Dyadic lo, Dyadic hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw std::invalid_argument("interval with lo > hi");
}

Interval Interval::around(const Rational& q, long bits) {
  if (mpz_popcount(q.get_den_mpz_t()) == 1) {
    long k = static_cast<long>(mpz_scan1(q.get_den_mpz_t(), 0));
    Dyadic d(q.get_num(), -k);
    return {d.round_down(bits), d.round_up(bits)};
  }
  return {round_rational(q, bits, -1), round_rational(q, bits, +1)};
}

Dyadic Interval::mid() const { return (lo_ + hi_).mul_2exp(-1); }

Dyadic Interval::mag() const {
  Dyadic a = lo_.sign() < 0 ? -lo_ : lo_;
  Dyadic b = hi_.sign() < 0 ? -hi_ : hi_;
  return a < b ? b : a;
}

bool Interval::contains(const Rational& q) const { return lo_.to_rational() <= q && q <= hi_.to_rational(); }

int Interval::sign() const {
  if (lo_.sign() > 0) return 1;
  if (hi_.sign() < 0) return -1;
  return 0;
}

Interval Interval::intersect(const Interval& o) const {
  Dyadic lo = lo_ < o.lo_ ? o.lo_ : lo_;
  Dyadic hi = hi_ < o.hi_ ? hi_ : o.hi_;
  if (hi < lo) throw std::invalid_argument("empty interval intersection");
  return {lo, hi};
}

Interval Interval::hull(const Interval& o) const {
  return {lo_ < o.lo_ ? lo_ : o.lo_, hi_ < o.hi_ ? o.hi_ : hi_};
}

bool Interval::narrower_than(long bits) const { return width() <= Dyadic(1, -bits); }

Interval operator*(const Interval& a, const Interval& b) {
  if (a.lo_ == a.hi_ && b.lo_ == b.hi_) return Interval::point(a.lo_ * b.lo_);
  if (a.lo_.sign() >= 0 && b.lo_.sign() >= 0) return {a.lo_ * b.lo_, a.hi_ * b.hi_};
  Dyadic p[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval Interval::square() const {
  Dyadic a = lo_ * lo_, b = hi_ * hi_;
  Dyadic hi = a < b ? b : a;
  if (contains_zero()) return {Dyadic{}, hi};
  return {a < b ? a : b, hi};
}

Interval Interval::inverse(long bits) const {
  if (contains_zero()) throw std::domain_error("interval inverse across zero");
  return {round_rational(1 / hi_.to_rational(), bits, -1), round_rational(1 / lo_.to_rational(), bits, +1)};
}

std::string Interval::str() const { return "[" + lo_.str() + "," + hi_.str() + "]"; }

// ---------------------------------------------------------------- ComplexBox

Dyadic ComplexBox::width() const {
  Dyadic a = re_.width(), b = im_.width();
  return a < b ? b : a;
}

ComplexBox operator*(const ComplexBox& a, const ComplexBox& b) {
  if (a.is_real() && b.is_real()) return {a.re_ * b.re_, Interval{}};
  return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
}

ComplexBox ComplexBox::inverse(long bits) const {
  if (is_real()) return {re_.inverse(bits), Interval{}};
  Interval n = (re_.square() + im_.square()).rounded(bits);
  if (n.lo().sign() <= 0) throw std::domain_error("complex box inverse across zero");
  Interval inv = n.inverse(bits);
  return ComplexBox{re_ * inv, -(im_ * inv)}.rounded(bits);
}

std::string ComplexBox::str() const {
  if (is_real()) return re_.str();
  return re_.str() + "+i" + im_.str();
}

namespace {

Interval parse_interval(std::string_view s) {
  if (s.size() < 5 || s.front() != '[' || s.back() != ']') throw std::invalid_argument("malformed interval");
  auto comma = s.find(',');
  if (comma == std::string_view::npos) throw std::invalid_argument("malformed interval");
  return {Dyadic::parse(s.substr(1, comma - 1)), Dyadic::parse(s.substr(comma + 1, s.size() - comma - 2))};
}

}  // namespace

ComplexBox ComplexBox::parse(std::string_view s) {
  auto split = s.find("+i[");
  if (split == std::string_view::npos) return {parse_interval(s), Interval{}};
  return {parse_interval(s.substr(0, split)), parse_interval(s.substr(split + 2))};
}

// ---------------------------------------------------------------- evaluation

namespace {

template <class Box>
Box eval_terms(const MPoly& p, const std::map<Var, Box>& assignment, long bits) {
  std::map<Var, std::vector<Box>> powers;
  auto power_of = [&](Var v, std::uint32_t e) -> const Box& {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw std::invalid_argument("unassigned variable " + var::name(v));
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(it->second);
    while (cache.size() < e) cache.push_back((cache.back() * it->second).rounded(bits));
    return cache[e - 1];
  };
  Box acc{};
  for (const auto& t : p.terms()) {
    Box term{Interval::around(t.coef, bits)};
    for (const auto& [v, e] : t.mono.powers()) term = (term * power_of(v, e)).rounded(bits);
    acc = (acc + term).rounded(bits);
  }
  return acc;
}

}  // namespace

ComplexBox interval_eval(const MPoly& p, const std::map<Var, ComplexBox>& assignment, long bits) {
  return eval_terms<ComplexBox>(p, assignment, bits);
}

Interval interval_eval(const MPoly& p, const std::map<Var, Interval>& assignment, long bits) {
  return eval_terms<Interval>(p, assignment, bits);
}

}  // namespace nashdcf
