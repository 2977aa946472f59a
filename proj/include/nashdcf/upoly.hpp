#ifndef NASHDCF_UPOLY_HPP
#define NASHDCF_UPOLY_HPP

#include <cassert>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nashdcf/mpoly.hpp"
#include "nashdcf/rational.hpp"

namespace nashdcf {

inline bool is_zero(const Rational& q) { return q == 0; }
inline bool is_zero(const MPoly& p) { return p.is_zero(); }
inline Rational divexact(const Rational& a, const Rational& b) { return a / b; }

/// Dense univariate polynomial with coefficients in a commutative ring R,
/// stored lowest degree first and trimmed so the leading coefficient is
/// nonzero. R needs +, -, *, construction from int and a free is_zero().
template <class R>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<R> c) : c_(std::move(c)) { trim(); }

  static Poly constant(R c) { return Poly(std::vector<R>{std::move(c)}); }
  /// c * x^k
  static Poly monomial(R c, std::size_t k) {
    std::vector<R> v(k + 1, R(0));
    v[k] = std::move(c);
    return Poly(std::move(v));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const R& lc() const { return c_.back(); }
  const std::vector<R>& coeffs() const { return c_; }
  R coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : R(0); }

  Poly operator-() const {
    Poly r;
    r.c_.reserve(c_.size());
    for (const auto& c : c_) r.c_.push_back(-c);
    return r;
  }
  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<R> v(std::max(a.c_.size(), b.c_.size()), R(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = v[i] + b.c_[i];
    return Poly(std::move(v));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly{};
    std::vector<R> v(a.c_.size() + b.c_.size() - 1, R(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (nashdcf::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    }
    return Poly(std::move(v));
  }
  Poly scaled(const R& s) const {
    std::vector<R> v;
    v.reserve(c_.size());
    for (const auto& c : c_) v.push_back(c * s);
    return Poly(std::move(v));
  }
  /// this * x^k
  Poly shifted(std::size_t k) const {
    if (is_zero()) return *this;
    std::vector<R> v(k, R(0));
    v.insert(v.end(), c_.begin(), c_.end());
    Poly r;
    r.c_ = std::move(v);
    return r;
  }

  template <class S>
  S eval(const S& x) const {
    if (c_.empty()) return S(0);
    S acc = S(c_.back());
    for (std::size_t k = c_.size() - 1; k-- > 0;) acc = acc * x + S(c_[k]);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly{};
    std::vector<R> v;
    v.reserve(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) v.push_back(c_[k] * R(static_cast<long>(k)));
    return Poly(std::move(v));
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && nashdcf::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<R> c_;
};

template <class R>
struct PseudoDivision {
  Poly<R> quotient;
  Poly<R> remainder;
};

/// lc(b)^(deg a - deg b + 1) * a = q * b + r with deg r < deg b.
template <class R>
PseudoDivision<R> pseudo_divide(const Poly<R>& a, const Poly<R>& b) {
  if (b.is_zero()) throw std::domain_error("pseudo-division by zero polynomial");
  const int db = b.degree();
  if (a.degree() < db) return {Poly<R>{}, a};
  const R lb = b.lc();
  int e = a.degree() - db + 1;
  Poly<R> q, r = a;
  while (!r.is_zero() && r.degree() >= db) {
    const std::size_t shift = static_cast<std::size_t>(r.degree() - db);
    Poly<R> t = Poly<R>::monomial(r.lc(), shift);
    q = q.scaled(lb) + t;
    r = r.scaled(lb) - t * b;
    --e;
  }
  if (e > 0) {
    R f = lb;
    for (int i = 1; i < e; ++i) f = f * lb;
    q = q.scaled(f);
    r = r.scaled(f);
  }
  return {std::move(q), std::move(r)};
}

template <class R>
Poly<R> prem(const Poly<R>& a, const Poly<R>& b) {
  return pseudo_divide(a, b).remainder;
}

template <class R>
R power(const R& base, unsigned e) {
  R r(1), b = base;
  while (e > 0) {
    if (e & 1u) r = r * b;
    e >>= 1u;
    if (e > 0) b = b * b;
  }
  return r;
}

/// Resultant by the subresultant pseudo-remainder sequence (exact divisions in
/// R only). Returns zero iff a and b share a factor of positive degree.
template <class R>
R resultant_prs(Poly<R> a, Poly<R> b) {
  if (a.is_zero() || b.is_zero()) return R(0);
  if (a.degree() == 0 && b.degree() == 0) return R(1);
  R s(1);
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) s = -s;
  }
  if (b.degree() == 0) return power(b.lc(), static_cast<unsigned>(a.degree()));
  R g(1), h(1);
  while (true) {
    const int delta = a.degree() - b.degree();
    if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) s = -s;
    Poly<R> r = prem(a, b);
    a = std::move(b);
    if (r.is_zero()) return R(0);
    R divisor = g * power(h, static_cast<unsigned>(delta));
    std::vector<R> rc;
    rc.reserve(r.coeffs().size());
    for (const auto& c : r.coeffs()) rc.push_back(divexact(c, divisor));
    b = Poly<R>(std::move(rc));
    g = a.lc();
    // h <- h^(1 - delta) * g^delta
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      h = divexact(power(g, static_cast<unsigned>(delta)), power(h, static_cast<unsigned>(delta - 1)));
    }
    if (b.degree() == 0) {
      const int da = a.degree();
      R num = power(b.lc(), static_cast<unsigned>(da));
      R res = da >= 1 ? divexact(num, power(h, static_cast<unsigned>(da - 1))) : num;
      return s * res;
    }
  }
}

/// Last nonzero element of the subresultant sequence: an associate (up to a
/// factor of R) of gcd(a, b) over the fraction field of R.
template <class R>
Poly<R> subresultant_gcd_core(Poly<R> a, Poly<R> b) {
  if (a.degree() < b.degree()) std::swap(a, b);
  if (b.is_zero()) return a;
  R g(1), h(1);
  while (true) {
    const int delta = a.degree() - b.degree();
    Poly<R> r = prem(a, b);
    if (r.is_zero()) return b;
    if (r.degree() == 0) return Poly<R>::constant(R(1));
    a = std::move(b);
    R divisor = g * power(h, static_cast<unsigned>(delta));
    std::vector<R> rc;
    rc.reserve(r.coeffs().size());
    for (const auto& c : r.coeffs()) rc.push_back(divexact(c, divisor));
    b = Poly<R>(std::move(rc));
    g = a.lc();
    if (delta == 1) {
      h = g;
    } else if (delta > 1) {
      h = divexact(power(g, static_cast<unsigned>(delta)), power(h, static_cast<unsigned>(delta - 1)));
    }
  }
}

}  // namespace nashdcf

#endif
