#ifndef NASHDCF_INTERVAL_HPP
#define NASHDCF_INTERVAL_HPP

#include <compare>
#include <map>
#include <string>
#include <string_view>

#include "nashdcf/mpoly.hpp"
#include "nashdcf/rational.hpp"

namespace nashdcf {

/// Exact dyadic rational m * 2^e, canonical (m odd or zero with e = 0).
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long v) : Dyadic(Integer(v), 0) {}  // NOLINT(google-explicit-constructor)
  Dyadic(Integer m, long e);

  /// Largest multiple of 2^-bits that is <= q (resp. smallest >= q).
  static Dyadic floor(const Rational& q, long bits);
  static Dyadic ceil(const Rational& q, long bits);

  const Integer& mantissa() const { return m_; }
  long exponent() const { return e_; }
  int sign() const { return sgn(m_); }
  bool is_zero() const { return m_ == 0; }
  Rational to_rational() const;
  /// floor(log2 |x|) + 1, i.e. the binary magnitude; very negative for 0.
  long magnitude() const;

  /// Keep at most `bits` significant bits, rounding toward -inf / +inf.
  Dyadic round_down(long bits) const;
  Dyadic round_up(long bits) const;
  Dyadic mul_2exp(long k) const { return Dyadic(m_, e_ + k); }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic operator-() const { return Dyadic(-m_, e_); }
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.e_ == b.e_ && a.m_ == b.m_; }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  /// Decimal-free exact text: "n" or "n/2^k".
  std::string str() const;
  static Dyadic parse(std::string_view s);

 private:
  Integer m_ = 0;
  long e_ = 0;
};

/// q rounded to a dyadic with `bits` significant bits in direction dir (-1 down, +1 up).
Dyadic round_rational(const Rational& q, long bits, int dir);

/// Closed real interval with dyadic endpoints.
class Interval {
 public:
  Interval() = default;
  Interval(Dyadic lo, Dyadic hi);
  static Interval point(const Dyadic& d) { return {d, d}; }
  /// Smallest enclosure of q with `bits` significant bits per endpoint.
  static Interval around(const Rational& q, long bits);

  const Dyadic& lo() const { return lo_; }
  const Dyadic& hi() const { return hi_; }
  Dyadic width() const { return hi_ - lo_; }
  Dyadic mid() const;
  /// Max |x| over the interval.
  Dyadic mag() const;
  bool contains(const Dyadic& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Rational& q) const;
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  /// +1 / -1 if the interval lies strictly right / left of 0, else 0.
  int sign() const;
  bool subset_of(const Interval& o) const { return o.lo_ <= lo_ && hi_ <= o.hi_; }
  bool strictly_inside(const Interval& o) const { return o.lo_ < lo_ && hi_ < o.hi_; }
  bool intersects(const Interval& o) const { return !(hi_ < o.lo_ || o.hi_ < lo_); }
  Interval intersect(const Interval& o) const;
  Interval hull(const Interval& o) const;
  /// Widens by r on both sides.
  Interval inflate(const Dyadic& r) const { return {lo_ - r, hi_ + r}; }
  /// Width below 2^-bits?
  bool narrower_than(long bits) const;

  Interval rounded(long bits) const { return {lo_.round_down(bits), hi_.round_up(bits)}; }

  friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo_ + b.lo_, a.hi_ + b.hi_}; }
  friend Interval operator-(const Interval& a, const Interval& b) { return {a.lo_ - b.hi_, a.hi_ - b.lo_}; }
  Interval operator-() const { return {-hi_, -lo_}; }
  friend Interval operator*(const Interval& a, const Interval& b);
  Interval square() const;
  /// 1/x with outward rounding; requires 0 not in the interval.
  Interval inverse(long bits) const;
  friend bool operator==(const Interval&, const Interval&) = default;

  std::string str() const;

 private:
  Dyadic lo_, hi_;
};

/// Rectangle re x im in the complex plane.
class ComplexBox {
 public:
  ComplexBox() = default;
  ComplexBox(Interval re, Interval im = Interval{}) : re_(std::move(re)), im_(std::move(im)) {}  // NOLINT

  const Interval& re() const { return re_; }
  const Interval& im() const { return im_; }
  bool is_real() const { return im_.lo().is_zero() && im_.hi().is_zero(); }
  bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
  bool subset_of(const ComplexBox& o) const { return re_.subset_of(o.re_) && im_.subset_of(o.im_); }
  bool strictly_inside(const ComplexBox& o) const {
    return re_.strictly_inside(o.re_) && im_.strictly_inside(o.im_);
  }
  bool intersects(const ComplexBox& o) const { return re_.intersects(o.re_) && im_.intersects(o.im_); }
  ComplexBox intersect(const ComplexBox& o) const { return {re_.intersect(o.re_), im_.intersect(o.im_)}; }
  ComplexBox conj() const { return {re_, -im_}; }
  /// Larger of the two side widths.
  Dyadic width() const;
  bool narrower_than(long bits) const { return re_.narrower_than(bits) && im_.narrower_than(bits); }
  ComplexBox rounded(long bits) const { return {re_.rounded(bits), im_.rounded(bits)}; }
  ComplexBox inflate(const Dyadic& r) const { return {re_.inflate(r), im_.inflate(r)}; }

  friend ComplexBox operator+(const ComplexBox& a, const ComplexBox& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
  friend ComplexBox operator-(const ComplexBox& a, const ComplexBox& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
  ComplexBox operator-() const { return {-re_, -im_}; }
  friend ComplexBox operator*(const ComplexBox& a, const ComplexBox& b);
  ComplexBox inverse(long bits) const;
  friend bool operator==(const ComplexBox&, const ComplexBox&) = default;

  std::string str() const;
  static ComplexBox parse(std::string_view s);

 private:
  Interval re_, im_;
};

/// Interval evaluation of p with every variable bound to a box. Sound: the
/// result contains p(x) for every selection x inside the input boxes.
/// Throws std::invalid_argument on an unassigned variable.
ComplexBox interval_eval(const MPoly& p, const std::map<Var, ComplexBox>& assignment, long bits);
Interval interval_eval(const MPoly& p, const std::map<Var, Interval>& assignment, long bits);

}  // namespace nashdcf

#endif
