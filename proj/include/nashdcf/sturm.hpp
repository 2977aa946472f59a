#ifndef NASHDCF_STURM_HPP
#define NASHDCF_STURM_HPP

#include <stdexcept>
#include <vector>

#include "nashdcf/upoly.hpp"

namespace nashdcf {

/// Sturm chain built from sign-adjusted pseudo-remainders, so it only needs
/// ring operations on F plus an exact sign oracle. Scaling by positive
/// factors keeps sign-variation counts intact.
template <class F, class SignFn>
std::vector<Poly<F>> sturm_chain(const Poly<F>& p, SignFn&& sign_of) {
  if (p.is_zero()) throw std::invalid_argument("identically zero");
  std::vector<Poly<F>> chain{p};
  Poly<F> d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d);
  while (chain.back().degree() > 0) {
    const Poly<F>& a = chain[chain.size() - 2];
    const Poly<F>& b = chain.back();
    const int delta = a.degree() - b.degree();
    Poly<F> r = prem(a, b);
    if (r.is_zero()) break;
    // prem carries lc(b)^(delta+1); negate so the net factor is -positive
    const bool odd_negative = sign_of(b.lc()) < 0 && (delta + 1) % 2 == 1;
    chain.push_back(odd_negative ? r : -r);
  }
  return chain;
}

inline int count_variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

template <class F, class SignFn>
int variations_at(const std::vector<Poly<F>>& chain, const F& x, SignFn&& sign_of) {
  std::vector<int> s;
  s.reserve(chain.size());
  for (const auto& q : chain) s.push_back(sign_of(q.template eval<F>(x)));
  return count_variations(s);
}

template <class F, class SignFn>
int variations_at_infinity(const std::vector<Poly<F>>& chain, int direction, SignFn&& sign_of) {
  std::vector<int> s;
  s.reserve(chain.size());
  for (const auto& q : chain) {
    int sg = sign_of(q.lc());
    if (direction < 0 && q.degree() % 2 == 1) sg = -sg;
    s.push_back(sg);
  }
  return count_variations(s);
}

/// Exact count of distinct real roots of a rational polynomial in [lo, hi].
int sturm_count(const Poly<Rational>& p, const Rational& lo, const Rational& hi);
/// Exact count of distinct real roots of a rational polynomial in [lo, +inf).
int sturm_count_from(const Poly<Rational>& p, const Rational& lo);
/// Total number of distinct real roots.
int sturm_count_all(const Poly<Rational>& p);

}  // namespace nashdcf

#endif
