#include "nashdcf/sturm.hpp"

#include "nashdcf/polyalg.hpp"

namespace nashdcf {

namespace {

int rational_sign(const Rational& q) { return sgn(q); }

// Classical chain with remainders scaled to unit leading magnitude.
std::vector<Poly<Rational>> rational_chain(const Poly<Rational>& p) {
  if (p.is_zero()) throw std::invalid_argument("identically zero");
  std::vector<Poly<Rational>> chain{p};
  Poly<Rational> d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d);
  while (chain.back().degree() > 0) {
    Poly<Rational> r = divide(chain[chain.size() - 2], chain.back()).remainder;
    if (r.is_zero()) break;
    Rational s = -1 / abs(r.lc());
    chain.push_back(r.scaled(s));
  }
  // A repeated root is a common zero of the whole chain, so counting from it
  // would see no variation there. Dividing out gcd(p, p') fixes that.
  if (chain.size() > 1 && chain.back().degree() > 0) {
    const Poly<Rational> g = chain.back();
    for (auto& c : chain) c = divide(c, g).quotient;
  }
  return chain;
}

int variations(const std::vector<Poly<Rational>>& chain, const Rational& x) {
  return variations_at(chain, x, rational_sign);
}

}  // namespace

int sturm_count(const Poly<Rational>& p, const Rational& lo, const Rational& hi) {
  auto chain = rational_chain(p);
  int n = variations(chain, lo) - variations(chain, hi);
  if (p.eval(lo) == 0) ++n;
  return n;
}

int sturm_count_from(const Poly<Rational>& p, const Rational& lo) {
  auto chain = rational_chain(p);
  int n = variations(chain, lo) - variations_at_infinity(chain, +1, rational_sign);
  if (p.eval(lo) == 0) ++n;
  return n;
}

int sturm_count_all(const Poly<Rational>& p) {
  auto chain = rational_chain(p);
  return variations_at_infinity(chain, -1, rational_sign) - variations_at_infinity(chain, +1, rational_sign);
}

}  // namespace nashdcf
