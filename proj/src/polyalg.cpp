#include "nashdcf/polyalg.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace nashdcf {

Poly<MPoly> to_upoly(const MPoly& p, Var v) { return Poly<MPoly>(p.coefficients(v)); }

MPoly from_upoly(const Poly<MPoly>& p, Var v) { return MPoly::from_coefficients(v, p.coeffs()); }

Poly<Rational> to_rational_upoly(const MPoly& p, Var v) {
  std::vector<Rational> c(p.is_zero() ? 0 : p.degree(v) + 1, Rational(0));
  for (const auto& t : p.terms()) {
    std::uint32_t e = t.mono.degree(v);
    if (t.mono.total_degree() != e)
      throw std::invalid_argument("polynomial is not univariate in " + var::name(v));
    c[e] = t.coef;
  }
  return Poly<Rational>(std::move(c));
}

MPoly from_rational_upoly(const Poly<Rational>& p, Var v) {
  std::vector<Term> t;
  for (std::size_t k = 0; k < p.coeffs().size(); ++k)
    if (p.coeffs()[k] != 0) t.push_back(Term{Monomial::of(v, static_cast<std::uint32_t>(k)), p.coeffs()[k]});
  return MPoly::from_terms(std::move(t));
}

MPoly resultant(const MPoly& a, const MPoly& b, Var v) {
  if (!a.contains(v) && !b.contains(v)) throw std::invalid_argument("no elimination variable");
  return resultant_prs(to_upoly(a, v), to_upoly(b, v));
}

// ---------------------------------------------------------------- univariate Q

PseudoDivision<Rational> divide(const Poly<Rational>& a, const Poly<Rational>& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  std::vector<Rational> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Poly<Rational>{}, a};
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1), Rational(0));
  const Rational inv = 1 / b.lc();
  for (int k = a.degree(); k >= db; --k) {
    Rational c = r[static_cast<std::size_t>(k)] * inv;
    if (c == 0) continue;
    q[static_cast<std::size_t>(k - db)] = c;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k - db + j)] -= c * b.coeffs()[static_cast<std::size_t>(j)];
  }
  r.resize(static_cast<std::size_t>(db));
  return {Poly<Rational>(std::move(q)), Poly<Rational>(std::move(r))};
}

Poly<Rational> gcd(Poly<Rational> a, Poly<Rational> b) {
  while (!b.is_zero()) {
    Poly<Rational> r = divide(a, b).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.scaled(1 / a.lc());
}

Poly<Rational> univariate_image(const MPoly& p, Var keep, const std::map<Var, Rational>& values) {
  std::vector<Rational> c(p.is_zero() ? 0 : p.degree(keep) + 1, Rational(0));
  for (const auto& t : p.terms()) {
    Rational f = t.coef;
    std::uint32_t e_keep = 0;
    for (const auto& [w, e] : t.mono.powers()) {
      if (w == keep) {
        e_keep = e;
        continue;
      }
      auto it = values.find(w);
      if (it == values.end()) throw std::invalid_argument("no image value for " + var::name(w));
      Rational pw;
      mpz_pow_ui(pw.get_num_mpz_t(), it->second.get_num_mpz_t(), e);
      mpz_pow_ui(pw.get_den_mpz_t(), it->second.get_den_mpz_t(), e);
      f *= pw;
    }
    c[e_keep] += f;
  }
  return Poly<Rational>(std::move(c));
}

std::map<Var, Rational> probe_point(const std::vector<Var>& vars, unsigned attempt) {
  static const long kBase[] = {3, 7, 11, 19, 29, 37, 43, 53, 61, 71, 79, 89, 97, 103, 109, 127};
  std::map<Var, Rational> pt;
  std::size_t i = 0;
  for (Var v : vars) {
    long base = kBase[(i + attempt) % 16];
    long val = base + 17L * static_cast<long>(attempt) + static_cast<long>(i / 16) * 131L;
    pt[v] = Rational(((i + attempt) % 2 == 0) ? val : -val, 1 + static_cast<long>((i * 7 + attempt) % 5));
    ++i;
  }
  return pt;
}

// ---------------------------------------------------------------- multivariate gcd

namespace {

std::vector<Var> other_vars(const MPoly& a, const MPoly& b, Var x) {
  std::vector<Var> vs = a.variables();
  auto vb = b.variables();
  vs.insert(vs.end(), vb.begin(), vb.end());
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  vs.erase(std::remove(vs.begin(), vs.end(), x), vs.end());
  return vs;
}

// Heuristic gcd: evaluate the main variable at a large integer, recurse, and
// rebuild by symmetric xi-adic expansion. A candidate dividing both inputs is
// the gcd once xi exceeds twice the smaller max-norm. Inputs have integer
// coefficients; nullopt asks the caller for the subresultant route.
Integer max_norm(const MPoly& p) {
  Integer m = 0;
  for (const auto& t : p.terms()) {
    Integer c = abs(t.coef.get_num());
    if (c > m) m = c;
  }
  return m;
}

Integer integer_content(const MPoly& p) {
  Integer g = 0;
  for (const auto& t : p.terms()) g = gcd(g, Integer(t.coef.get_num()));
  return g;
}

std::optional<MPoly> heuristic_gcd(const MPoly& a, const MPoly& b, int depth);

// Full gcd (integer content included) of integer polynomials.
std::optional<MPoly> heuristic_gcd_full(const MPoly& a, const MPoly& b, int depth) {
  if (a.is_zero() || b.is_zero()) return std::nullopt;
  const Integer ca = integer_content(a), cb = integer_content(b);
  const Integer c = gcd(ca, cb);
  if (a.is_constant() || b.is_constant()) return MPoly(Rational(c));
  auto g = heuristic_gcd(a.scaled(Rational(1) / Rational(ca)), b.scaled(Rational(1) / Rational(cb)), depth);
  if (!g) return std::nullopt;
  return g->scaled(Rational(c));
}

std::optional<MPoly> heuristic_gcd(const MPoly& a, const MPoly& b, int depth) {
  if (depth > 8) return std::nullopt;
  const MPoly na = a.normalized(), nb = b.normalized();
  if (na == nb) return na;
  const auto va = na.variables(), vb = nb.variables();
  if (va.empty() || vb.empty()) return MPoly(1);
  const Var x = std::max(va.back(), vb.back());
  const Integer na_norm = max_norm(na), nb_norm = max_norm(nb);
  Integer xi = 2 * std::min(na_norm, nb_norm) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const MPoly fa = na.evaluate(x, Rational(xi)), fb = nb.evaluate(x, Rational(xi));
    if (!fa.is_zero() && !fb.is_zero()) {
      auto h = heuristic_gcd_full(fa, fb, depth + 1);
      if (!h) return std::nullopt;
      std::vector<MPoly> digits;
      MPoly rest = *h;
      const Integer half = xi / 2;
      while (!rest.is_zero()) {
        std::vector<Term> low;
        for (const auto& t : rest.terms()) {
          Integer r = t.coef.get_num() % xi;
          if (r < 0) r += xi;
          if (r > half) r -= xi;
          if (r != 0) low.push_back({t.mono, Rational(r)});
        }
        MPoly d = MPoly::from_terms(std::move(low));
        rest = (rest - d).scaled(Rational(1) / Rational(xi));
        digits.push_back(std::move(d));
      }
      MPoly cand = MPoly::from_coefficients(x, digits).normalized();
      if (!cand.is_zero() && divide_exact(na, cand) && divide_exact(nb, cand)) return cand;
    }
    Integer r;
    mpz_sqrt(r.get_mpz_t(), xi.get_mpz_t());
    mpz_sqrt(r.get_mpz_t(), r.get_mpz_t());
    xi = xi * 73794 * r / 27011;
  }
  return std::nullopt;
}

// gcd of two polynomials primitive in x, both of positive degree in x.
MPoly primitive_gcd(const MPoly& a, const MPoly& b, Var x) {
  const auto others = other_vars(a, b, x);
  const MPoly la = a.leading_coefficient(x), lb = b.leading_coefficient(x);
  for (unsigned attempt = 0; attempt < 2; ++attempt) {
    auto pt = probe_point(others, attempt);
    auto ia = univariate_image(la, x, pt);
    auto ib = univariate_image(lb, x, pt);
    if (ia.is_zero() || ib.is_zero()) continue;
    auto g = gcd(univariate_image(a, x, pt), univariate_image(b, x, pt));
    if (g.degree() == 0) return MPoly(1);
    break;
  }
  const MPoly& small = a.degree(x) <= b.degree(x) ? a : b;
  const MPoly& large = a.degree(x) <= b.degree(x) ? b : a;
  if (divide_exact(large, small)) return small.normalized();
  Poly<MPoly> g = subresultant_gcd_core(to_upoly(a, x), to_upoly(b, x));
  if (g.degree() <= 0) return MPoly(1);
  return primitive_part(from_upoly(g, x), x);
}

}  // namespace

MPoly content(const MPoly& p, Var v) {
  if (p.is_zero()) return MPoly{};
  if (!p.contains(v)) return p.normalized();
  auto coeffs = p.coefficients(v);
  // constants first: a constant coefficient makes the content trivial
  for (const auto& c : coeffs)
    if (!c.is_zero() && c.is_constant()) return MPoly(1);
  std::sort(coeffs.begin(), coeffs.end(), [](const MPoly& a, const MPoly& b) { return a.size() < b.size(); });
  MPoly g;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return MPoly(1);
  }
  return g;
}

MPoly primitive_part(const MPoly& p, Var v) {
  if (p.is_zero()) return p;
  MPoly c = content(p, v);
  if (c.is_constant()) return p.normalized();
  return divexact(p, c).normalized();
}

MPoly gcd(const MPoly& a, const MPoly& b) {
  if (a.is_zero()) return b.normalized();
  if (b.is_zero()) return a.normalized();
  if (a.is_constant() || b.is_constant()) return MPoly(1);
  MPoly na = a.normalized(), nb = b.normalized();
  if (na == nb) return na;
  if (auto h = heuristic_gcd(na, nb, 0)) return *h;
  Var x = std::max(na.variables().back(), nb.variables().back());
  const bool ina = na.contains(x), inb = nb.contains(x);
  if (!inb) return gcd(content(na, x), nb);
  if (!ina) return gcd(na, content(nb, x));
  MPoly ca = content(na, x), cb = content(nb, x);
  MPoly c = gcd(ca, cb);
  MPoly pa = ca.is_constant() ? na : divexact(na, ca);
  MPoly pb = cb.is_constant() ? nb : divexact(nb, cb);
  MPoly g = primitive_gcd(pa, pb, x);
  return (c * g).normalized();
}

MPoly squarefree_part(const MPoly& p, Var v) {
  if (p.is_zero()) throw std::invalid_argument("squarefree part of the zero polynomial");
  if (!p.contains(v)) return MPoly(1);
  MPoly pp = primitive_part(p, v);
  if (pp.degree(v) == 1) return pp;
  const MPoly dp = pp.derivative(v);
  auto others = pp.variables();
  others.erase(std::remove(others.begin(), others.end(), v), others.end());
  const MPoly lc = pp.leading_coefficient(v);
  for (unsigned attempt = 0; attempt < 2; ++attempt) {
    auto pt = probe_point(others, attempt);
    if (univariate_image(lc, v, pt).is_zero()) continue;
    auto img = univariate_image(pp, v, pt);
    if (gcd(img, img.derivative()).degree() == 0) return pp;
    break;
  }
  MPoly g = gcd(pp, dp);
  if (!g.contains(v)) return pp;
  return primitive_part(divexact(pp, g), v);
}

MPoly pseudo_remainder(const MPoly& p, const MPoly& d, Var v) {
  if (p.degree(v) < d.degree(v)) return p;
  return from_upoly(prem(to_upoly(p, v), to_upoly(d, v)), v);
}

std::optional<InverseCofactor> inverse_cofactor(const MPoly& a, const MPoly& b, Var v) {
  using P = Poly<MPoly>;
  P r0 = to_upoly(a, v);
  P t0;
  P r1 = to_upoly(b, v);
  P t1 = P::constant(MPoly(1));
  if (r1.degree() >= r0.degree()) {
    auto pd = pseudo_divide(r1, r0);
    // lc(a)^k * b = q a + r, so r = lc^k * b (mod a)
    int k = r1.degree() - r0.degree() + 1;
    t1 = P::constant(power(r0.lc(), static_cast<unsigned>(k)));
    r1 = pd.remainder;
  }
  if (r1.is_zero()) return std::nullopt;
  while (r1.degree() > 0) {
    const int delta = r0.degree() - r1.degree();
    auto pd = pseudo_divide(r0, r1);
    MPoly c = power(r1.lc(), static_cast<unsigned>(delta + 1));
    P t2 = t0.scaled(c) - pd.quotient * t1;
    P r2 = pd.remainder;
    if (r2.is_zero()) return std::nullopt;
    // strip a common factor of the pair
    MPoly k = content(from_upoly(r2, v), v);
    if (!k.is_constant()) {
      MPoly kt = content(from_upoly(t2, v), v);
      k = gcd(k, kt);
    }
    if (!k.is_constant()) {
      std::vector<MPoly> rc, tc;
      for (const auto& x : r2.coeffs()) rc.push_back(divexact(x, k));
      for (const auto& x : t2.coeffs()) tc.push_back(divexact(x, k));
      r2 = P(std::move(rc));
      t2 = P(std::move(tc));
    }
    r0 = std::move(r1);
    t0 = std::move(t1);
    r1 = std::move(r2);
    t1 = std::move(t2);
  }
  return InverseCofactor{from_upoly(t1, v), r1.lc()};
}

}  // namespace nashdcf
