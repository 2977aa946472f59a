#include <algorithm>
#include <functional>

#include "nashdcf/element.hpp"
#include "nashdcf/polyalg.hpp"
#include "nashdcf/roots.hpp"

namespace nashdcf {
namespace {

using EPoly = std::vector<Element>;  // lowest degree first, no zero leading coefficient

void trim(EPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

EPoly monic(EPoly p) {
  const Element inv = p.back().inverse();
  for (auto& c : p) c = c * inv;
  p.back() = Element::from_rational(1);
  return p;
}

EPoly derivative(const EPoly& p) {
  EPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * Element::from_rational(static_cast<long>(k)));
  trim(d);
  return d;
}

/// a = q b + r; fills q when given.
EPoly remainder(EPoly a, const EPoly& b, EPoly* q = nullptr) {
  const Element inv = b.back().inverse();
  if (q) q->assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Element());
  while (a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const Element f = a.back() * inv;
    if (q) (*q)[shift] = f;
    for (std::size_t k = 0; k + 1 < b.size(); ++k) a[k + shift] = a[k + shift] - f * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

bool all_rational_functions(const EPoly& p) {
  return std::all_of(p.begin(), p.end(), [](const Element& c) { return c.is_rational_function(); });
}

/// Square-free part, monic.
EPoly squarefree(EPoly f) {
  if (all_rational_functions(f)) {
    MPoly l(1);
    for (const auto& c : f) {
      const MPoly& d = c.denominator();
      if (!d.is_constant() && !divide_exact(l, d)) l = divexact(l * d, gcd(l, d));
    }
    MPoly F;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const Element& c = f[j];
      if (c.numerator().is_zero()) continue;
      MPoly s = c.denominator().is_constant() ? l.scaled(1 / c.denominator().constant_value()) : divexact(l, c.denominator());
      F += (c.numerator() * s).times_monomial(Monomial::of(var::kZ, static_cast<std::uint32_t>(j)));
    }
    MPoly S = squarefree_part(F, var::kZ);
    if (S.degree(var::kZ) + 1 == f.size()) return monic(std::move(f));
    return monic(element_coefficients(S, var::kZ));
  }
  EPoly a = f, b = derivative(f);
  while (!b.empty()) {
    EPoly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.size() <= 1) return monic(std::move(f));
  EPoly q;
  remainder(f, a, &q);
  trim(q);
  return monic(std::move(q));
}

/// Monic square-free form; throws for constants.
EPoly prepare(EPoly coeffs) {
  trim(coeffs);
  if (coeffs.size() < 2) throw std::invalid_argument("constant polynomial");
  return squarefree(monic(std::move(coeffs)));
}

bool all_real(const EPoly& p) {
  return std::all_of(p.begin(), p.end(), [](const Element& c) { return c.is_real(); });
}

CoeffFn coefficient_fn(const EPoly& p) {
  return [p](long bits) {
    std::vector<ComplexBox> out;
    out.reserve(p.size());
    for (const auto& c : p) out.push_back(c.enclosure(bits));
    return out;
  };
}

struct Candidate {
  IsolatedRoot root;
  ComplexBox box;  // current refinement
};

std::optional<std::vector<Rational>> rational_coefficients(const EPoly& p) {
  std::vector<Rational> out;
  for (const auto& c : p) {
    auto q = c.rational_value();
    if (!q) return std::nullopt;
    out.push_back(*q);
  }
  return out;
}

/// Value at a + bI of the polynomial with rational coefficients.
std::pair<Rational, Rational> gaussian_eval(const std::vector<Rational>& c, const Rational& a, const Rational& b) {
  Rational re = 0, im = 0;
  for (std::size_t k = c.size(); k-- > 0;) {
    Rational nr = re * a - im * b + c[k];
    im = re * b + im * a;
    re = nr;
  }
  return {re, im};
}

Rational nearest_multiple(const Dyadic& x, const Integer& l) {
  const Rational v = x.to_rational() * l + Rational(1, 2);
  Integer n;
  mpz_fdiv_q(n.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return Rational(n, l);
}

/// Element for the isolated root of the monic square-free p.
Element root_element(const EPoly& p, const Candidate& c, bool real_coefficients) {
  const bool real = c.root.real && real_coefficients;
  if (auto rc = rational_coefficients(p)) {
    // Gaussian rational roots have denominators dividing the lcm of the
    // coefficient denominators; a box narrower than 1/(4l) pins the candidate.
    Integer l = 1;
    for (const auto& q : *rc) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    long bits = 4 + static_cast<long>(mpz_sizeinbase(l.get_mpz_t(), 2));
    ComplexBox b = refine_root(coefficient_fn(p), c.box, bits);
    Rational a = nearest_multiple(b.re().mid(), l);
    Rational im = real ? Rational(0) : nearest_multiple(b.im().mid(), l);
    if (gaussian_eval(*rc, a, im) == std::pair<Rational, Rational>(0, 0)) {
      MPoly n = MPoly(a) + MPoly::variable(var::kImag).scaled(im);
      return Element::from_presentation(n, MPoly(1), {}, im == 0);
    }
  }
  if (p.size() == 2) return -p[0];
  return Element::from_atom(Atom::make_root(p, c.box, real));
}

int half_plane(const ComplexBox& b) {
  // argument class in [0, 2pi): 0 positive axis, 1 upper, 2 negative axis, 3 lower
  if (!b.is_real()) {
    const int s = b.im().sign();
    return s > 0 ? 1 : s < 0 ? 3 : -1;
  }
  const int s = b.re().sign();
  if (s > 0) return 0;
  if (s < 0) return 2;
  return b.re().width().is_zero() ? 0 : -1;
}

ComplexBox point_of(const ComplexBox& b) {
  ComplexBox out(Interval::point(b.re().mid()));
  if (!b.is_real()) out = ComplexBox(out.re(), Interval::point(b.im().mid()));
  return out;
}

/// Certified "a before b" in (modulus, argument in [0, 2pi)) order, or empty
/// when the boxes are too wide to tell.
std::optional<bool> before(const ComplexBox& a, const ComplexBox& b) {
  Interval ma = a.re().square() + a.im().square(), mb = b.re().square() + b.im().square();
  if (ma.hi() < mb.lo()) return true;
  if (mb.hi() < ma.lo()) return false;
  const int ha = half_plane(a), hb = half_plane(b);
  if (ha < 0 || hb < 0) return std::nullopt;
  if (ha != hb) return ha < hb;
  // same open half plane: arg a < arg b iff Im(conj(a) b) > 0
  Interval cross = a.re() * b.im() - a.im() * b.re();
  const int s = cross.sign();
  if (s == 0) return std::nullopt;
  return s > 0;
}

/// Sorts candidates by modulus, ties by argument in [0, 2pi). Boxes are
/// refined until every needed comparison is certified, up to 256 bits;
/// beyond that box midpoints decide.
void order(std::vector<Candidate>& cs, const CoeffFn& fn) {
  for (long bits = 32;; bits *= 2) {
    bool decided = true;
    auto cmp = [&](const Candidate& x, const Candidate& y) {
      auto r = before(x.box, y.box);
      if (!r) decided = false;
      return r.value_or(false);
    };
    std::vector<Candidate> trial = cs;
    std::stable_sort(trial.begin(), trial.end(), cmp);
    for (std::size_t i = 0; decided && i + 1 < trial.size(); ++i)
      if (!before(trial[i].box, trial[i + 1].box).value_or(false)) decided = false;
    if (decided) {
      cs = std::move(trial);
      return;
    }
    if (bits >= 256) {
      std::stable_sort(cs.begin(), cs.end(), [](const Candidate& x, const Candidate& y) {
        return before(point_of(x.box), point_of(y.box)).value_or(false);
      });
      return;
    }
    for (auto& c : cs) c.box = refine_root(fn, c.box, bits);
  }
}

std::vector<Candidate> isolate(const EPoly& p, bool real_coefficients) {
  std::vector<Candidate> out;
  for (const auto& r : isolate_roots(coefficient_fn(p), static_cast<int>(p.size()) - 1, real_coefficients))
    out.push_back({r, r.box});
  return out;
}

std::vector<Candidate> real_candidates(const std::vector<Candidate>& all) {
  std::vector<Candidate> out;
  for (const auto& c : all)
    if (c.root.real) out.push_back(c);
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.box.re().lo() < b.box.re().lo(); });
  return out;
}

}  // namespace

std::vector<Element> element_coefficients(const MPoly& p, Var v) {
  std::vector<Element> out;
  for (const auto& c : p.coefficients(v)) out.push_back(Element::from_presentation(c, MPoly(1), {}, !c.contains(var::kImag)));
  return out;
}

Element adjoin_root(std::vector<Element> coeffs, const RootSelector& selector) {
  EPoly p = prepare(std::move(coeffs));
  const bool realc = all_real(p);
  if (p.size() == 2) {
    Element r = -p[0];
    if (selector.kind == RootSelector::Kind::kRealIndex && (!realc || selector.index != 1))
      throw std::out_of_range("selector out of range");
    if (selector.kind == RootSelector::Kind::kHint && !r.enclosure(64).intersects(selector.hint))
      throw std::out_of_range("selector out of range");
    return r;
  }
  std::vector<Candidate> cs = isolate(p, realc);
  const CoeffFn fn = coefficient_fn(p);
  switch (selector.kind) {
    case RootSelector::Kind::kRealIndex: {
      if (!realc) throw std::domain_error("real_index selector needs real coefficients");
      auto reals = real_candidates(cs);
      if (selector.index < 1 || selector.index > static_cast<int>(reals.size()))
        throw std::out_of_range("selector out of range");
      return root_element(p, reals[selector.index - 1], realc);
    }
    case RootSelector::Kind::kHint: {
      std::vector<Candidate> hits;
      for (const auto& c : cs)
        if (c.box.intersects(selector.hint)) hits.push_back(c);
      // refine until the hint separates, then fall back to the default order
      for (long bits = 32; hits.size() > 1 && bits <= 256; bits *= 2) {
        std::vector<Candidate> next;
        for (auto& c : hits) {
          c.box = refine_root(fn, c.box, bits);
          if (c.box.intersects(selector.hint)) next.push_back(c);
        }
        hits = std::move(next);
      }
      if (hits.empty()) throw std::out_of_range("selector out of range");
      order(hits, fn);
      return root_element(p, hits.front(), realc);
    }
    case RootSelector::Kind::kSmallest:
      break;
  }
  order(cs, fn);
  return root_element(p, cs.front(), realc);
}

std::vector<Element> real_roots(std::vector<Element> coeffs) {
  trim(coeffs);
  if (coeffs.empty()) throw std::invalid_argument("zero polynomial");
  if (!all_real(coeffs)) throw std::domain_error("real_roots needs real coefficients");
  if (coeffs.size() == 1) return {};
  EPoly p = squarefree(monic(std::move(coeffs)));
  if (p.size() == 2) return {-p[0]};
  std::vector<Element> out;
  for (const auto& c : real_candidates(isolate(p, true))) out.push_back(root_element(p, c, true));
  return out;
}

std::vector<Element> all_roots(std::vector<Element> coeffs) {
  EPoly p = prepare(std::move(coeffs));
  if (p.size() == 2) return {-p[0]};
  const bool realc = all_real(p);
  std::vector<Candidate> cs = isolate(p, realc);
  order(cs, coefficient_fn(p));
  std::vector<Element> out;
  for (const auto& c : cs) out.push_back(root_element(p, c, realc));
  return out;
}

}  // namespace nashdcf
