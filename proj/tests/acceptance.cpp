// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <mpfr.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gen.hpp"
#include "nashdcf/diffclosure.hpp"
#include "nashdcf/element.hpp"
#include "nashdcf/polyalg.hpp"
#include "nashdcf/polytext.hpp"
#include "nashdcf/regions.hpp"
#include "nashdcf/session.hpp"
#include "nashdcf/sturm.hpp"

using namespace nashdcf;

namespace {

// Counts checks; keeps the first failure for the report line.
struct Tally {
  std::size_t checks = 0, failed = 0;
  std::string first;
  std::string note;
  void check(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failed++ == 0) first = what;
  }
};

Element q(long n, long d = 1) { return Element::from_rational(Rational(n, d)); }
bool same(const Element& a, const Element& b) { return (a - b).is_zero(); }
Element sqrt_of(const Element& a) { return adjoin_root({-a, Element(), q(1)}, RootSelector::real_index(2)); }

const Resolver kNoNames = [](const std::string&) { return std::optional<Element>(); };
DiffPoly dp(std::string_view text) { return parse_diffpoly(text, kNoNames); }
DiffPoly Y(std::uint32_t k = 0) { return DiffPoly::y(k); }
DiffPoly C(const Element& e) { return DiffPoly(e); }

// ---- MPFR oracle for anchor values: L_t = exp(sqrt(t-th prime)).

constexpr mpfr_prec_t kOracleBits = 320;

struct Big {
  mpfr_t v;
  Big() { mpfr_init2(v, kOracleBits); mpfr_set_zero(v, 1); }
  Big(const Big& o) { mpfr_init2(v, kOracleBits); mpfr_set(v, o.v, MPFR_RNDN); }
  Big& operator=(const Big& o) {
    mpfr_set(v, o.v, MPFR_RNDN);
    return *this;
  }
  ~Big() { mpfr_clear(v); }
};

Big big_rational(const Rational& r) {
  Big b;
  mpfr_set_q(b.v, r.get_mpq_t(), MPFR_RNDN);
  return b;
}

Big big_tag(std::uint32_t t) {
  static const long primes[] = {2, 3, 5, 7};
  Big b;
  mpfr_set_si(b.v, primes[t], MPFR_RNDN);
  mpfr_sqrt(b.v, b.v, MPFR_RNDN);
  mpfr_exp(b.v, b.v, MPFR_RNDN);
  return b;
}

struct Valued {
  Element e;
  Big x;
};

Valued vsqrt(const Valued& a) {
  Valued r{sqrt_of(a.e), {}};
  mpfr_sqrt(r.x.v, a.x.v, MPFR_RNDN);
  return r;
}

// Random real element over tags 0..2 together with its oracle value.
Valued random_valued(testgen::Rng& rng, int depth) {
  if (depth == 0 || rng.uniform(0, 3) == 0) {
    switch (rng.uniform(0, 3)) {
      case 0: {
        const Rational r = rng.rational(9, 4);
        return {Element::from_rational(r), big_rational(r)};
      }
      case 1: {
        const auto t = static_cast<std::uint32_t>(rng.uniform(0, 2));
        return {Element::from_tag(t), big_tag(t)};
      }
      case 2: {
        const Rational r(rng.uniform(2, 7));
        return vsqrt({Element::from_rational(r), big_rational(r)});
      }
      default: {
        const auto t = static_cast<std::uint32_t>(rng.uniform(0, 1));
        return vsqrt({Element::from_tag(t), big_tag(t)});
      }
    }
  }
  Valued a = random_valued(rng, depth - 1), b = random_valued(rng, depth - 1);
  Valued r;
  switch (rng.uniform(0, 3)) {
    case 0:
      r.e = a.e + b.e;
      mpfr_add(r.x.v, a.x.v, b.x.v, MPFR_RNDN);
      break;
    case 1:
      r.e = a.e - b.e;
      mpfr_sub(r.x.v, a.x.v, b.x.v, MPFR_RNDN);
      break;
    case 2:
      r.e = a.e * b.e;
      mpfr_mul(r.x.v, a.x.v, b.x.v, MPFR_RNDN);
      break;
    default:
      if (b.e.is_zero()) return a;
      r.e = a.e / b.e;
      mpfr_div(r.x.v, a.x.v, b.x.v, MPFR_RNDN);
  }
  return r;
}

Element random_real(testgen::Rng& rng, int depth) { return random_valued(rng, depth).e; }

// Whether the oracle value lies in [lo - 2^-200, hi + 2^-200].
bool oracle_inside(const Big& x, const Interval& iv) {
  Big lo = big_rational(iv.lo().to_rational()), hi = big_rational(iv.hi().to_rational());
  Big slack;
  mpfr_set_ui_2exp(slack.v, 1, -200, MPFR_RNDN);
  mpfr_sub(lo.v, lo.v, slack.v, MPFR_RNDD);
  mpfr_add(hi.v, hi.v, slack.v, MPFR_RNDU);
  return mpfr_lessequal_p(lo.v, x.v) && mpfr_lessequal_p(x.v, hi.v);
}

// Random differential polynomial of exact order n, total degree <= 3, with
// coefficients from the pool.
DiffPoly random_diffpoly(testgen::Rng& rng, int n, const std::vector<Element>& pool) {
  auto coef = [&]() {
    Element c = rng.coin() ? pool[rng.uniform(0, static_cast<long>(pool.size()) - 1)]
                           : Element::from_rational(rng.nonzero_rational(5, 3));
    return c.is_zero() ? q(1) : c;
  };
  DiffPoly p;
  do {
    p = DiffPoly();
    if (n >= 0) p = C(coef()) * Y(static_cast<std::uint32_t>(n)).pow(static_cast<unsigned>(rng.uniform(1, 2)));
    const int terms = static_cast<int>(rng.uniform(0, 3));
    for (int t = 0; t < terms; ++t) {
      DiffPoly m = C(coef());
      const int deg = static_cast<int>(rng.uniform(0, 3));
      for (int d = 0; d < deg && n >= 0; ++d) m = m * Y(static_cast<std::uint32_t>(rng.uniform(0, n)));
      p = p + m;
    }
    if (n < 0 && p.is_zero()) p = C(coef());
  } while (p.order() != n);
  return p;
}

// ---- independent membership oracle: substitute t = s + i*Im(x_m) and count
// real roots s of gcd(Re, Im) from Re(x_m) upward.

struct CPoly {
  Poly<Rational> re, im;
};

CPoly cmul(const CPoly& a, const CPoly& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

bool oracle_gamma(const MPoly& p, unsigned m, const std::vector<GaussQ>& x) {
  CPoly sum{};
  const CPoly t{Poly<Rational>(std::vector<Rational>{0, 1}), Poly<Rational>::constant(x[m - 1].im)};
  for (const auto& term : p.terms()) {
    CPoly acc{Poly<Rational>::constant(term.coef), Poly<Rational>()};
    for (const auto& [v, e] : term.mono.powers()) {
      const CPoly f = v == var::tag(m) ? t
                                       : CPoly{Poly<Rational>::constant(x[v - 1].re), Poly<Rational>::constant(x[v - 1].im)};
      for (unsigned k = 0; k < e; ++k) acc = cmul(acc, f);
    }
    sum = {sum.re + acc.re, sum.im + acc.im};
  }
  Poly<Rational> g;
  if (sum.re.is_zero()) g = sum.im;
  else if (sum.im.is_zero()) g = sum.re;
  else g = gcd(sum.re, sum.im);
  if (g.is_zero()) return true;
  if (g.degree() == 0) return false;
  if (g.eval(x[m - 1].re) == 0) return true;
  // squarefree first, so the start point is never a common zero of the chain
  const Poly<Rational> d = gcd(g, g.derivative());
  if (d.degree() > 0) g = divide(g, d).quotient;
  return sturm_count_from(g, x[m - 1].re) > 0;
}

bool oracle_wp(const MPoly& p, unsigned m, const std::vector<GaussQ>& x) {
  if (m == 0) return !p.is_zero();
  if (oracle_gamma(p, m, x)) return false;
  if (m == 1) return true;
  return oracle_wp(p.leading_coefficient(var::tag(m)), m - 1, std::vector<GaussQ>(x.begin(), x.end() - 1));
}

MPoly random_region_poly(testgen::Rng& rng, unsigned m, unsigned max_deg) {
  MPoly p;
  const long terms = rng.uniform(1, 4);
  for (long i = 0; i < terms; ++i) {
    MPoly t(Rational(rng.uniform(-5, 5)));
    unsigned left = static_cast<unsigned>(rng.uniform(0, max_deg));
    for (unsigned v = 1; v <= m && left > 0; ++v) {
      const unsigned e = static_cast<unsigned>(rng.uniform(0, left));
      t *= MPoly::variable(var::tag(v)).pow(e);
      left -= e;
    }
    p += t;
  }
  if (p.is_zero()) p = MPoly::variable(var::tag(m));
  return p;
}

// ---- criteria

void field_closure(Tally& t) {
  testgen::Rng rng(101);
  for (int n = 0; n < 200; ++n) {
    Element a = random_real(rng, 2), b = random_real(rng, 1), c = random_real(rng, 1);
    t.check(same((a + b) + c, a + (b + c)), "additive associativity");
    t.check(same(a + b, b + a), "additive commutativity");
    t.check(same((a * b) * c, a * (b * c)), "multiplicative associativity");
    t.check(same(a * b, b * a), "multiplicative commutativity");
    t.check(same(a * (b + c), a * b + a * c), "distributivity");
    t.check((a - a).is_zero(), "additive inverse");
    if (!a.is_zero()) t.check(same(a * a.inverse(), q(1)), "multiplicative inverse");
  }
  for (int n = 0; n < 30; ++n) {
    const int deg = static_cast<int>(2 * rng.uniform(0, 1) + 1);
    std::vector<Element> c;
    for (int k = 0; k < deg; ++k) c.push_back(random_real(rng, 0));
    c.push_back(random_real(rng, 0));
    if (c.back().is_zero()) c.back() = q(1);
    const auto roots = real_roots(c);
    t.check(!roots.empty(), "odd degree polynomial without a real root");
    for (const auto& r : roots) {
      Element v;
      for (std::size_t k = c.size(); k-- > 0;) v = v * r + c[k];
      t.check(v.is_zero(), "real root does not vanish");
    }
  }
  for (int n = 0; n < 30; ++n) {
    Element a = random_real(rng, 1);
    if (a.sign() <= 0) a = q(1) - a;
    const Element r = sqrt_of(a);
    t.check((r * r - a).is_zero(), "square root");
    t.check(r.sign() == 1, "square root sign");
  }
}

void ordering(Tally& t) {
  testgen::Rng rng(102);
  for (int n = 0; n < 100; ++n) {
    const Element a = random_real(rng, 1), b = random_real(rng, 1);
    const int sa = a.sign(), sb = b.sign();
    t.check((sa == 0) == a.is_zero(), "trichotomy");
    t.check((a * b).sign() == sa * sb, "sign multiplicativity");
    t.check((a - b).sign() == -(b - a).sign(), "antisymmetry");
  }
  // refinement step k asks for 4k bits
  int worst = 0;
  for (int n = 0; n < 50; ++n) {
    const Valued v = random_valued(rng, 2);
    int reached = 0;
    std::optional<ComplexBox> prev;
    for (int step = 1; step <= 20; ++step) {
      const ComplexBox box = v.e.enclosure(4L * step);
      t.check(box.is_real(), "real element with a complex box");
      t.check(oracle_inside(v.x, box.re()), "box misses the oracle value");
      if (prev) t.check(box.intersects(*prev), "successive boxes are disjoint");
      prev = box;
      if (box.re().narrower_than(64)) {
        reached = step;
        break;
      }
    }
    t.check(reached > 0, "box not below 2^-64 after 20 steps");
    worst = std::max(worst, reached);
  }
  t.note = "boxes below 2^-64 by step " + std::to_string(worst);
}

void derivation(Tally& t) {
  Engine e;
  testgen::Rng rng(103);
  auto g = e.adjoin_generators(3, [](const std::vector<Element>& v) {
    return std::vector<Element>{Element::from_rational(1), v[0] * v[2], v[0] - v[1]};
  });
  g.push_back(e.fresh_var());
  std::vector<std::pair<std::vector<Element>, Element>> roots;
  auto leaf = [&]() -> Element {
    switch (rng.uniform(0, 3)) {
      case 0: return Element::from_rational(rng.rational(7, 3));
      case 1: return g[rng.uniform(0, 3)];
      case 2: {
        const Element a = g[rng.uniform(0, 3)];
        const Element r = sqrt_of(a);
        roots.push_back({{-a, Element(), q(1)}, r});
        return r;
      }
      default: return g[rng.uniform(0, 3)] * Element::from_rational(rng.nonzero_rational(5, 2)) + g[rng.uniform(0, 3)];
    }
  };
  for (int n = 0; n < 100; ++n) {
    Element a = leaf(), b = leaf();
    if (rng.coin()) a = a / (b * b + q(1));
    t.check(same(e.apply_delta(a + b), e.apply_delta(a) + e.apply_delta(b)), "additivity");
    t.check(same(e.apply_delta(a * b), e.apply_delta(a) * b + a * e.apply_delta(b)), "Leibniz rule");
    t.check(e.apply_delta(Element::from_rational(rng.rational(50, 7))).is_zero(), "delta of a rational");
  }
  for (int n = 0; n < 20; ++n) {
    std::vector<Element> c{leaf(), leaf(), q(1)};
    if (rng.coin()) c.insert(c.begin() + 1, leaf());
    roots.push_back({c, adjoin_root(c)});
  }
  for (const auto& [c, r] : roots) t.check(e.relation_residual(c, r).is_zero(), "differentiated relation");
  t.note = std::to_string(roots.size()) + " adjoined roots";
}

void blum(Tally& t) {
  Engine e;
  testgen::Rng rng(104);
  std::vector<Element> pool{e.fresh_var()};
  for (int n = 0; n < 50; ++n) {
    const int ord = static_cast<int>(rng.uniform(1, 3));
    const DiffPoly p = random_diffpoly(rng, ord, pool);
    const DiffPoly qp = random_diffpoly(rng, static_cast<int>(rng.uniform(-1, ord - 1)), pool);
    const Element f = e.blum_witness(p, qp);
    const auto& rec = e.log().back();
    t.check(e.diff_eval(p, f).is_zero(), "p(f) != 0 for " + p.str());
    t.check(!e.diff_eval(qp, f).is_zero(), "q(f) = 0 for " + qp.str());
    for (int i = 0; i < ord; ++i)
      t.check(same(e.delta_power(f, static_cast<unsigned>(i)), Element::from_tag(rec.tags[i])), "delta^i f is not the tag");
    pool.push_back(f);
    pool.push_back(e.delta_power(f, static_cast<unsigned>(ord)));
  }
}

void distinct(Tally& t) {
  Engine e;
  const auto s = e.distinct_solutions(5);
  t.check(s.size() == 5, "wrong count");
  const DiffPoly p0 = dp("(1 + y)*y' - y");
  for (std::size_t i = 0; i < s.size(); ++i) {
    t.check(!s[i].is_zero(), "zero solution");
    t.check(e.diff_eval(p0, s[i]).is_zero(), "not a solution");
    for (std::size_t j = i + 1; j < s.size(); ++j) t.check(!(s[i] - s[j]).is_zero(), "repeated solution");
  }
}

void ordered(Tally& t) {
  Engine e;
  e.max_halvings = 16;
  struct Config {
    DiffPoly p;
    std::vector<DiffPoly> qs;
    std::vector<Element> point;
  };
  std::vector<Config> cs;
  cs.push_back({dp("y' - y"), {dp("y")}, {q(1), q(1)}});
  cs.push_back({dp("y'"), {dp("1 - y^2")}, {q(0), q(0)}});
  testgen::Rng rng(106);
  while (cs.size() < 25) {
    // p = y^(k) - h(y, ..., y^(k-1)) is nondegenerate everywhere
    const int k = static_cast<int>(rng.uniform(1, 2));
    const DiffPoly h = random_diffpoly(rng, k - 1, {q(1)});
    std::vector<Element> point;
    for (int i = 0; i < k; ++i) point.push_back(Element::from_rational(rng.rational(5, 3)));
    point.push_back(h.evaluate(point));
    const Element lo = point[0] - q(1, 4), hi = point[0] + q(1, 4);
    cs.push_back({Y(static_cast<std::uint32_t>(k)) - h, {(Y() - C(lo)) * (C(hi) - Y())}, point});
  }
  int worst = 0;
  for (const auto& c : cs) {
    const Element f = e.ordered_witness(c.p, c.qs, c.point);
    // tolerances tried are logged as eps=2^-n
    int halvings = 0;
    for (const auto& sel : e.log().back().selections)
      if (sel.rfind("eps=2^-", 0) == 0) halvings = std::stoi(sel.substr(7)) - e.start_eps_exponent;
    t.check(halvings <= 16, "more than 16 halvings for " + c.p.str());
    worst = std::max(worst, halvings);
    t.check(f.is_real(), "witness not real");
    t.check(e.diff_eval(c.p, f).is_zero(), "p(f) != 0 for " + c.p.str());
    for (const auto& qj : c.qs) t.check(e.diff_eval(qj, f).sign() == 1, "q(f) not positive for " + qj.str());
  }
  t.note = std::to_string(cs.size()) + " configurations, at most " + std::to_string(worst) + " halvings";
}

void ivt(Tally& t) {
  Engine e;
  const Element r2 = sqrt_of(q(2));
  struct Config {
    const char* p;
    Element a, b;
  };
  const std::vector<Config> cs = {
      {"y' + y - 1", q(0), q(2)},         {"y^2 - 2", q(1), q(2)},     {"y - 2", q(1), q(3)},
      {"y' - y", q(-1), q(1)},            {"y^3 - y - 1", q(1), q(2)}, {"y'' + y' - y", q(-2), q(3)},
      {"y'^2 - y", q(-1), q(1)},          {"y' + y^2 - 3", r2, q(3)},      {"2*y' + y^2 - 3", q(0), r2 + q(1)},
      {"y'' - y^2 + 1/2", q(-1, 2), q(2)},
  };
  std::size_t failures = 0;
  for (const auto& c : cs) {
    const DiffPoly p = dp(c.p);
    const int sa = e.diff_eval(p, c.a).sign(), sb = e.diff_eval(p, c.b).sign();
    t.check(sa * sb == -1, std::string("no sign change for ") + c.p);
    if (sa * sb != -1) continue;
    try {
      const Element x = e.root_between(p, c.a, c.b);
      t.check((x - c.a).sign() == 1 && (c.b - x).sign() == 1, std::string("root outside for ") + c.p);
      t.check(e.diff_eval(p, x).is_zero(), std::string("p(c) != 0 for ") + c.p);
    } catch (const NondegeneracyFailure&) {
      ++failures;
    }
  }
  t.note = "nondegeneracy errors " + std::to_string(failures) + "/" + std::to_string(cs.size());
}

std::string run_script(Session& s, const std::string& text, std::size_t& failed) {
  std::istringstream in(text);
  std::ostringstream out, err;
  failed = static_cast<std::size_t>(s.run(in, out, err));
  return out.str() + err.str();
}

void universal(Tally& t) {
  Session s;
  std::size_t failed = 0;
  run_script(s, "extend 1 with e as e\nextend 2 with c, -s as s c\n", failed);
  t.check(failed == 0, "extend failed");
  auto check = [&](Session& x, const char* when) {
    if (!x.element("e") || !x.element("s") || !x.element("c")) {
      t.check(false, std::string("generators missing ") + when);
      return;
    }
    Engine& e = x.engine();
    const Element ex = *x.element("e"), sn = *x.element("s"), cs = *x.element("c");
    t.check(same(e.apply_delta(ex), ex), std::string("delta e != e ") + when);
    t.check(same(e.delta_power(sn, 2), -sn), std::string("delta^2 s != -s ") + when);
    t.check(same(e.delta_power(cs, 2), -cs), std::string("delta^2 c != -c ") + when);
    t.check(same(e.apply_delta(sn), cs), std::string("delta s != c ") + when);
  };
  check(s, "");
  const std::string text = s.save_text();
  Session r;
  r.restore(text);
  check(r, "after replay");
  t.check(r.save_text() == text, "replayed session saves differently");
  for (const char* name : {"e", "s", "c"}) {
    const auto a = s.element(name), b = r.element(name);
    t.check(a && b && same(*a, *b), "replayed element differs");
  }
}

void regions(Tally& t) {
  testgen::Rng rng(109);
  std::size_t oracle_checks = 0;
  for (const auto mode : {RegionMode::kReal, RegionMode::kComplex}) {
    for (int pair = 0; pair < 20; ++pair) {
      const unsigned m = static_cast<unsigned>(rng.uniform(1, 3));
      const RegionPoly p = region_poly(random_region_poly(rng, m, 4), m, mode);
      const RegionPoly qq = region_poly(random_region_poly(rng, m, 4), m, mode);
      AxiomOptions opt;
      opt.seed = static_cast<std::uint64_t>(900 + pair);
      const AxiomReport rep = check_R_axioms(p, qq, opt);
      const std::string ctx = " for " + to_string(p.poly) + " | " + to_string(qq.poly);
      t.check(rep.lines.size() == 3 && rep.lines[0].str() == "R0 OK 1000/1000", "R0" + ctx);
      t.check(rep.lines.size() == 3 && rep.lines[1].str() == "R1 OK 1000/1000", "R1" + ctx);
      t.check(rep.lines.size() == 3 && rep.lines[2].ok, "R2" + ctx);
      // the same samples against the independent oracle
      const MPoly pq = p.poly * qq.poly;
      for (const auto& x : sample_points(p, 1000, opt.seed)) {
        if (!x.exact()) continue;
        const auto& g = *x.exact();
        const bool lhs = oracle_wp(p.poly, m, g) && oracle_wp(qq.poly, m, g);
        t.check(lhs == oracle_wp(pq, m, g), "oracle R1" + ctx + " at " + x.str());
        t.check(wp_member(p, x) == oracle_wp(p.poly, m, g), "membership differs from oracle" + ctx + " at " + x.str());
        ++oracle_checks;
      }
    }
  }
  // constants: W_P is all of K^m for P != 0 and empty for P = 0
  for (const auto mode : {RegionMode::kReal, RegionMode::kComplex}) {
    for (unsigned m = 1; m <= 3; ++m) {
      const RegionPoly five = region_poly(MPoly(Rational(5)), m, mode), zero = region_poly(MPoly(), m, mode);
      for (const auto& x : sample_points(region_poly(MPoly::variable(var::tag(m)), m, mode), 100, m)) {
        t.check(wp_member(five, x), "R5: constant excludes " + x.str());
        t.check(!wp_member(zero, x), "zero polynomial includes " + x.str());
      }
    }
  }
  // lifting: Q(x1, x2, x3) = P(x1, x3), so members of W_Q lie in the cylinder over W_P
  for (const auto mode : {RegionMode::kReal, RegionMode::kComplex}) {
    std::size_t lifted = 0;
    for (int pair = 0; lifted < 100 && pair < 200; ++pair) {
      const MPoly p13 = random_region_poly(rng, 2, 3).rename(var::tag(2), var::tag(3));
      const RegionPoly qq = region_poly(p13, 3, mode);
      const MPoly p12 = p13.rename(var::tag(3), var::tag(2));
      for (const auto& x : sample_points(qq, 10, static_cast<std::uint64_t>(pair))) {
        if (!wp_member(qq, x)) continue;
        std::map<std::uint32_t, Element> at;
        for (std::uint32_t k = 0; k < 3; ++k) at[k + 1] = x.coords()[k];
        t.check(cylinder_member(p13, {1, 3}, at, mode), "lifting at " + x.str());
        t.check(wp_member(region_poly(p12, 2, mode), RegionPoint({x.coords()[0], x.coords()[2]})),
                "projection at " + x.str());
        ++lifted;
      }
    }
    t.check(lifted >= 100, "fewer than 100 lifting samples");
  }
  // real restriction: real points have the same membership in both modes
  for (int i = 0; i < 100; ++i) {
    const unsigned m = static_cast<unsigned>(rng.uniform(1, 3));
    const MPoly poly = random_region_poly(rng, m, 4);
    std::vector<Rational> c;
    for (unsigned k = 0; k < m; ++k) c.push_back(rng.rational(100, 100));
    const RegionPoint x = RegionPoint::rational(c);
    const RegionPoly pr = region_poly(poly, m, RegionMode::kReal), pc = region_poly(poly, m, RegionMode::kComplex);
    t.check(wp_member(pr, x) == wp_member(pc, x), "real restriction at " + x.str());
    if (i < 20) {
      std::vector<Element> e = x.coords();
      e[0] = e[0] + Element::from_tag(0);
      t.check(wp_member(pr, RegionPoint(e)) == wp_member(pc, RegionPoint(e)), "real restriction off Q");
    }
  }
  t.note = std::to_string(oracle_checks) + " oracle points";
}

void determinism(Tally& t) {
  const std::string script =
      "let a = var\n"
      "let b = var\n"
      "let r = adjoin Z^3 - a*b - 1 real 1\n"
      "let i2 = adjoin Z^2 + 2 smallest\n"
      "let w = (a + i2)/(b - 1)\n"
      "dp p = y' - y\n"
      "dp p2 = y'' - y*y' + a\n"
      "let f = witness p (y - 1)\n"
      "let g = witness p2 (y')\n"
      "let h = owitness (y' - y) (y) at 1 1\n"
      "solutions 2\n"
      "let c = rootbetween (y' + y - 1) 0 2\n"
      "extend 2 with cs, -sn as sn cs\n"
      "let d = delta(g) + r*h - sn^2\n"
      "bogus command\n"
      "let k = 1/0\n"
      "wp member real \"L1^2 - 2\" 3 1/2\n"
      "sign d - f\n";
  Session s;
  std::size_t failed = 0;
  run_script(s, script, failed);
  t.check(failed == 2, "expected exactly two failing commands, got " + std::to_string(failed));
  const std::string text = s.save_text();

  const auto path = std::filesystem::temp_directory_path() / "nashdcf_acceptance.nds";
  s.save(path.string());
  Session fresh;
  fresh.load(path.string());
  std::filesystem::remove(path);

  t.check(fresh.elements().size() == s.elements().size(), "element count differs");
  for (const auto& [name, e] : s.elements()) {
    const auto other = fresh.element(name);
    t.check(other.has_value() && (e - *other).is_zero(), "element " + name + " differs after replay");
  }
  t.check(fresh.save_text() == text, "re-save is not byte-identical");
  Session again;
  again.restore(fresh.save_text());
  t.check(again.save_text() == text, "second replay is not byte-identical");
  t.note = std::to_string(s.elements().size()) + " elements";
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Tally&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "field and closure", field_closure},
      {2, "ordering and evaluation", ordering},
      {3, "derivation", derivation},
      {4, "Blum witnesses", blum},
      {5, "distinct solutions", distinct},
      {6, "ordered witnesses", ordered},
      {7, "differential IVT", ivt},
      {8, "universal extension", universal},
      {9, "regions", regions},
      {10, "session determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : all) {
    Tally t;
    std::string error;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(t);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = error.empty() && t.failed == 0;
    if (!ok) ++failed;
    std::ostringstream line;
    line << (ok ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.name << ": " << t.checks - t.failed << '/' << t.checks
         << " checks";
    if (!t.note.empty()) line << ", " << t.note;
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.1fs)", secs);
    line << buf;
    if (!error.empty()) line << " error: " << error;
    else if (t.failed > 0) line << " first failure: " << t.first;
    std::cout << line.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
