#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "nashdcf/polyalg.hpp"
#include "nashdcf/polytext.hpp"
#include "nashdcf/regions.hpp"
#include "nashdcf/sturm.hpp"

using namespace nashdcf;

namespace {

MPoly P(const char* s) { return parse_poly(s); }
RegionPoly R(const char* s, unsigned m, RegionMode mode = RegionMode::kReal) { return region_poly(P(s), m, mode); }
RegionPoint Q1(long a, long b = 1) { return RegionPoint::rational({Rational(a, b)}); }

constexpr auto kReal = RegionMode::kReal;
constexpr auto kComplex = RegionMode::kComplex;

// ---- oracle: substitute t = s + i*b into P(x', t) and count real roots s of
// the real and imaginary parts from Re(x_m) upward, without the shift by x_m.

struct CPoly {
  Poly<Rational> re, im;
};

CPoly cmul(const CPoly& a, const CPoly& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
CPoly cadd(const CPoly& a, const CPoly& b) { return {a.re + b.re, a.im + b.im}; }
CPoly cconst(const Rational& re, const Rational& im) {
  return {Poly<Rational>::constant(re), Poly<Rational>::constant(im)};
}

bool oracle_gamma(const MPoly& p, unsigned m, const std::vector<GaussQ>& x) {
  CPoly sum{};
  const CPoly t{Poly<Rational>(std::vector<Rational>{0, 1}), Poly<Rational>::constant(x[m - 1].im)};
  for (const auto& term : p.terms()) {
    CPoly acc = cconst(term.coef, 0);
    for (const auto& [v, e] : term.mono.powers())
      for (unsigned k = 0; k < e; ++k) acc = cmul(acc, v == var::tag(m) ? t : cconst(x[v - 1].re, x[v - 1].im));
    sum = cadd(sum, acc);
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

// Random polynomial in L1..Lm with total degree at most max_deg.
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

Element sqrt_of(long n) { return adjoin_root({Element::from_rational(-n), Element(), Element::from_rational(1)}, RootSelector::real_index(2)); }

}  // namespace

TEST_CASE("omega examples") {
  CHECK(omega(R("(L1^2 - 2)*L2^3 + L1*L2", 2)).poly == P("L1^2 - 2"));
  CHECK(omega(R("0", 2)).poly.is_zero());
  const RegionPoly w = omega(R("3*L1^2 + 1", 1));
  CHECK(w.m == 0);
  CHECK(w.poly == P("3"));
}

TEST_CASE("gamma_member examples") {
  CHECK(gamma_member(R("L1", 1), Q1(-1)));
  CHECK_FALSE(gamma_member(R("L1", 1), Q1(1)));
  CHECK_FALSE(gamma_member(R("L1", 1, kComplex), RegionPoint::gaussian({{0, 1}})));
  // u identically zero
  CHECK(gamma_member(R("L1*L2 - L1", 2), RegionPoint::rational({0, 5})));
  CHECK(gamma_member(R("L1*L2 - L1", 2, kComplex), RegionPoint::gaussian({{0, 0}, {1, 3}})));
}

TEST_CASE("wp_member examples") {
  CHECK(wp_member(R("L1", 1), Q1(1)));
  CHECK_FALSE(wp_member(R("L1", 1), Q1(-1)));
  CHECK_FALSE(wp_member(R("L1^2 - 1", 1), Q1(0)));
  CHECK(wp_member(R("L1^2 - 1", 1), Q1(2)));
  CHECK_FALSE(wp_member(R("L1^2 - 1", 1), Q1(1)));
  CHECK(wp_member(R("L1", 1, kComplex), RegionPoint::gaussian({{0, 1}})));
  CHECK_FALSE(wp_member(R("L1", 1, kComplex), RegionPoint::gaussian({{-3, 0}})));
  // the leading coefficient region matters: L1 * L2 needs L1 > 0
  CHECK(wp_member(R("L1*L2", 2), RegionPoint::rational({1, 1})));
  CHECK_FALSE(wp_member(R("L1*L2", 2), RegionPoint::rational({-1, 1})));
  CHECK_THROWS_AS(wp_member(R("L1", 1), RegionPoint::rational({1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(region_poly(P("L3"), 2, kReal), std::invalid_argument);
}

TEST_CASE("constants: W_P is everything for P != 0 and empty for 0") {
  testgen::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto pt = RegionPoint::rational({rng.rational(100, 100), rng.rational(100, 100)});
    CHECK(wp_member(R("5", 2), pt));
    CHECK(wp_member(R("-1/3", 2, kComplex), pt));
    CHECK_FALSE(wp_member(R("0", 2), pt));
  }
}

TEST_CASE("wp_member with algebraic and transcendental coordinates") {
  const Element r2 = sqrt_of(2), r3 = sqrt_of(3);
  const Element x0 = Element::from_tag(0);  // e^sqrt2 ~ 4.113
  CHECK_FALSE(wp_member(R("L1^2 - 2", 1), RegionPoint({r2})));
  CHECK(wp_member(R("L1^2 - 2", 1), RegionPoint({r2 + Element::from_rational(Rational(1, 1000))})));
  CHECK_FALSE(wp_member(R("L1^2 - 2", 1), RegionPoint({r2 - Element::from_rational(Rational(1, 1000))})));
  CHECK(wp_member(R("L1 - 4", 1), RegionPoint({x0})));
  CHECK_FALSE(wp_member(R("L1 - 5", 1), RegionPoint({x0})));
  // (sqrt2, sqrt3): L2^2 - L1^2 - 1 vanishes there
  CHECK_FALSE(wp_member(R("L2^2 - L1^2 - 1", 2), RegionPoint({r2, r3})));
  CHECK(wp_member(R("L2^2 - L1^2 - 1", 2), RegionPoint({r2, r3 + Element::from_rational(Rational(1, 100))})));
  // complex: i*sqrt2 is a root of L1^2 + 2; sqrt2 + i is off every real shift of it
  const Element i = Element::imaginary_unit();
  CHECK_FALSE(wp_member(R("L1^2 + 2", 1, kComplex), RegionPoint({i * r2})));
  CHECK(wp_member(R("L1^2 + 2", 1, kComplex), RegionPoint({r2 + i})));
  CHECK(wp_member(R("L1 - 4", 1, kComplex), RegionPoint({x0 + i})));
  CHECK_FALSE(wp_member(R("L1 - 5", 1, kComplex), RegionPoint({x0})));
}

TEST_CASE("property: element path agrees with the rational path") {
  testgen::Rng rng(20261018);
  for (int i = 0; i < 60; ++i) {
    const unsigned m = static_cast<unsigned>(rng.uniform(1, 2));
    const RegionMode mode = rng.coin() ? kReal : kComplex;
    const RegionPoly p = region_poly(random_region_poly(rng, m, 3), m, mode);
    std::vector<GaussQ> c;
    for (unsigned k = 0; k < m; ++k)
      c.push_back({rng.rational(20, 5), mode == kComplex && rng.coin() ? rng.rational(20, 5) : Rational(0)});
    const RegionPoint x = RegionPoint::gaussian(c);
    CHECK(wp_member(p, x) == wp_member(p, x.symbolic()));
  }
}

TEST_CASE("property: membership matches the unshifted oracle") {
  testgen::Rng rng(20261019);
  for (int i = 0; i < 40; ++i) {
    const unsigned m = static_cast<unsigned>(rng.uniform(1, 3));
    const RegionMode mode = i % 2 == 0 ? kReal : kComplex;
    const RegionPoly p = region_poly(random_region_poly(rng, m, 4), m, mode);
    for (const auto& x : sample_points(p, 100, static_cast<std::uint64_t>(i)))
      CHECK(wp_member(p, x) == oracle_wp(p.poly, m, *x.exact()));
  }
}

TEST_CASE("cylinder_member examples") {
  const std::map<std::uint32_t, Element> at{{2, Element::from_rational(3)}, {5, Element::from_rational(-1)}};
  // P in tags L2 < L5: L2 * L5 needs L2 > 0 and L5 above 0
  CHECK_FALSE(cylinder_member(P("L2*L5"), {2, 5}, at, kReal));
  CHECK(cylinder_member(P("L2*L5 + 4"), {2, 5}, at, kReal));
  CHECK(cylinder_member(P("L5 + 2"), {2, 5}, at, kReal));
  CHECK_THROWS_AS(cylinder_member(P("L2"), {5, 2}, at, kReal), std::invalid_argument);
  CHECK_THROWS_AS(cylinder_member(P("L2"), {2, 7}, at, kReal), std::invalid_argument);
}

TEST_CASE("property: lifting along a projection") {
  // Q(x1, x2, x3) = P(x1, x3): members of W_Q project into W_P
  testgen::Rng rng(211);
  for (const auto mode : {kReal, kComplex}) {
    std::size_t checked = 0;
    for (int pair = 0; checked < 100 && pair < 200; ++pair) {
      const MPoly p13 = random_region_poly(rng, 2, 3).rename(var::tag(2), var::tag(3));
      const RegionPoly q = region_poly(p13, 3, mode);
      for (const auto& x : sample_points(q, 10, static_cast<std::uint64_t>(pair))) {
        if (!wp_member(q, x)) continue;
        std::map<std::uint32_t, Element> at;
        for (std::uint32_t k = 0; k < 3; ++k) at[k + 1] = x.coords()[k];
        CHECK(cylinder_member(p13, {1, 3}, at, mode));
        ++checked;
      }
    }
    CHECK(checked >= 100);
  }
}

TEST_CASE("property: real points have the same membership in both modes") {
  testgen::Rng rng(213);
  const Element x0 = Element::from_tag(0);
  for (int i = 0; i < 100; ++i) {
    const unsigned m = static_cast<unsigned>(rng.uniform(1, 3));
    const MPoly poly = random_region_poly(rng, m, 4);
    const RegionPoly pr = region_poly(poly, m, kReal), pc = region_poly(poly, m, kComplex);
    std::vector<Rational> c;
    for (unsigned k = 0; k < m; ++k) c.push_back(rng.rational(100, 100));
    const RegionPoint x = RegionPoint::rational(c);
    CHECK(wp_member(pr, x) == wp_member(pc, x));
    if (i < 20) {
      // one transcendental coordinate forces the element path
      std::vector<Element> e = x.coords();
      e[0] = e[0] + x0;
      CHECK(wp_member(pr, RegionPoint(e)) == wp_member(pc, RegionPoint(e)));
    }
  }
}

TEST_CASE("check_R_axioms examples") {
  AxiomOptions opt;
  opt.samples = 100;
  opt.seed = 3;
  const AxiomReport rep = check_R_axioms(R("L1", 1), R("L1 - 1", 1), opt);
  REQUIRE(rep.lines.size() == 3);
  CHECK(rep.lines[0].str() == "R0 OK 100/100");
  CHECK(rep.lines[1].str() == "R1 OK 100/100");
  CHECK(rep.lines[2].str() == "R2 OK found (1000001)");
  CHECK(rep.str().rfind("seed 3 samples 100\n", 0) == 0);

  const AxiomReport r0 = check_R_axioms(R("L1^2 - 1", 1), R("1", 1), opt);
  CHECK(r0.ok());
  auto found = search_member(R("L1", 1), Rational(1000000));
  REQUIRE(found.has_value());
  CHECK(found->str() == "(1000001)");
  CHECK_FALSE(search_member(R("0", 1), Rational(1)).has_value());

  AxiomLine bad;
  bad.axiom = "R1";
  bad.ok = false;
  bad.detail = RegionPoint::rational({Rational(3, 7), Rational(-2, 5)}).str();
  CHECK(bad.str() == "R1 FAIL at (3/7, -2/5)");
}

TEST_CASE("property: R0 and R1 on random pairs in both modes") {
  testgen::Rng rng(20261020);
  for (const auto mode : {kReal, kComplex}) {
    for (int pair = 0; pair < 20; ++pair) {
      const unsigned m = static_cast<unsigned>(rng.uniform(1, 3));
      const RegionPoly p = region_poly(random_region_poly(rng, m, 4), m, mode);
      const RegionPoly q = region_poly(random_region_poly(rng, m, 4), m, mode);
      AxiomOptions opt;
      opt.seed = static_cast<std::uint64_t>(100 + pair);
      const AxiomReport rep = check_R_axioms(p, q, opt);
      INFO(to_string(p.poly), " | ", to_string(q.poly), "\n", rep.str());
      CHECK(rep.lines[0].str() == "R0 OK 1000/1000");
      CHECK(rep.lines[1].str() == "R1 OK 1000/1000");
      CHECK(rep.lines[2].ok);
    }
  }
}

TEST_CASE("property: members of W_P near random complex points") {
  testgen::Rng rng(217);
  for (int i = 0; i < 50; ++i) {
    const unsigned m = static_cast<unsigned>(rng.uniform(1, 2));
    const RegionPoly p = region_poly(random_region_poly(rng, m, 3), m, kComplex);
    std::vector<GaussQ> c;
    for (unsigned k = 0; k < m; ++k) c.push_back({rng.rational(50, 10), rng.rational(50, 10)});
    auto y = member_near(p, c, 10, static_cast<std::uint64_t>(i));
    REQUIRE(y.has_value());
    for (unsigned k = 0; k < m; ++k) {
      const GaussQ& g = (*y->exact())[k];
      CHECK(abs(g.re - c[k].re) < Rational(1, 1024));
      CHECK(abs(g.im - c[k].im) < Rational(1, 1024));
    }
  }
}
