#include "doctest.h"
#include "gen.hpp"
#include "nashdcf/polyalg.hpp"
#include "nashdcf/polytext.hpp"
#include "nashdcf/roots.hpp"
#include "nashdcf/sturm.hpp"

using namespace nashdcf;

namespace {

CoeffFn exact(const char* text) {
  Poly<Rational> p = to_rational_upoly(parse_poly(text), var::kZ);
  return [p](long bits) {
    std::vector<ComplexBox> c;
    for (const auto& q : p.coeffs()) c.emplace_back(Interval::around(q, bits));
    return c;
  };
}

// Value of the exact polynomial at a rational point.
Rational at(const char* text, const Rational& x) {
  return parse_poly(text).evaluate(var::kZ, x).constant_value();
}

}  // namespace

TEST_CASE("real roots of Z^2 - 2") {
  auto roots = isolate_roots(exact("Z^2 - 2"), 2, true);
  REQUIRE(roots.size() == 2);
  for (const auto& r : roots) {
    CHECK(r.real);
    // sign change of Z^2 - 2 across the segment brackets +-sqrt(2)
    CHECK(at("Z^2 - 2", r.box.re().lo().to_rational()) * at("Z^2 - 2", r.box.re().hi().to_rational()) < 0);
  }
}

TEST_CASE("complex roots of Z^2 + 1") {
  auto roots = isolate_roots(exact("Z^2 + 1"), 2, true);
  REQUIRE(roots.size() == 2);
  int above = 0;
  for (const auto& r : roots) {
    CHECK(!r.real);
    CHECK(r.box.re().contains(Rational(0)));
    CHECK(!r.box.im().contains_zero());
    above += r.box.im().sign() > 0;
    CHECK((r.box.im().contains(Rational(1)) || r.box.im().contains(Rational(-1))));
  }
  CHECK(above == 1);
}

TEST_CASE("clustered integer roots") {
  const char* w = "(Z-1)*(Z-2)*(Z-3)*(Z-4)*(Z-5)*(Z-6)*(Z-7)*(Z-8)*(Z-9)*(Z-10)*(Z-11)*(Z-12)";
  auto roots = isolate_roots(exact(w), 12, true);
  REQUIRE(roots.size() == 12);
  int found = 0;
  for (int k = 1; k <= 12; ++k)
    for (const auto& r : roots) found += r.real && r.box.re().contains(Rational(k));
  CHECK(found == 12);
}

TEST_CASE("refinement keeps the root and reaches the target width") {
  auto f = exact("Z^3 - 2");
  auto roots = isolate_roots(f, 3, true);
  for (const auto& r : roots) {
    ComplexBox b = refine_root(f, r.box, 200);
    CHECK(b.width() <= Dyadic(1, -200));
    CHECK(b.subset_of(r.box));
    if (r.real) {
      // cube root of 2 bracketed by a sign change
      CHECK(at("Z^3 - 2", b.re().lo().to_rational()) < 0);
      CHECK(at("Z^3 - 2", b.re().hi().to_rational()) > 0);
    }
  }
}

TEST_CASE("random polynomials isolate all roots") {
  testgen::Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    std::vector<Rational> c;
    int deg = static_cast<int>(rng.uniform(1, 9));
    for (int k = 0; k <= deg; ++k) c.push_back(rng.rational(20, 5));
    if (c.back() == 0) c.back() = 1;
    Poly<Rational> p(c);
    Poly<Rational> g = gcd(p, p.derivative());
    if (g.degree() > 0) continue;
    CoeffFn fn = [p](long bits) {
      std::vector<ComplexBox> b;
      for (const auto& q : p.coeffs()) b.emplace_back(Interval::around(q, bits));
      return b;
    };
    auto roots = isolate_roots(fn, p.degree(), true);
    CHECK(static_cast<int>(roots.size()) == p.degree());
    int reals = 0;
    for (const auto& r : roots) reals += r.real;
    CHECK(reals == sturm_count_all(p));
  }
}
