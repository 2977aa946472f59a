#include "nashdcf/regions.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "nashdcf/polyalg.hpp"
#include "nashdcf/polytext.hpp"
#include "nashdcf/sturm.hpp"
#include "nashdcf/upoly.hpp"

namespace nashdcf {

namespace {

GaussQ operator+(const GaussQ& a, const GaussQ& b) { return {a.re + b.re, a.im + b.im}; }
GaussQ operator*(const GaussQ& a, const GaussQ& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussQ lift_gauss(const Rational& q) { return {q, 0}; }
Element lift_element(const Rational& q) { return Element::from_rational(q); }

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Coefficients in g (lowest first) of P(x1, ..., x(m-1), xm + g).
template <class T>
std::vector<T> shifted_univariate(const MPoly& p, unsigned m, const std::vector<T>& x, T (*lift)(const Rational&)) {
  std::vector<T> out;
  const Var last = var::tag(m);
  for (const auto& t : p.terms()) {
    T base = lift(t.coef);
    unsigned e_last = 0;
    for (const auto& [v, e] : t.mono.powers()) {
      if (v == last) {
        e_last = e;
        continue;
      }
      for (unsigned k = 0; k < e; ++k) base = base * x[v - 1];
    }
    // (xm + g)^e = sum_k C(e, k) xm^(e-k) g^k
    std::vector<T> xm_pow{lift(1)};
    for (unsigned k = 0; k < e_last; ++k) xm_pow.push_back(xm_pow.back() * x[m - 1]);
    if (out.size() < e_last + 1) out.resize(e_last + 1, lift(0));
    for (unsigned k = 0; k <= e_last; ++k)
      out[k] = out[k] + base * xm_pow[e_last - k] * lift(Rational(binomial(e_last, k)));
  }
  return out;
}

bool root_from_zero(const Poly<Rational>& u) {
  if (u.is_zero()) return true;
  if (u.degree() == 0) return false;
  return sturm_count_from(u, Rational(0)) > 0;
}

// ---- univariate polynomials over Elements, lowest first, trimmed

using EVec = std::vector<Element>;

void trim(EVec& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

EVec remainder(EVec a, const EVec& b) {
  const Element inv = b.back().inverse();
  while (a.size() >= b.size()) {
    const Element f = a.back() * inv;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i + 1 < b.size(); ++i) a[shift + i] = a[shift + i] - f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

EVec derivative(const EVec& p) {
  EVec d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * Element::from_rational(static_cast<long>(k)));
  trim(d);
  return d;
}

EVec gcd(EVec a, EVec b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    EVec r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

int variations(const std::vector<int>& s) { return count_variations(s); }

// Real coefficients; true when u has a root in [0, inf).
bool root_from_zero(EVec u) {
  trim(u);
  if (u.empty()) return true;
  if (u.size() == 1) return false;
  if (u.front().is_zero()) return true;
  std::vector<EVec> chain{u, derivative(u)};
  while (chain.back().size() > 1) {
    EVec r = remainder(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  std::vector<int> at_zero, at_inf;
  for (const auto& q : chain) {
    at_zero.push_back(q.front().sign());
    at_inf.push_back(q.back().sign());
  }
  return variations(at_zero) - variations(at_inf) > 0;
}

bool gamma_exact(const RegionPoly& p, const std::vector<GaussQ>& x) {
  auto u = shifted_univariate<GaussQ>(p.poly, p.m, x, lift_gauss);
  std::vector<Rational> re, im;
  for (const auto& c : u) {
    re.push_back(c.re);
    im.push_back(c.im);
  }
  Poly<Rational> ure(re), uim(im);
  if (p.mode == RegionMode::kReal || uim.is_zero()) return root_from_zero(ure);
  if (ure.is_zero()) return root_from_zero(uim);
  return root_from_zero(gcd(ure, uim));
}

bool gamma_elements(const RegionPoly& p, const std::vector<Element>& x) {
  EVec u = shifted_univariate<Element>(p.poly, p.m, x, lift_element);
  if (p.mode == RegionMode::kReal) return root_from_zero(std::move(u));
  EVec re, im;
  for (const auto& c : u) {
    auto [a, b] = c.split_re_im();
    re.push_back(a);
    im.push_back(b);
  }
  trim(re);
  trim(im);
  if (im.empty()) return root_from_zero(std::move(re));
  if (re.empty()) return root_from_zero(std::move(im));
  return root_from_zero(gcd(std::move(re), std::move(im)));
}

void check_dim(const RegionPoly& p, const RegionPoint& x) {
  if (x.size() != p.m)
    throw std::invalid_argument("dimension mismatch: point has " + std::to_string(x.size()) + " coordinates, expected " +
                                std::to_string(p.m));
  if (p.mode == RegionMode::kReal)
    for (const auto& c : x.coords())
      if (!c.is_real()) throw std::invalid_argument("real mode needs real coordinates");
}

std::string gauss_text(const GaussQ& g) {
  if (g.im == 0) return to_string(g.re);
  std::string im = (g.im == 1) ? "I" : (g.im == -1) ? "-I" : to_string(g.im) + "*I";
  if (g.re == 0) return im;
  return to_string(g.re) + (g.im < 0 ? "" : "+") + im;
}

// Portable draws: no std distributions, so reports replay across platforms.
struct Draw {
  explicit Draw(std::uint64_t seed) : eng(seed) {}
  std::uint64_t below(std::uint64_t n) { return eng() % n; }
  Rational small_rational() {
    const long num = static_cast<long>(below(201)) - 100;
    const long den = static_cast<long>(below(100)) + 1;
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  std::mt19937_64 eng;
};

// Rational points within 2^-12 of each real root of a nonzero polynomial.
std::vector<Rational> near_real_roots(const Poly<Rational>& u) {
  std::vector<Rational> out;
  if (u.degree() <= 0) return out;
  Rational bound = 0;
  for (const auto& c : u.coeffs()) bound = std::max(bound, Rational(abs(c / u.lc())));
  bound += 1;
  const Rational width(1, 4096);
  std::vector<std::pair<Rational, Rational>> todo{{-bound, bound}};
  while (!todo.empty() && out.size() < 16) {
    auto [lo, hi] = todo.back();
    todo.pop_back();
    const int n = sturm_count(u, lo, hi);
    if (n == 0) continue;
    if (hi - lo < width) {
      out.push_back((lo + hi) / 2);
      continue;
    }
    const Rational mid = (lo + hi) / 2;
    todo.push_back({mid, hi});
    todo.push_back({lo, mid});
  }
  return out;
}

bool vanishes_at(const MPoly& f, const RegionPoint& x) {
  if (x.exact()) {
    GaussQ v{0, 0};
    for (const auto& t : f.terms()) {
      GaussQ term{t.coef, 0};
      for (const auto& [id, e] : t.mono.powers())
        for (unsigned k = 0; k < e; ++k) term = term * (*x.exact())[id - 1];
      v = v + term;
    }
    return v.re == 0 && v.im == 0;
  }
  Element v;
  for (const auto& t : f.terms()) {
    Element term = Element::from_rational(t.coef);
    for (const auto& [id, e] : t.mono.powers()) term = term * x.coords()[id - 1].pow(e);
    v = v + term;
  }
  return v.is_zero();
}

}  // namespace

RegionPoly region_poly(MPoly poly, unsigned m, RegionMode mode) {
  for (Var v : poly.variables())
    if (!var::is_tag(v) || v < 1 || v > m)
      throw std::invalid_argument("variable " + var::name(v) + " outside L1..L" + std::to_string(m));
  return {std::move(poly), m, mode};
}

RegionPoint::RegionPoint(std::vector<Element> coords) : coords_(std::move(coords)) {
  std::vector<GaussQ> g;
  for (const auto& c : coords_) {
    if (auto q = c.rational_value()) {
      g.push_back({*q, 0});
      continue;
    }
    if (c.is_real()) return;
    auto [re, im] = c.split_re_im();
    auto qr = re.rational_value(), qi = im.rational_value();
    if (!qr || !qi) return;
    g.push_back({*qr, *qi});
  }
  exact_ = std::move(g);
}

RegionPoint RegionPoint::rational(const std::vector<Rational>& coords) {
  std::vector<GaussQ> g;
  for (const auto& q : coords) g.push_back({q, 0});
  return gaussian(g);
}

RegionPoint RegionPoint::gaussian(const std::vector<GaussQ>& coords) {
  RegionPoint x;
  const Element i = Element::imaginary_unit();
  for (const auto& g : coords) {
    Element c = Element::from_rational(g.re);
    if (g.im != 0) c = c + i * Element::from_rational(g.im);
    x.coords_.push_back(c);
  }
  x.exact_ = coords;
  return x;
}

RegionPoint RegionPoint::symbolic() const {
  RegionPoint x = *this;
  x.exact_.reset();
  return x;
}

RegionPoint RegionPoint::prefix(std::size_t k) const {
  RegionPoint x;
  x.coords_.assign(coords_.begin(), coords_.begin() + static_cast<long>(k));
  if (exact_) x.exact_ = std::vector<GaussQ>(exact_->begin(), exact_->begin() + static_cast<long>(k));
  return x;
}

std::string RegionPoint::str() const {
  std::string out = "(";
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (k > 0) out += ", ";
    out += exact_ ? gauss_text((*exact_)[k]) : "[" + coords_[k].str() + "]";
  }
  return out + ")";
}

RegionPoly omega(const RegionPoly& p) {
  if (p.m == 0) throw std::invalid_argument("omega of a constant region");
  return {p.poly.leading_coefficient(var::tag(p.m)), p.m - 1, p.mode};
}

bool gamma_member(const RegionPoly& p, const RegionPoint& x) {
  check_dim(p, x);
  if (p.m == 0) return p.poly.is_zero();
  if (x.exact()) return gamma_exact(p, *x.exact());
  return gamma_elements(p, x.coords());
}

bool wp_member(const RegionPoly& p, const RegionPoint& x) {
  check_dim(p, x);
  if (p.m == 0) return !p.poly.is_zero();
  if (gamma_member(p, x)) return false;
  if (p.m == 1) return true;
  return wp_member(omega(p), x.prefix(p.m - 1));
}

bool cylinder_member(const MPoly& p, const std::vector<std::uint32_t>& tags,
                     const std::map<std::uint32_t, Element>& assignment, RegionMode mode) {
  for (std::size_t k = 1; k < tags.size(); ++k)
    if (tags[k - 1] >= tags[k]) throw std::invalid_argument("cylinder tags must be increasing");
  MPoly renamed = p;
  std::vector<Element> coords;
  // tags and 1..m may overlap, so rename through the x_k variables
  for (std::size_t k = 0; k < tags.size(); ++k) {
    auto it = assignment.find(tags[k]);
    if (it == assignment.end()) throw std::invalid_argument("no value for tag L" + std::to_string(tags[k]));
    coords.push_back(it->second);
    renamed = renamed.rename(var::tag(tags[k]), var::kDiffBase + static_cast<Var>(k) + 1);
  }
  for (std::size_t k = 0; k < tags.size(); ++k)
    renamed = renamed.rename(var::kDiffBase + static_cast<Var>(k) + 1, var::tag(static_cast<std::uint32_t>(k + 1)));
  return wp_member(region_poly(renamed, static_cast<unsigned>(tags.size()), mode), RegionPoint(coords));
}

std::optional<RegionPoint> search_member(const RegionPoly& p, const Rational& bound) {
  if (p.poly.is_zero()) return std::nullopt;
  if (p.m == 0) return RegionPoint{};
  std::vector<GaussQ> base;
  if (p.m > 1) {
    auto head = search_member(omega(p), Rational(0));
    if (!head) return std::nullopt;
    base = *head->exact();
  }
  Rational t = abs(bound) + 1;
  for (int step = 0; step < 256; ++step, t *= 2) {
    auto coords = base;
    coords.push_back({t, 0});
    RegionPoint x = RegionPoint::gaussian(coords);
    if (wp_member(p, x)) return x;
  }
  return std::nullopt;
}

std::optional<RegionPoint> member_near(const RegionPoly& p, const std::vector<GaussQ>& x, unsigned bits,
                                       std::uint64_t seed, unsigned tries) {
  Draw d(seed);
  const Integer scale = Integer(1) << (bits + 8);
  for (unsigned t = 0; t < tries; ++t) {
    std::vector<GaussQ> y = x;
    for (auto& c : y) {
      // offsets in (-2^-bits, 2^-bits) on a 2^-(bits+8) grid
      auto offset = [&] {
        const long span = 1L << 8;
        Rational q(Integer(static_cast<long>(d.below(2 * span - 1)) - (span - 1)), scale);
        q.canonicalize();
        return q;
      };
      c.re += offset();
      if (p.mode == RegionMode::kComplex) c.im += offset();
    }
    RegionPoint pt = RegionPoint::gaussian(y);
    if (wp_member(p, pt)) return pt;
  }
  return std::nullopt;
}

std::string AxiomLine::str() const {
  std::string out = axiom + (ok ? " OK" : " FAIL");
  if (!ok && !detail.empty() && detail.front() == '(') return out + " at " + detail;
  if (total > 0) out += " " + std::to_string(passed) + "/" + std::to_string(total);
  if (!detail.empty()) out += " " + detail;
  return out;
}

bool AxiomReport::ok() const {
  return std::all_of(lines.begin(), lines.end(), [](const AxiomLine& l) { return l.ok; });
}

std::string AxiomReport::str() const {
  std::string out = "seed " + std::to_string(seed) + " samples " + std::to_string(samples) + "\n";
  for (const auto& l : lines) out += l.str() + "\n";
  return out;
}

std::vector<RegionPoint> sample_points(const RegionPoly& p, std::size_t count, std::uint64_t seed) {
  Draw d(seed);
  std::vector<RegionPoint> out;
  out.reserve(count);
  while (out.size() < count) {
    std::vector<GaussQ> c;
    for (unsigned k = 0; k < p.m; ++k)
      c.push_back({d.small_rational(), p.mode == RegionMode::kComplex ? d.small_rational() : Rational(0)});
    if (p.m > 0 && d.below(4) == 0) {
      // move the last coordinate next to a real root of the fibre
      std::map<Var, Rational> at;
      for (unsigned k = 0; k + 1 < p.m; ++k) at[var::tag(k + 1)] = c[k].re;
      auto u = univariate_image(p.poly, var::tag(p.m), at);
      auto roots = near_real_roots(u);
      if (!roots.empty()) {
        c.back().re = roots[d.below(roots.size())];
        if (p.mode == RegionMode::kComplex) c.back().im = 0;
        for (unsigned k = 0; k + 1 < p.m; ++k) c[k].im = 0;
      }
    }
    out.push_back(RegionPoint::gaussian(c));
  }
  return out;
}

AxiomReport check_R_axioms(const RegionPoly& p, const RegionPoly& q, const AxiomOptions& opt) {
  if (p.m != q.m || p.mode != q.mode) throw std::invalid_argument("R axioms need the same dimension and mode");
  AxiomReport rep;
  rep.seed = opt.seed;
  rep.samples = opt.samples;
  const RegionPoly pq{p.poly * q.poly, p.m, p.mode};
  const auto pts = sample_points(p, opt.samples, opt.seed);

  AxiomLine r0, r1;
  r0.axiom = "R0";
  r1.axiom = "R1";
  for (const auto& x : pts) {
    const bool in_p = wp_member(p, x), in_q = wp_member(q, x);
    auto vanishes = [&](const MPoly& f) { return vanishes_at(f, x); };
    const bool r0_ok = (!in_p || !vanishes(p.poly)) && (!in_q || !vanishes(q.poly));
    ++r0.total;
    if (r0_ok) ++r0.passed;
    else if (r0.ok) r0.ok = false, r0.detail = x.str();
    const bool r1_ok = (in_p && in_q) == wp_member(pq, x);
    ++r1.total;
    if (r1_ok) ++r1.passed;
    else if (r1.ok) r1.ok = false, r1.detail = x.str();
  }
  rep.lines.push_back(r0);
  rep.lines.push_back(r1);

  AxiomLine r2;
  r2.axiom = "R2";
  if (auto found = search_member(p, opt.r2_bound)) r2.detail = "found " + found->str();
  else r2.ok = false, r2.detail = "no member above " + to_string(opt.r2_bound);
  rep.lines.push_back(r2);
  return rep;
}

}  // namespace nashdcf
