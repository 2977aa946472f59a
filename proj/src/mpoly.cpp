#include "nashdcf/mpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace nashdcf {

std::string var::name(Var v) {
  if (is_tag(v)) return "L" + std::to_string(v);
  if (v == kZ) return "Z";
  if (v == kGamma) return "g";
  if (v == kImag) return "i";
  if (is_diff(v)) return "x" + std::to_string(v - kDiffBase);
  if (is_atom(v)) return "@" + std::to_string(v - kAtomBase);
  return "?" + std::to_string(v);
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::of(Var v, std::uint32_t e) {
  Monomial m;
  if (e > 0) m.p_.emplace_back(v, e);
  return m;
}

std::uint32_t Monomial::degree(Var v) const {
  for (const auto& [w, e] : p_)
    if (w == v) return e;
  return 0;
}

std::uint32_t Monomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& pw : p_) d += pw.second;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.p_.reserve(p_.size() + o.p_.size());
  std::size_t i = 0, j = 0;
  while (i < p_.size() && j < o.p_.size()) {
    if (p_[i].first < o.p_[j].first) {
      r.p_.push_back(p_[i++]);
    } else if (p_[i].first > o.p_[j].first) {
      r.p_.push_back(o.p_[j++]);
    } else {
      r.p_.emplace_back(p_[i].first, p_[i].second + o.p_[j].second);
      ++i, ++j;
    }
  }
  for (; i < p_.size(); ++i) r.p_.push_back(p_[i]);
  for (; j < o.p_.size(); ++j) r.p_.push_back(o.p_[j]);
  return r;
}

bool Monomial::divides(const Monomial& m) const {
  std::size_t j = 0;
  for (const auto& [v, e] : p_) {
    while (j < m.p_.size() && m.p_[j].first < v) ++j;
    if (j == m.p_.size() || m.p_[j].first != v || m.p_[j].second < e) return false;
  }
  return true;
}

Monomial Monomial::quotient(const Monomial& m) const {
  Monomial r;
  std::size_t j = 0;
  for (const auto& [v, e] : p_) {
    while (j < m.p_.size() && m.p_[j].first < v) ++j;
    std::uint32_t sub = (j < m.p_.size() && m.p_[j].first == v) ? m.p_[j].second : 0;
    if (e > sub) r.p_.emplace_back(v, e - sub);
  }
  return r;
}

Monomial Monomial::without(Var v) const {
  Monomial r;
  for (const auto& pw : p_)
    if (pw.first != v) r.p_.push_back(pw);
  return r;
}

Monomial Monomial::with(Var v, std::uint32_t e) const {
  Monomial r = without(v);
  if (e == 0) return r;
  auto it = std::lower_bound(r.p_.begin(), r.p_.end(), v,
                             [](const Power& p, Var w) { return p.first < w; });
  r.p_.insert(it, Power{v, e});
  return r;
}

int compare(const Monomial& a, const Monomial& b) {
  auto pa = a.powers();
  auto pb = b.powers();
  std::size_t i = pa.size(), j = pb.size();
  while (i > 0 && j > 0) {
    const auto& x = pa[i - 1];
    const auto& y = pb[j - 1];
    if (x.first != y.first) return x.first > y.first ? 1 : -1;
    if (x.second != y.second) return x.second > y.second ? 1 : -1;
    --i, --j;
  }
  if (i > 0) return 1;
  if (j > 0) return -1;
  return 0;
}

// ---------------------------------------------------------------- MPoly

namespace {

bool term_greater(const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; }

// Merge two sorted term lists, b scaled by sign.
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = compare(a[i].mono, b[j].mono);
    if (c > 0) {
      r.push_back(a[i++]);
    } else if (c < 0) {
      r.push_back(subtract ? Term{b[j].mono, -b[j].coef} : b[j]);
      ++j;
    } else {
      Rational s = subtract ? Rational(a[i].coef - b[j].coef) : Rational(a[i].coef + b[j].coef);
      if (s != 0) r.push_back(Term{a[i].mono, std::move(s)});
      ++i, ++j;
    }
  }
  for (; i < a.size(); ++i) r.push_back(a[i]);
  for (; j < b.size(); ++j) r.push_back(subtract ? Term{b[j].mono, -b[j].coef} : b[j]);
  return r;
}

}  // namespace

MPoly::MPoly(const Rational& c) {
  if (c != 0) t_.push_back(Term{Monomial{}, c});
}

MPoly MPoly::variable(Var v) { return monomial(Monomial::of(v), Rational(1)); }

MPoly MPoly::monomial(Monomial m, Rational c) {
  MPoly p;
  if (c != 0) p.t_.push_back(Term{std::move(m), std::move(c)});
  return p;
}

MPoly MPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  MPoly p;
  p.t_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.t_.empty() && p.t_.back().mono == t.mono) {
      p.t_.back().coef += t.coef;
      if (p.t_.back().coef == 0) p.t_.pop_back();
    } else if (t.coef != 0) {
      p.t_.push_back(std::move(t));
    }
  }
  return p;
}

Rational MPoly::constant_value() const {
  if (!t_.empty() && t_.back().mono.is_one()) return t_.back().coef;
  return Rational(0);
}

std::uint32_t MPoly::degree(Var v) const {
  std::uint32_t d = 0;
  for (const auto& t : t_) d = std::max(d, t.mono.degree(v));
  return d;
}

std::uint32_t MPoly::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& t : t_) d = std::max(d, t.mono.total_degree());
  return d;
}

std::vector<Var> MPoly::variables() const {
  std::vector<Var> vs;
  for (const auto& t : t_)
    for (const auto& pw : t.mono.powers()) vs.push_back(pw.first);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

bool MPoly::contains(Var v) const {
  for (const auto& t : t_)
    if (t.mono.degree(v) > 0) return true;
  return false;
}

bool MPoly::has_var_where(bool (*pred)(Var)) const {
  for (const auto& t : t_)
    for (const auto& pw : t.mono.powers())
      if (pred(pw.first)) return true;
  return false;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.t_) t.coef = -t.coef;
  return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  t_ = merge(t_, o.t_, false);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  if (o.is_zero()) return *this;
  t_ = merge(t_, o.t_, true);
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  if (a.is_zero() || b.is_zero()) return MPoly{};
  if (a.size() == 1 && a.t_[0].mono.is_one()) return b.scaled(a.t_[0].coef);
  if (b.size() == 1 && b.t_[0].mono.is_one()) return a.scaled(b.t_[0].coef);
  if (b.size() == 1) return a.times_monomial(b.t_[0].mono).scaled(b.t_[0].coef);
  if (a.size() == 1) return b.times_monomial(a.t_[0].mono).scaled(a.t_[0].coef);
  std::vector<Term> prod;
  prod.reserve(a.size() * b.size());
  for (const auto& x : a.t_)
    for (const auto& y : b.t_) prod.push_back(Term{x.mono * y.mono, x.coef * y.coef});
  return MPoly::from_terms(std::move(prod));
}

MPoly& MPoly::operator*=(const MPoly& o) { return *this = *this * o; }

MPoly MPoly::scaled(const Rational& c) const {
  if (c == 0) return MPoly{};
  MPoly r = *this;
  if (c == 1) return r;
  for (auto& t : r.t_) t.coef *= c;
  return r;
}

MPoly MPoly::times_monomial(const Monomial& m) const {
  MPoly r = *this;
  if (m.is_one()) return r;
  for (auto& t : r.t_) t.mono = t.mono * m;  // order preserved by multiplicativity
  return r;
}

MPoly MPoly::pow(unsigned e) const {
  MPoly result(1), base = *this;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.t_.size() != b.t_.size()) return false;
  for (std::size_t i = 0; i < a.t_.size(); ++i)
    if (!(a.t_[i].mono == b.t_[i].mono) || a.t_[i].coef != b.t_[i].coef) return false;
  return true;
}

std::vector<MPoly> MPoly::coefficients(Var v) const {
  std::vector<MPoly> c;
  if (t_.empty()) return c;
  c.resize(degree(v) + 1);
  for (const auto& t : t_) c[t.mono.degree(v)].t_.push_back(Term{t.mono.without(v), t.coef});
  return c;
}

MPoly MPoly::from_coefficients(Var v, const std::vector<MPoly>& coeffs) {
  std::vector<Term> all;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    for (const auto& t : coeffs[k].t_)
      all.push_back(Term{k == 0 ? t.mono : t.mono.with(v, static_cast<std::uint32_t>(k)), t.coef});
  return from_terms(std::move(all));
}

MPoly MPoly::leading_coefficient(Var v) const {
  if (t_.empty()) return MPoly{};
  std::uint32_t d = degree(v);
  MPoly r;
  for (const auto& t : t_)
    if (t.mono.degree(v) == d) r.t_.push_back(Term{t.mono.without(v), t.coef});
  return r;
}

MPoly MPoly::derivative(Var v) const {
  std::vector<Term> r;
  for (const auto& t : t_) {
    std::uint32_t e = t.mono.degree(v);
    if (e == 0) continue;
    r.push_back(Term{t.mono.with(v, e - 1), t.coef * e});
  }
  return from_terms(std::move(r));
}

MPoly MPoly::substitute(Var v, const MPoly& value) const {
  if (!contains(v)) return *this;
  auto c = coefficients(v);
  MPoly r = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) r = r * value + c[k];
  return r;
}

MPoly MPoly::evaluate(Var v, const Rational& value) const {
  if (!contains(v)) return *this;
  std::vector<Term> r;
  r.reserve(t_.size());
  for (const auto& t : t_) {
    std::uint32_t e = t.mono.degree(v);
    if (e == 0) {
      r.push_back(t);
      continue;
    }
    Rational pw;
    mpz_pow_ui(pw.get_num_mpz_t(), value.get_num_mpz_t(), e);
    mpz_pow_ui(pw.get_den_mpz_t(), value.get_den_mpz_t(), e);
    r.push_back(Term{t.mono.without(v), t.coef * pw});
  }
  return from_terms(std::move(r));
}

MPoly MPoly::rename(Var from, Var to) const {
  if (!contains(from)) return *this;
  std::vector<Term> r;
  r.reserve(t_.size());
  for (const auto& t : t_) {
    std::uint32_t e = t.mono.degree(from);
    if (e == 0) {
      r.push_back(t);
      continue;
    }
    r.push_back(Term{t.mono.without(from) * Monomial::of(to, e), t.coef});
  }
  return from_terms(std::move(r));
}

Rational MPoly::unit_content() const {
  if (t_.empty()) return Rational(1);
  Integer g = 0, l = 1;
  for (const auto& t : t_) {
    g = gcd(g, t.coef.get_num());
    l = lcm(l, t.coef.get_den());
  }
  Rational c(g, l);
  c.canonicalize();
  return c;
}

MPoly MPoly::normalized() const {
  if (t_.empty()) return *this;
  Rational c = unit_content();
  if (t_.front().coef < 0) c = -c;
  if (c == 1) return *this;
  Rational inv = 1 / c;
  return scaled(inv);
}

// ---------------------------------------------------------------- division

std::optional<MPoly> divide_exact(const MPoly& a, const MPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (a.is_zero()) return MPoly{};
  if (b.is_constant()) return a.scaled(1 / b.constant_value());
  const Term& lb = b.leading();
  std::vector<Term> q;
  MPoly r = a;
  while (!r.is_zero()) {
    const Term& lr = r.leading();
    if (!lb.mono.divides(lr.mono)) return std::nullopt;
    Term t{lr.mono.quotient(lb.mono), lr.coef / lb.coef};
    r -= b.times_monomial(t.mono).scaled(t.coef);
    q.push_back(std::move(t));
  }
  // quotient terms were produced in decreasing order
  MPoly out = MPoly::from_terms(std::move(q));
  return out;
}

MPoly divexact(const MPoly& a, const MPoly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw std::domain_error("inexact polynomial division");
  return *std::move(q);
}

// ---------------------------------------------------------------- text

std::string to_string(const MPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational mag = abs(t.coef);
    if (first) {
      if (t.coef < 0) s += "-";
    } else {
      s += t.coef < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (const auto& [v, e] : t.mono.powers()) {
      if (!mono.empty()) mono += "*";
      mono += var::name(v);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      s += to_string(mag);
    } else if (mag == 1) {
      s += mono;
    } else {
      s += to_string(mag) + "*" + mono;
    }
  }
  return s;
}

}  // namespace nashdcf
