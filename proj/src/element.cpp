#include "nashdcf/element.hpp"

#include <algorithm>
#include <atomic>
#include <climits>

#include "nashdcf/anchor.hpp"
#include "nashdcf/polyalg.hpp"
#include "nashdcf/roots.hpp"

namespace nashdcf {

namespace {

std::atomic<unsigned> g_budget{64};
std::atomic<std::uint64_t> g_next_id{1};
std::atomic<Var> g_next_atom_var{var::kAtomBase};

constexpr Var kI = var::kImag;


/// Replaces I^k by (-1)^(k/2) I^(k mod 2).
MPoly reduce_imag(const MPoly& p) {
  if (!p.contains(kI)) return p;
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    const std::uint32_t e = t.mono.degree(kI);
    Monomial m = t.mono.with(kI, e % 2);
    out.push_back({m, (e / 2) % 2 == 1 ? Rational(-t.coef) : t.coef});
  }
  return MPoly::from_terms(std::move(out));
}

bool has_atom_var(const MPoly& p) { return p.has_var_where(&var::is_atom); }

bool only_tags(const MPoly& p) {
  for (Var v : p.variables())
    if (!var::is_tag(v)) return false;
  return true;
}

bool by_var(const AtomPtr& a, const AtomPtr& b) { return a->var() < b->var(); }

std::vector<AtomPtr> merge(const std::vector<AtomPtr>& a, const std::vector<AtomPtr>& b) {
  std::vector<AtomPtr> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), by_var);
  out.erase(std::unique(out.begin(), out.end(), [](const AtomPtr& x, const AtomPtr& y) { return x->var() == y->var(); }),
            out.end());
  return out;
}

/// atoms plus everything their towers depend on, sorted by variable.
std::vector<AtomPtr> closure(const std::vector<AtomPtr>& atoms) {
  std::vector<AtomPtr> out = atoms;
  std::vector<AtomPtr> todo = atoms;
  while (!todo.empty()) {
    AtomPtr a = todo.back();
    todo.pop_back();
    for (const auto& d : a->dependencies()) {
      bool seen = false;
      for (const auto& o : out) seen = seen || o->var() == d->var();
      if (!seen) {
        out.push_back(d);
        todo.push_back(d);
      }
    }
  }
  std::sort(out.begin(), out.end(), by_var);
  return out;
}

const AtomPtr& lookup(const std::vector<AtomPtr>& pool, Var v) {
  auto it = std::lower_bound(pool.begin(), pool.end(), v, [](const AtomPtr& a, Var x) { return a->var() < x; });
  if (it == pool.end() || (*it)->var() != v) throw std::logic_error("unknown atom variable " + var::name(v));
  return *it;
}

std::vector<AtomPtr> used_atoms(const MPoly& p, const std::vector<AtomPtr>& pool) {
  std::vector<AtomPtr> out;
  for (const auto& a : pool)
    if (p.contains(a->var())) out.push_back(a);
  return out;
}

std::optional<Var> top_atom_var(const MPoly& p) {
  auto vs = p.variables();
  if (vs.empty() || !var::is_atom(vs.back())) return std::nullopt;
  return vs.back();
}

MPoly lcm(const MPoly& a, const MPoly& b) {
  if (a.is_constant()) return b;
  if (b.is_constant()) return a;
  MPoly g = gcd(a, b);
  return divexact(a * b, g).normalized();
}

/// Iterated resultants removing every atom variable and I from f. The
/// degree in `keep` is checked against the budget before each step.
MPoly eliminate(MPoly f, const std::vector<AtomPtr>& atoms, std::optional<Var> keep) {
  const std::vector<AtomPtr> pool = closure(atoms);
  f = reduce_imag(f);
  auto check = [&](std::uint32_t factor) {
    if (keep && static_cast<unsigned long>(f.degree(*keep)) * factor > g_budget.load()) throw DegreeBudgetExhausted();
  };
  auto next = [&]() -> std::optional<Var> {
    auto vs = f.variables();
    for (auto it = vs.rbegin(); it != vs.rend() && var::is_atom(*it); ++it)
      if (*it != keep) return *it;
    return std::nullopt;
  };
  while (auto v = next()) {
    const AtomPtr& atom = lookup(pool, *v);
    MPoly a = atom->defining();
    check(a.degree(*v));
    f = resultant(a, f, *v).normalized();
  }
  if (f.contains(kI)) {
    check(2);
    f = resultant(MPoly::variable(kI).pow(2) + MPoly(1), f, kI).normalized();
  }
  return f;
}

ComplexBox imag_box() { return ComplexBox(Interval(), Interval::point(Dyadic(1))); }

}  // namespace

void set_degree_budget(unsigned degree) { g_budget.store(degree); }
unsigned degree_budget() { return g_budget.load(); }

// ====================================================================== Rep

struct Element::Rep {
  MPoly num, den;
  std::vector<AtomPtr> atoms;
  bool real = true;
  std::uint64_t id = g_next_id.fetch_add(1);

  mutable std::mutex mu;
  mutable std::optional<bool> zero;
  mutable std::optional<ComplexBox> best;
  mutable std::optional<MPoly> defining;
  mutable std::optional<std::set<std::uint32_t>> support;
};

Element::Element() : Element(make(MPoly(), MPoly(1), {}, true)) {}

Element Element::make(MPoly num, MPoly den, std::vector<AtomPtr> atoms, bool real) {
  auto rep = std::make_shared<Rep>();
  num = reduce_imag(num);
  if (num.is_zero()) {
    rep->num = MPoly();
    rep->den = MPoly(1);
    rep->real = true;
    return Element(rep);
  }
  std::vector<AtomPtr> pool = atoms;
  if (has_atom_var(num)) {
    pool = closure(atoms);
    // Normal form: pseudo-reduce by every tower whose leading coefficient is
    // free of atoms, newest atom first, moving the lc powers into den.
    for (auto it = pool.rbegin(); it != pool.rend(); ++it) {
      const Atom& a = **it;
      const Var v = a.var();
      if (!a.reduces() || num.degree(v) < a.tower().degree(v)) continue;
      const unsigned e = num.degree(v) - a.tower().degree(v) + 1;
      num = reduce_imag(pseudo_remainder(num, a.tower(), v));
      den = den * a.tower().leading_coefficient(v).pow(e);
    }
    if (num.is_zero()) return make(MPoly(), MPoly(1), {}, true);
  }
  rep->atoms = used_atoms(num, pool);
  if (!den.is_constant()) {
    MPoly g = gcd(num, den);
    if (!g.is_constant()) {
      num = divexact(num, g);
      den = divexact(den, g);
    }
  }
  // den becomes integral, primitive, positive leading coefficient
  MPoly nd = den.normalized();
  Rational f = den.leading().coef / nd.leading().coef;
  rep->num = f == 1 ? std::move(num) : num.scaled(1 / f);
  rep->den = std::move(nd);
  rep->real = real;
  return Element(rep);
}

Element Element::from_rational(const Rational& q) { return make(MPoly(q), MPoly(1), {}, true); }

Element Element::from_tag(std::uint32_t tag) { return make(MPoly::variable(var::tag(tag)), MPoly(1), {}, true); }

Element Element::imaginary_unit() { return make(MPoly::variable(kI), MPoly(1), {}, false); }

Element Element::from_presentation(MPoly num, MPoly den, const std::vector<AtomPtr>& atoms, bool real) {
  if (den.is_zero()) throw std::domain_error("zero divisor");
  if (!only_tags(den)) throw std::invalid_argument("denominator must be a polynomial in tags");
  std::vector<AtomPtr> sorted = atoms;
  std::sort(sorted.begin(), sorted.end(), by_var);
  return make(std::move(num), std::move(den), std::move(sorted), real);
}

Element Element::from_atom(const AtomPtr& atom) {
  return make(MPoly::variable(atom->var()), MPoly(1), {atom}, atom->real());
}

const MPoly& Element::numerator() const { return rep_->num; }
const MPoly& Element::denominator() const { return rep_->den; }
const std::vector<AtomPtr>& Element::atoms() const { return rep_->atoms; }
bool Element::is_real() const { return rep_->real; }
std::uint64_t Element::id() const { return rep_->id; }

bool Element::is_rational_function() const { return rep_->atoms.empty() && !rep_->num.contains(kI); }

std::optional<Rational> Element::rational_value() const {
  if (rep_->num.is_constant() && rep_->den.is_constant()) return rep_->num.constant_value() / rep_->den.constant_value();
  return std::nullopt;
}

std::set<std::uint32_t> Element::support() const {
  std::lock_guard lock(rep_->mu);
  if (!rep_->support) {
    std::set<std::uint32_t> s;
    for (const MPoly* p : {&rep_->num, &rep_->den})
      for (Var v : p->variables())
        if (var::is_tag(v)) s.insert(v);
    for (const auto& a : rep_->atoms) {
      auto as = a->support();
      s.insert(as.begin(), as.end());
    }
    rep_->support = std::move(s);
  }
  return *rep_->support;
}

// ====================================================================== arithmetic

Element Element::operator-() const {
  if (rep_->num.is_zero()) return *this;
  auto rep = std::make_shared<Rep>();
  rep->num = -rep_->num;
  rep->den = rep_->den;
  rep->atoms = rep_->atoms;
  rep->real = rep_->real;
  return Element(rep);
}

Element operator+(const Element& a, const Element& b) {
  if (a.rep_->num.is_zero()) return b;
  if (b.rep_->num.is_zero()) return a;
  const bool real = a.is_real() && b.is_real();
  if (a.rep_->den == b.rep_->den)
    return Element::make(a.rep_->num + b.rep_->num, a.rep_->den, merge(a.atoms(), b.atoms()), real);
  return Element::make(a.rep_->num * b.rep_->den + b.rep_->num * a.rep_->den, a.rep_->den * b.rep_->den,
                       merge(a.atoms(), b.atoms()), real);
}

Element operator-(const Element& a, const Element& b) { return a + (-b); }

Element operator*(const Element& a, const Element& b) {
  if (a.rep_->num.is_zero()) return a;
  if (b.rep_->num.is_zero()) return b;
  return Element::make(a.rep_->num * b.rep_->num, a.rep_->den * b.rep_->den, merge(a.atoms(), b.atoms()),
                       a.is_real() && b.is_real());
}

Element operator/(const Element& a, const Element& b) { return a * b.inverse(); }

Element Element::pow(unsigned e) const {
  Element r = from_rational(1), b = *this;
  while (e > 0) {
    if (e & 1u) r = r * b;
    e >>= 1u;
    if (e > 0) b = b * b;
  }
  return r;
}

/// 1 / num at the anchor, num nonzero there. Peels atoms from the newest:
/// with t * num = r (mod tower) and r free of the atom, 1/num = t / r as
/// long as r does not vanish; otherwise a fresh inverse atom is adjoined.
Element invert_numerator(const MPoly& num, const std::vector<AtomPtr>& atoms, bool real) {
  if (!has_atom_var(num)) {
    if (!num.contains(kI)) return Element::make(MPoly(1), num, {}, real);
    MPoly a = num.evaluate(kI, 0);
    MPoly b = divexact(num - a, MPoly::variable(kI));
    return Element::make(a - b * MPoly::variable(kI), a * a + b * b, {}, real);
  }
  const std::vector<AtomPtr> pool = closure(atoms);
  const Var v = *top_atom_var(num);
  const AtomPtr& atom = lookup(pool, v);
  if (auto ic = inverse_cofactor(atom->tower(), num, v)) {
    Element r = Element::make(ic->residue, MPoly(1), pool, real);
    if (!r.is_zero()) {
      Element t = Element::make(ic->cofactor, MPoly(1), pool, real);
      Element den = Element::make(r.denominator(), MPoly(1), {}, true);
      return t * den * invert_numerator(r.numerator(), r.atoms(), real);
    }
  }
  Element a = Element::make(num, MPoly(1), atoms, real);
  return Element::from_atom(Atom::make_inverse(a));
}

Element Element::inverse() const {
  if (is_zero()) throw std::domain_error("zero divisor");
  Element inv = invert_numerator(rep_->num, rep_->atoms, rep_->real);
  if (rep_->den == MPoly(1)) return inv;
  return inv * make(rep_->den, MPoly(1), {}, true);
}

// ====================================================================== evaluation

ComplexBox Element::evaluate(long precision) const {
  const Rep& r = *rep_;
  if (r.num.is_zero()) return ComplexBox();
  for (long p = std::max(precision, 8L);; p *= 2) {
    const long bits = p + 16;
    std::map<Var, Interval> tags;
    for (Var v : r.den.variables()) tags.emplace(v, anchor::coordinate(v, p));
    Interval d = r.den.is_constant() ? Interval::around(r.den.constant_value(), bits) : interval_eval(r.den, tags, bits);
    if (d.contains_zero()) continue;  // den is a nonzero polynomial, so it is nonzero at the anchor
    std::map<Var, ComplexBox> asg;
    for (Var v : r.num.variables()) {
      if (var::is_tag(v)) asg.emplace(v, ComplexBox(anchor::coordinate(v, p)));
      else if (v == kI) asg.emplace(v, imag_box());
      else asg.emplace(v, lookup(r.atoms, v)->box(p));
    }
    ComplexBox n = interval_eval(r.num, asg, bits);
    ComplexBox out = (n * ComplexBox(d.inverse(bits))).rounded(bits);
    if (r.real) out = ComplexBox(out.re());
    return out;
  }
}

ComplexBox Element::enclosure(long bits) const {
  const Dyadic target(1, -bits);
  {
    std::lock_guard lock(rep_->mu);
    if (rep_->best && rep_->best->width() <= target) return *rep_->best;
  }
  for (long p = bits + 8;; p *= 2) {
    ComplexBox b = evaluate(p);
    if (b.width() <= target) {
      std::lock_guard lock(rep_->mu);
      if (!rep_->best || b.width() < rep_->best->width()) rep_->best = b;
      return b;
    }
  }
}

bool Element::is_zero() const {
  const Rep& r = *rep_;
  if (r.num.is_zero()) return true;
  // N lies in Q[tags][I] / (I^2 + 1): its value vanishes only if N does.
  if (r.atoms.empty()) return false;
  {
    std::lock_guard lock(r.mu);
    if (r.zero) return *r.zero;
  }
  auto decide = [&]() -> bool {
    for (long p : {32L, 96L})
      if (!evaluate(p).contains_zero()) return false;
    // Pseudo-reduction by the atoms' own relations. A zero remainder proves
    // the value is zero because every leading coefficient used is nonzero at
    // the anchor.
    const std::vector<AtomPtr> pool = closure(r.atoms);
    MPoly red = r.num;
    for (auto it = pool.rbegin(); it != pool.rend(); ++it) {
      const Var v = (*it)->var();
      if (red.contains(v)) red = reduce_imag(pseudo_remainder(red, (*it)->tower(), v));
    }
    if (red.is_zero()) return true;
    if (!has_atom_var(red)) return false;
    // Full decision. E(Z) = elim(Z*den - num) vanishes at the value. If
    // E(tags, 0) is a nonzero polynomial the value is not zero. Otherwise
    // E = Z^k B with B(tags, 0) a nonzero polynomial in Q[tags]; the anchor
    // coordinates are algebraically independent over Q, so B(x0, 0) != 0 and
    // no root of E other than 0 is 0. Refining an enclosure J of the value
    // therefore ends either with 0 outside J (nonzero) or with 0 outside
    // B(x0, J) (the value is the root 0 of Z^k).
    const Var Z = var::kZ;
    MPoly e = eliminate(MPoly::variable(Z) * r.den - r.num, r.atoms, Z);
    if (!e.evaluate(Z, 0).is_zero()) return false;
    MPoly b = e;
    while (b.evaluate(Z, 0).is_zero()) b = divexact(b, MPoly::variable(Z));
    for (long p = 64;; p *= 2) {
      ComplexBox j = evaluate(p);
      if (!j.contains_zero()) return false;
      std::map<Var, ComplexBox> asg;
      for (Var v : b.variables())
        asg.emplace(v, v == Z ? j : ComplexBox(anchor::coordinate(v, p)));
      if (!interval_eval(b, asg, p + 16).contains_zero()) return true;
    }
  };
  bool z = decide();
  std::lock_guard lock(r.mu);
  r.zero = z;
  return z;
}

int Element::sign() const {
  if (!rep_->real) throw std::domain_error("sign undefined on nonreal element");
  const Rep& r = *rep_;
  if (r.num.is_zero()) return 0;
  if (is_rational_function()) return anchor::sign(r.num) * anchor::sign(r.den);
  for (long p : {32L, 64L, 128L}) {
    int s = evaluate(p).re().sign();
    if (s != 0) return s;
  }
  if (is_zero()) return 0;
  // nonzero, so the enclosures eventually leave 0
  for (long p = 256;; p *= 2) {
    int s = evaluate(p).re().sign();
    if (s != 0) return s;
  }
}

MPoly Element::defining_polynomial() const {
  std::lock_guard lock(rep_->mu);
  if (!rep_->defining) {
    const Var Z = var::kZ;
    MPoly f = MPoly::variable(Z) * rep_->den - rep_->num;
    if (is_rational_function()) rep_->defining = f.normalized();
    else rep_->defining = squarefree_part(eliminate(f, rep_->atoms, Z), Z);
  }
  return *rep_->defining;
}

ComplexBox Element::isolating_box(long bits) const {
  const MPoly e = defining_polynomial();
  const Var Z = var::kZ;
  const std::vector<MPoly> coeffs = e.coefficients(Z);
  CoeffFn fn = [&coeffs](long p) {
    std::vector<ComplexBox> out;
    for (const auto& c : coeffs) out.emplace_back(anchor::eval(c, p));
    return out;
  };
  if (coeffs.size() == 2) {
    // linear: the enclosure itself isolates
    return enclosure(bits);
  }
  for (long p = 32;; p *= 2) {
    ComplexBox j = enclosure(p);
    const Dyadic pad(1, -p);
    ComplexBox x = rep_->real ? ComplexBox(j.re().inflate(pad)) : j.inflate(pad);
    std::vector<ComplexBox> c = fn(p + 32);
    if (rep_->real)
      for (auto& b : c) b = ComplexBox(b.re());
    bool certified = false;
    krawczyk(c, x, p + 32, certified);
    if (certified) return refine_root(fn, x, bits);
  }
}

// ====================================================================== conjugation, derivatives

Element Element::conjugate() const {
  if (rep_->real) return *this;
  MPoly num = rep_->num;
  if (num.contains(kI)) num = num.substitute(kI, -MPoly::variable(kI));
  std::vector<AtomPtr> atoms;
  for (const auto& a : rep_->atoms) {
    AtomPtr c = a->conjugate();
    if (c->var() != a->var()) num = num.rename(a->var(), c->var());
    atoms.push_back(c);
  }
  std::sort(atoms.begin(), atoms.end(), by_var);
  return make(std::move(num), rep_->den, std::move(atoms), false);
}

std::pair<Element, Element> Element::split_re_im() const {
  if (rep_->real) return {*this, Element()};
  Element c = conjugate();
  Element re = (*this + c) * from_rational(Rational(1, 2));
  Element im = (*this - c) * make(MPoly::variable(kI).scaled(Rational(-1, 2)), MPoly(1), {}, false);
  auto as_real = [](const Element& x) { return make(x.numerator(), x.denominator(), x.atoms(), true); };
  return {as_real(re), as_real(im)};
}

Element Element::partial_derivative(std::uint32_t tag) const {
  if (!support().count(tag)) return Element();
  const Rep& r = *rep_;
  const Var t = var::tag(tag);
  const bool real = r.real;
  Element dn = make(r.num.derivative(t), MPoly(1), r.atoms, real);
  for (const auto& a : r.atoms) {
    MPoly partial = r.num.derivative(a->var());
    if (partial.is_zero()) continue;
    dn = dn + make(partial, MPoly(1), r.atoms, real) * a->derivative(tag);
  }
  if (r.den.is_constant()) return dn * make(MPoly(1), r.den, {}, true);
  // (N' D - N D') / D^2
  Element n = make(r.num, MPoly(1), r.atoms, real);
  Element d = make(r.den, MPoly(1), {}, true);
  Element dd = make(r.den.derivative(t), MPoly(1), {}, true);
  return (dn * d - n * dd) * make(MPoly(1), r.den * r.den, {}, true);
}

std::string Element::str() const {
  std::string s = to_string(rep_->num);
  if (!(rep_->den == MPoly(1))) s = "(" + s + ") / (" + to_string(rep_->den) + ")";
  return s;
}

// ====================================================================== Atom

Atom::Atom(Kind kind, std::vector<Element> relation, ComplexBox box, bool real)
    : kind_(kind), var_(g_next_atom_var.fetch_add(1)), real_(real), relation_(std::move(relation)), box_(std::move(box)) {}

void Atom::init_tower() {
  MPoly l(1);
  std::vector<AtomPtr> pool;
  for (const auto& c : relation_) {
    l = lcm(l, c.denominator());
    pool = merge(pool, c.atoms());
  }
  MPoly t;
  for (std::size_t j = 0; j < relation_.size(); ++j) {
    const Element& c = relation_[j];
    if (c.numerator().is_zero()) continue;
    MPoly scale = c.denominator() == l ? MPoly(1) : divexact(l, c.denominator());
    t += (c.numerator() * scale).times_monomial(Monomial::of(var_, static_cast<std::uint32_t>(j)));
  }
  t = reduce_imag(t);
  MPoly k = content(t, var_);
  if (!k.is_constant()) t = divexact(t, k);
  tower_ = t.normalized();
  deps_ = used_atoms(tower_, closure(pool));
  reduces_ = only_tags(tower_.leading_coefficient(var_));
  unsigned long bound = tower_.degree(var_);
  for (const auto& d : deps_) bound *= d->degree_bound();
  if (tower_.contains(kI)) bound *= 2;
  degree_bound_ = static_cast<unsigned>(std::min<unsigned long>(bound, UINT_MAX));
}

AtomPtr Atom::make_root(std::vector<Element> relation, ComplexBox box, bool real) {
  AtomPtr a(new Atom(Kind::kRoot, std::move(relation), std::move(box), real));
  a->self_ = a;
  a->init_tower();
  if (a->degree_bound_ > g_budget.load()) throw DegreeBudgetExhausted();
  return a;
}

AtomPtr Atom::make_inverse(const Element& x) {
  // relation x * Z - 1; the box starts from 1 / enclosure(x) and is certified
  // by Krawczyk before the atom is handed out
  std::vector<Element> rel{Element::from_rational(-1), x};
  CoeffFn fn = [&rel](long p) {
    std::vector<ComplexBox> out;
    for (const auto& c : rel) out.push_back(c.enclosure(p));
    return out;
  };
  ComplexBox box;
  for (long p = 32;; p *= 2) {
    ComplexBox j = x.enclosure(p);
    if (j.contains_zero()) continue;
    ComplexBox inv = j.inverse(p + 16);
    const Dyadic pad = inv.width() + Dyadic(1, -p);
    ComplexBox cand = x.is_real() ? ComplexBox(inv.re().inflate(pad)) : inv.inflate(pad);
    std::vector<ComplexBox> c = fn(p + 16);
    if (x.is_real())
      for (auto& b : c) b = ComplexBox(b.re());
    bool certified = false;
    krawczyk(c, cand, p + 16, certified);
    if (certified) {
      box = cand;
      break;
    }
  }
  AtomPtr a(new Atom(Kind::kInverse, std::move(rel), std::move(box), x.is_real()));
  a->self_ = a;
  a->init_tower();
  if (a->degree_bound_ > g_budget.load()) throw DegreeBudgetExhausted();
  return a;
}

ComplexBox Atom::box(long bits) const {
  const Dyadic target(1, -bits);
  ComplexBox current;
  {
    std::lock_guard lock(mu_);
    if (box_.width() <= target) return box_;
    current = box_;
  }
  CoeffFn fn = [this](long p) {
    std::vector<ComplexBox> out;
    for (const auto& c : relation_) out.push_back(c.enclosure(p));
    return out;
  };
  ComplexBox refined = refine_root(fn, current, bits);
  std::lock_guard lock(mu_);
  if (refined.width() < box_.width()) box_ = refined;
  return box_;
}

MPoly Atom::defining() const {
  {
    std::lock_guard lock(mu_);
    if (defining_) return *defining_;
  }
  MPoly f = eliminate(tower_, closure(deps_), var_);
  MPoly a = squarefree_part(f, var_);
  std::lock_guard lock(mu_);
  defining_ = a;
  return a;
}

std::set<std::uint32_t> Atom::support() const {
  {
    std::lock_guard lock(mu_);
    if (support_) return *support_;
  }
  std::set<std::uint32_t> s;
  for (const auto& c : relation_) {
    auto cs = c.support();
    s.insert(cs.begin(), cs.end());
  }
  std::lock_guard lock(mu_);
  support_ = s;
  return s;
}

Element Atom::derivative(std::uint32_t tag) const {
  {
    std::lock_guard lock(mu_);
    auto it = derivatives_.find(tag);
    if (it != derivatives_.end()) return it->second;
  }
  Element result;
  if (support().count(tag)) {
    AtomPtr self = self_.lock();
    std::vector<AtomPtr> pool = merge(deps_, {self});
    // implicit differentiation of tower(deps, root) = 0
    Element numer = Element::make(tower_.derivative(var::tag(tag)), MPoly(1), pool, real_);
    for (const auto& d : deps_) {
      MPoly partial = tower_.derivative(d->var());
      if (partial.is_zero()) continue;
      numer = numer + Element::make(partial, MPoly(1), pool, real_) * d->derivative(tag);
    }
    std::optional<Element> slope;
    {
      std::lock_guard lock(mu_);
      slope = slope_inverse_;
    }
    if (!slope) {
      if (kind_ == Kind::kInverse) {
        // tower = N * root - D, so 1 / N = root / D
        const Element& x = relation_[1];
        slope = Element::from_atom(self) * Element::make(MPoly(1), x.denominator(), {}, true);
      } else {
        // the root is simple, so the slope is nonzero at the anchor
        slope = Element::make(tower_.derivative(var_), MPoly(1), pool, real_).inverse();
      }
      std::lock_guard lock(mu_);
      slope_inverse_ = slope;
    }
    result = -(numer * *slope);
  }
  std::lock_guard lock(mu_);
  derivatives_.emplace(tag, result);
  return result;
}

AtomPtr Atom::conjugate() const {
  AtomPtr self = self_.lock();
  if (real_) return self;
  {
    std::lock_guard lock(mu_);
    if (auto c = conjugate_.lock()) return c;
  }
  std::vector<Element> rel;
  for (const auto& c : relation_) rel.push_back(c.conjugate());
  ComplexBox b;
  {
    std::lock_guard lock(mu_);
    b = box_.conj();
  }
  AtomPtr c(new Atom(Kind::kConjugate, std::move(rel), b, false));
  c->self_ = c;
  c->init_tower();
  c->conjugate_ = self;
  std::lock_guard lock(mu_);
  if (auto existing = conjugate_.lock()) return existing;
  conjugate_ = c;
  return c;
}

}  // namespace nashdcf
