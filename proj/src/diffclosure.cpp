#include "nashdcf/diffclosure.hpp"

#include <algorithm>

namespace nashdcf {

namespace {

using EPoly = std::vector<Element>;  // polynomial in one variable, lowest first

Element q(const Rational& r) { return Element::from_rational(r); }

void trim(EPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

EPoly mul(const EPoly& a, const EPoly& b) {
  if (a.empty() || b.empty()) return {};
  EPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

void add_into(EPoly& a, const EPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] + b[i];
}

Element horner(const EPoly& p, const Element& x) {
  Element acc;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

/// floor(log2 |r|) up to one, r != 0.
long log2_estimate(const Rational& r) {
  return static_cast<long>(mpz_sizeinbase(r.get_num_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(r.get_den_mpz_t(), 2));
}

/// r rounded to about `bits` significant bits.
Rational round_relative(const Rational& r, long bits) {
  if (r == 0) return r;
  return Dyadic::floor(r, bits - log2_estimate(r)).to_rational();
}

/// The first root, walking up from lo to hi, at which `value` changes sign.
/// `roots` are all distinct real roots of value's polynomial, increasing, and
/// value(lo), value(hi) have opposite signs.
Element sign_change_root(const std::vector<Element>& roots, const Element& lo, const Element& hi,
                         const std::function<Element(const Element&)>& value) {
  std::vector<Element> inside;
  for (const auto& r : roots)
    if ((r - lo).sign() > 0 && (hi - r).sign() > 0) inside.push_back(r);
  int prev = value(lo).sign();
  for (std::size_t j = 0; j < inside.size(); ++j) {
    // points strictly between consecutive roots are not roots
    Element next = j + 1 < inside.size() ? (inside[j] + inside[j + 1]) * q(Rational(1, 2)) : hi;
    const int s = value(next).sign();
    if (s != prev) return inside[j];
    prev = s;
  }
  throw std::logic_error("sign change without a root");
}

}  // namespace

std::string to_string(WitnessRecord::Kind k) {
  switch (k) {
    case WitnessRecord::Kind::kBlum: return "blum";
    case WitnessRecord::Kind::kOrdered: return "ordered";
    case WitnessRecord::Kind::kAdjoin: return "adjoin";
    case WitnessRecord::Kind::kDistinct: return "distinct";
    case WitnessRecord::Kind::kRootBetween: return "root_between";
  }
  return "?";
}

Element Engine::fresh_var() { return Element::from_tag(tags_.fresh_tags(1).front()); }

Element Engine::pin_of(std::uint32_t tag) {
  std::lock_guard lock(mu_);
  return pins_.try_emplace(tag).first->second;
}

void Engine::pin(std::uint32_t tag, const Element& value) {
  std::lock_guard lock(mu_);
  if (!pins_.emplace(tag, value).second) throw std::logic_error("tag L" + std::to_string(tag) + " is already pinned");
}

std::map<std::uint32_t, Element> Engine::pins() const {
  std::lock_guard lock(mu_);
  return pins_;
}

Element Engine::apply_delta(const Element& a) {
  Element sum;
  for (std::uint32_t t : a.support()) {
    Element g = pin_of(t);
    if (g.numerator().is_zero()) continue;
    sum = sum + g * a.partial_derivative(t);
  }
  return sum;
}

Element Engine::delta_power(const Element& a, unsigned k) {
  if (k == 0) return a;
  {
    std::lock_guard lock(mu_);
    auto it = delta_cache_.find({a.id(), k});
    if (it != delta_cache_.end()) return it->second;
  }
  Element d = apply_delta(delta_power(a, k - 1));
  std::lock_guard lock(mu_);
  delta_cache_.emplace(std::make_pair(a.id(), k), d);
  return d;
}

Element Engine::diff_eval(const DiffPoly& p, const Element& a) {
  std::vector<Element> values;
  for (int i = 0; i <= p.order(); ++i) values.push_back(delta_power(a, static_cast<unsigned>(i)));
  return p.evaluate(values);
}

Element Engine::blum_witness(const DiffPoly& p, const DiffPoly& qp) {
  if (qp.is_zero()) throw std::invalid_argument("blum_witness: q is zero");
  const int n = p.order();
  if (qp.order() >= n) throw std::invalid_argument("blum_witness: ord q must be below ord p");
  std::lock_guard wlock(witness_mu_);
  WitnessRecord rec{WitnessRecord::Kind::kBlum, {p.str(), qp.str()}, {}, {}, {}};
  std::vector<Element> lambdas;
  if (n > 0) {
    rec.tags = tags_.fresh_tags(static_cast<std::size_t>(n));
    for (auto t : rec.tags) lambdas.push_back(Element::from_tag(t));
    for (int i = 0; i + 1 < n; ++i) pin(rec.tags[i], lambdas[i + 1]);
  }
  EPoly c = p.univariate(static_cast<std::uint32_t>(n), lambdas);
  trim(c);
  if (c.size() < 2) throw std::runtime_error("degenerate leading coefficient in " + p.str());
  Element root = adjoin_root(c);
  rec.selections.push_back("smallest");
  if (n > 0) {
    pin(rec.tags.back(), root);
    rec.element = lambdas.front();
  } else {
    rec.element = root;
  }
  std::lock_guard lock(mu_);
  log_.push_back(rec);
  return rec.element;
}

Element Engine::ordered_witness(const DiffPoly& p, const std::vector<DiffPoly>& qs, const std::vector<Element>& point) {
  const int k = p.order();
  if (k < 0) throw std::invalid_argument("ordered_witness: p is constant");
  if (point.size() != static_cast<std::size_t>(k) + 1) throw std::invalid_argument("ordered_witness: point needs ord p + 1 entries");
  for (const auto& qj : qs)
    if (qj.order() > k) throw std::invalid_argument("ordered_witness: ord q exceeds ord p");
  auto real_coefficients = [](const DiffPoly& d) {
    return std::all_of(d.terms().begin(), d.terms().end(), [](const auto& t) { return t.second.is_real(); });
  };
  bool singer = std::all_of(point.begin(), point.end(), [](const Element& a) { return a.is_real(); }) &&
                real_coefficients(p) && std::all_of(qs.begin(), qs.end(), real_coefficients);
  singer = singer && p.evaluate(point).is_zero() && !p.partial(static_cast<std::uint32_t>(k)).evaluate(point).is_zero();
  for (const auto& qj : qs) singer = singer && qj.evaluate(point).sign() > 0;
  if (!singer) throw std::runtime_error("not a Singer configuration");

  std::lock_guard wlock(witness_mu_);
  WitnessRecord rec{WitnessRecord::Kind::kOrdered, {p.str()}, {}, {}, {}};
  for (const auto& qj : qs) rec.inputs.push_back(qj.str());
  if (k == 0) {
    // the point itself solves p, as delta does not enter
    rec.element = point[0];
  } else {
    std::optional<Element> f;
    for (int h = 0; !f && h <= max_halvings; ++h) f = try_ordered(p, qs, point, start_eps_exponent + h, rec);
    if (!f) throw std::runtime_error("ordered witness: retry budget exhausted");
    rec.element = *f;
  }
  std::lock_guard lock(mu_);
  log_.push_back(rec);
  return rec.element;
}

std::optional<Element> Engine::try_ordered(const DiffPoly& p, const std::vector<DiffPoly>& qs,
                                           const std::vector<Element>& point, long eps_bits, WitnessRecord& rec) {
  const std::size_t k = point.size() - 1;
  const std::vector<std::uint32_t> tags = tags_.fresh_tags(k);
  rec.tags.insert(rec.tags.end(), tags.begin(), tags.end());
  rec.selections.push_back("eps=2^-" + std::to_string(eps_bits));
  // r_i ~ a_i / x0(t_i), so that u_i = r_i L_i is within the tolerance of a_i
  std::vector<Rational> r(k);
  std::vector<Element> u(k);
  for (std::size_t i = 0; i < k; ++i) {
    const long bits = eps_bits + 16;
    const Interval x = anchor::coordinate(tags[i], bits);
    const Interval a = point[i].enclosure(bits).re();
    if (a.contains_zero()) {
      // a_i within 2^-bits of 0: any small nonzero r_i will do
      r[i] = Dyadic(1, -(eps_bits + x.hi().magnitude() + 1)).to_rational();
    } else {
      r[i] = round_relative(a.mid().to_rational() / x.mid().to_rational(), eps_bits + 8);
    }
    u[i] = q(r[i]) * Element::from_tag(tags[i]);
    rec.selections.push_back("r" + std::to_string(i) + "=" + to_string(r[i]));
  }
  for (std::size_t i = 0; i + 1 < k; ++i)
    pin(tags[i], q(r[i + 1] / r[i]) * Element::from_tag(tags[i + 1]));
  EPoly c = p.univariate(static_cast<std::uint32_t>(k), u);
  trim(c);
  if (c.size() < 2) return std::nullopt;
  std::vector<Element> roots = real_roots(c);
  if (roots.empty()) return std::nullopt;
  // the root nearest a_k
  std::size_t best = 0;
  Rational best_dist;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    Rational d = abs((roots[j] - point[k]).enclosure(64).re().mid().to_rational());
    if (j == 0 || d < best_dist) {
      best = j;
      best_dist = d;
    }
  }
  rec.selections.push_back("root=" + std::to_string(best + 1) + "/" + std::to_string(roots.size()));
  pin(tags[k - 1], roots[best] * q(1 / r[k - 1]));
  Element f = u[0];
  for (const auto& qj : qs)
    if (diff_eval(qj, f).sign() <= 0) return std::nullopt;
  return f;
}

std::vector<Element> Engine::distinct_solutions(unsigned n) {
  if (n == 0) throw std::invalid_argument("distinct_solutions: n must be positive");
  std::lock_guard wlock(witness_mu_);
  const DiffPoly y = DiffPoly::y(0);
  const DiffPoly p0 = (DiffPoly(q(1)) + y) * DiffPoly::y(1) - y;
  DiffPoly qj = y;
  std::vector<Element> out;
  for (unsigned j = 0; j < n; ++j) {
    Element phi = blum_witness(p0, qj);
    out.push_back(phi);
    qj = qj * (y - DiffPoly(phi));
  }
  WitnessRecord rec{WitnessRecord::Kind::kDistinct, {p0.str(), std::to_string(n)}, {}, {}, out.back()};
  std::lock_guard lock(mu_);
  log_.push_back(rec);
  return out;
}

Element Engine::root_between(const DiffPoly& p, const Element& a, const Element& b) {
  if (!a.is_real() || !b.is_real()) throw std::invalid_argument("root_between: endpoints must be real");
  if ((b - a).sign() <= 0) throw std::invalid_argument("root_between: need a < b");
  if ((diff_eval(p, a) * diff_eval(p, b)).sign() >= 0) throw std::invalid_argument("root_between: p does not change sign");
  std::lock_guard wlock(witness_mu_);
  const int n = p.order();
  WitnessRecord rec{WitnessRecord::Kind::kRootBetween, {p.str(), a.str(), b.str()}, {}, {}, {}};
  if (n == 0) {
    EPoly c = p.univariate(0, {});
    trim(c);
    rec.element = sign_change_root(real_roots(c), a, b, [&c](const Element& x) { return horner(c, x); });
  } else {
    // R(t) = p*(t a_i + (1 - t) b_i), a_i = delta^i a, b_i = delta^i b
    std::vector<EPoly> lin;
    for (int i = 0; i <= n; ++i) {
      Element ai = delta_power(a, static_cast<unsigned>(i)), bi = delta_power(b, static_cast<unsigned>(i));
      lin.push_back({bi, ai - bi});
    }
    EPoly R;
    for (const auto& [m, c] : p.terms()) {
      EPoly term{c};
      for (const auto& [v, e] : m.powers())
        for (std::uint32_t j = 0; j < e; ++j) term = mul(term, lin[v - var::kDiffBase]);
      add_into(R, term);
    }
    trim(R);
    Element t0 = sign_change_root(real_roots(R), Element(), q(1), [&R](const Element& t) { return horner(R, t); });
    std::vector<Element> point;
    for (const auto& l : lin) point.push_back(l[0] + t0 * l[1]);
    if (p.partial(static_cast<std::uint32_t>(n)).evaluate(point).is_zero()) throw NondegeneracyFailure();
    const DiffPoly y = DiffPoly::y(0);
    const DiffPoly window = (y - DiffPoly(a)) * (DiffPoly(b) - y);
    rec.element = ordered_witness(p, {window}, point);
  }
  std::lock_guard lock(mu_);
  log_.push_back(rec);
  return rec.element;
}

std::vector<Element> Engine::adjoin_generators(
    unsigned n, const std::function<std::vector<Element>(const std::vector<Element>&)>& h) {
  std::lock_guard wlock(witness_mu_);
  WitnessRecord rec{WitnessRecord::Kind::kAdjoin, {std::to_string(n)}, tags_.fresh_tags(n), {}, {}};
  std::vector<Element> gens;
  for (auto t : rec.tags) gens.push_back(Element::from_tag(t));
  std::vector<Element> values = h(gens);
  if (values.size() != n) throw std::invalid_argument("adjoin_generators: expected one derivative per generator");
  const std::uint32_t limit = tags_.high_water();
  for (const auto& v : values)
    for (auto t : v.support())
      if (t >= limit) throw std::invalid_argument("adjoin_generators: unallocated tag L" + std::to_string(t));
  for (unsigned j = 0; j < n; ++j) {
    pin(rec.tags[j], values[j]);
    rec.inputs.push_back(values[j].str());
  }
  if (!gens.empty()) rec.element = gens.front();
  std::lock_guard lock(mu_);
  log_.push_back(rec);
  return gens;
}

std::pair<Element, Element> Engine::complexify_delta(const Element& f1, const Element& f2) {
  if (!f1.is_real() || !f2.is_real()) throw std::domain_error("complexify_delta: parts must be real");
  const Element i = Element::imaginary_unit();
  return {apply_delta(f1 + i * f2), apply_delta(f1) + i * apply_delta(f2)};
}

Element Engine::relation_residual(const std::vector<Element>& coeffs, const Element& e) {
  Element sum, slope, power = q(1);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    sum = sum + apply_delta(coeffs[j]) * power;
    if (j + 1 < coeffs.size()) slope = slope + q(static_cast<long>(j + 1)) * coeffs[j + 1] * power;
    power = power * e;
  }
  return sum + slope * apply_delta(e);
}

}  // namespace nashdcf
