#include "nashdcf/anchor.hpp"

#include <mpfr.h>

#include <stdexcept>
#include <unordered_map>

namespace nashdcf {

std::vector<std::uint32_t> TagRegistry::fresh_tags(std::size_t n) {
  std::lock_guard lock(mu_);
  std::vector<std::uint32_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(next_++);
  return out;
}

std::uint32_t TagRegistry::high_water() const {
  std::lock_guard lock(mu_);
  return next_;
}

void TagRegistry::reserve_through(std::uint32_t count) {
  std::lock_guard lock(mu_);
  if (count > next_) next_ = count;
}

namespace anchor {
namespace {

std::mutex g_prime_mu;
std::vector<unsigned long> g_primes;

std::mutex g_coord_mu;
// Tightest enclosure computed so far for each tag.
std::unordered_map<std::uint32_t, Interval> g_enclosures;

Dyadic to_dyadic(const mpfr_t x) {
  Integer m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  return Dyadic(m, static_cast<long>(e));
}

/// Enclosure of exp(sqrt(p)) computed with `bits` bits of working precision.
Interval mpfr_enclosure(unsigned long p, long bits) {
  mpfr_t s, lo, hi;
  mpfr_inits2(static_cast<mpfr_prec_t>(bits), s, lo, hi, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_ui(s, p, MPFR_RNDN);  // exact: p fits
  mpfr_sqrt(lo, s, MPFR_RNDD);
  mpfr_exp(lo, lo, MPFR_RNDD);
  mpfr_sqrt(hi, s, MPFR_RNDU);
  mpfr_exp(hi, hi, MPFR_RNDU);
  Interval out(to_dyadic(lo), to_dyadic(hi));
  mpfr_clears(s, lo, hi, static_cast<mpfr_ptr>(nullptr));
  return out;
}

}  // namespace

unsigned long prime(std::uint32_t k) {
  std::lock_guard lock(g_prime_mu);
  std::size_t limit = 64;
  while (g_primes.size() <= k) {
    limit *= 2;
    std::vector<bool> composite(limit + 1, false);
    g_primes.clear();
    for (std::size_t i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      g_primes.push_back(i);
      for (std::size_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
  }
  return g_primes[k];
}

Interval coordinate(std::uint32_t tag, long precision) {
  const unsigned long p = prime(tag);
  std::lock_guard lock(g_coord_mu);
  auto it = g_enclosures.find(tag);
  Interval enc = it != g_enclosures.end() ? it->second : mpfr_enclosure(p, kStartBits + 16);
  long bits = std::max(kStartBits, precision) + 16;
  while (true) {
    Dyadic a = Dyadic::floor(enc.lo().to_rational(), precision);
    Dyadic b = Dyadic::floor(enc.hi().to_rational(), precision);
    if (a == b) {
      g_enclosures[tag] = enc;
      return {a, a + Dyadic(1, -precision)};
    }
    // x0(tag) is irrational, so a fine enough enclosure misses every grid point.
    enc = mpfr_enclosure(p, bits + enc.hi().magnitude());
    bits *= 2;
  }
}

std::map<Var, Interval> assignment(const MPoly& p, long precision) {
  std::map<Var, Interval> out;
  for (Var v : p.variables()) {
    if (!var::is_tag(v)) throw std::invalid_argument("not a tag variable: " + var::name(v));
    out.emplace(v, coordinate(v, precision));
  }
  return out;
}

Interval eval(const MPoly& p, long precision) {
  if (p.is_constant()) return Interval::around(p.constant_value(), precision + 16);
  return interval_eval(p, assignment(p, precision), precision + 16);
}

int sign(const MPoly& p) {
  if (p.is_constant()) return nashdcf::sign(p.constant_value());
  for (long bits = kStartBits;; bits *= 2) {
    int s = eval(p, bits).sign();
    if (s != 0) return s;
  }
}

}  // namespace anchor
}  // namespace nashdcf
