#ifndef NASHDCF_DIFFCLOSURE_HPP
#define NASHDCF_DIFFCLOSURE_HPP

#include <climits>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nashdcf/anchor.hpp"
#include "nashdcf/element.hpp"
#include "nashdcf/polytext.hpp"

namespace nashdcf {

/// Differential polynomial in one indeterminate y, stored as its star form:
/// a polynomial in x_0..x_n (x_i standing for the i-th derivative of y) with
/// Element coefficients. Terms are in decreasing monomial order and no
/// coefficient is zero.
class DiffPoly {
 public:
  using Term = std::pair<Monomial, Element>;
  static constexpr int kMinusInfinity = INT_MIN;  ///< degree of 0

  DiffPoly() = default;
  DiffPoly(const Element& c);  // NOLINT(google-explicit-constructor)
  static DiffPoly y(std::uint32_t k = 0);  ///< x_k
  /// Rational polynomial in the variables var::diff(k) (and nothing else).
  static DiffPoly from_mpoly(const MPoly& p);

  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  /// Highest k with x_k present; -1 for constants including 0.
  int order() const;
  /// Total degree; kMinusInfinity for 0.
  int degree() const;

  DiffPoly operator-() const;
  friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  DiffPoly pow(unsigned e) const;
  /// d/dx_k of the star form.
  DiffPoly partial(std::uint32_t k) const;

  /// star(values[0], ..., values[n]); values must cover the order.
  Element evaluate(const std::vector<Element>& values) const;
  /// Coefficients in x_k (lowest first) after substituting values[i] for
  /// every other x_i.
  std::vector<Element> univariate(std::uint32_t k, const std::vector<Element>& values) const;

  /// Text with y, y', y'' and y[k]; rational coefficients inline, others as
  /// their presentation in brackets.
  std::string str() const;

 private:
  static DiffPoly from_terms(std::vector<Term> terms);
  std::vector<Term> t_;
};

/// Resolves identifiers other than y-forms while parsing.
using Resolver = std::function<std::optional<Element>(const std::string& name)>;

/// Parses a differential polynomial: y, y', y'', y[k]; integer literals;
/// + - * / ^ and parentheses; other identifiers through `resolve`. Division
/// only by nonzero constants. Throws ParseError.
DiffPoly parse_diffpoly(std::string_view text, const Resolver& resolve);

struct WitnessRecord {
  enum class Kind { kBlum, kOrdered, kAdjoin, kDistinct, kRootBetween };
  Kind kind;
  std::vector<std::string> inputs;
  std::vector<std::uint32_t> tags;
  std::vector<std::string> selections;
  Element element;
};

std::string to_string(WitnessRecord::Kind k);

/// Thrown by root_between when the Singer nondegeneracy fails at the point
/// built from the sign change.
class NondegeneracyFailure : public std::runtime_error {
 public:
  NondegeneracyFailure() : std::runtime_error("nondegeneracy failure") {}
};

/// Tag allocation, the derivation table g and the witness constructions.
///
/// The derivation is delta(f) = sum over tags t of g_t * df/dL_t. Entries of
/// g are pinned permanently: a witness pins the fresh tags it consumes, and
/// any other tag read by a derivation is pinned to 0 on first read.
class Engine {
 public:
  TagRegistry& tags() { return tags_; }
  /// Allocates a fresh tag and returns its element.
  Element fresh_var();

  /// Pinned g_t, pinning 0 when unset.
  Element pin_of(std::uint32_t tag);
  /// Pins g_t. Throws std::logic_error if t is already pinned.
  void pin(std::uint32_t tag, const Element& value);
  /// Snapshot of the pins, by tag.
  std::map<std::uint32_t, Element> pins() const;
  const std::vector<WitnessRecord>& log() const { return log_; }

  Element apply_delta(const Element& a);
  /// delta^k(a), cached.
  Element delta_power(const Element& a, unsigned k);
  /// p(a) = star(a, delta a, ..., delta^n a).
  Element diff_eval(const DiffPoly& p, const Element& a);

  /// f with p(f) = 0 and q(f) != 0. Requires q != 0, ord q < ord p and
  /// deg p > 0 when ord p = 0.
  Element blum_witness(const DiffPoly& p, const DiffPoly& q);
  /// Real f with p(f) = 0 and q_j(f) > 0 for all j, from a real point
  /// a_0..a_k (k = ord p) with p*(a) = 0, dp*/dx_k(a) != 0 and q_j*(a) > 0.
  Element ordered_witness(const DiffPoly& p, const std::vector<DiffPoly>& qs, const std::vector<Element>& point);
  /// n distinct nonzero solutions of (1 + y) y' - y.
  std::vector<Element> distinct_solutions(unsigned n);
  /// Real c with a < c < b and p(c) = 0, given a < b and p(a) p(b) < 0.
  Element root_between(const DiffPoly& p, const Element& a, const Element& b);
  /// n fresh generators e_j with delta e_j = h(e)_j.
  std::vector<Element> adjoin_generators(unsigned n,
                                         const std::function<std::vector<Element>(const std::vector<Element>&)>& h);
  /// (delta(f1 + i f2), delta f1 + i delta f2) for real f1, f2.
  std::pair<Element, Element> complexify_delta(const Element& f1, const Element& f2);
  /// sum_j delta(c_j) e^j + C'(e) delta e for a root e of C = sum_j c_j Z^j;
  /// zero exactly when the derivation respects the relation.
  Element relation_residual(const std::vector<Element>& coeffs, const Element& e);

  /// Ordered-witness tolerance policy.
  int start_eps_exponent = 8;  ///< first tolerance 2^-8
  int max_halvings = 16;

 private:
  std::optional<Element> try_ordered(const DiffPoly& p, const std::vector<DiffPoly>& qs,
                                     const std::vector<Element>& point, long eps_bits, WitnessRecord& rec);

  TagRegistry tags_;
  mutable std::mutex mu_;
  std::map<std::uint32_t, Element> pins_;
  std::map<std::pair<std::uint64_t, unsigned>, Element> delta_cache_;
  std::vector<WitnessRecord> log_;
  std::recursive_mutex witness_mu_;
};

}  // namespace nashdcf

#endif
