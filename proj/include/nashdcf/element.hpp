#ifndef NASHDCF_ELEMENT_HPP
#define NASHDCF_ELEMENT_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nashdcf/interval.hpp"
#include "nashdcf/mpoly.hpp"

namespace nashdcf {

class Atom;
using AtomPtr = std::shared_ptr<Atom>;

/// Bound on the Z-degree of any defining polynomial (default 64).
void set_degree_budget(unsigned degree);
unsigned degree_budget();

/// Thrown when an elimination would exceed the degree budget.
class DegreeBudgetExhausted : public std::runtime_error {
 public:
  DegreeBudgetExhausted() : std::runtime_error("degree budget exhausted") {}
};

/// An algebraic function over Q(tags) pinned at the anchor point.
///
/// Internally an element is a presentation N / D: D is a nonzero polynomial in
/// tag variables only, N a polynomial in tag variables, the imaginary unit I
/// (reduced modulo I^2 + 1) and the root variables of finitely many atoms.
/// Atoms are adjoined roots with a certified isolating box; they are shared
/// between elements. The defining polynomial over Q[tags][Z] is derived on
/// demand by resultant elimination.
class Element {
 public:
  Element();  ///< zero
  static Element from_rational(const Rational& q);
  static Element from_tag(std::uint32_t tag);
  static Element imaginary_unit();
  /// N / D over the given atoms; `real` is the constructive realness flag.
  static Element from_presentation(MPoly num, MPoly den, const std::vector<AtomPtr>& atoms, bool real);
  static Element from_atom(const AtomPtr& atom);

  const MPoly& numerator() const;
  const MPoly& denominator() const;
  /// Atoms whose root variable occurs in the numerator, by increasing variable.
  const std::vector<AtomPtr>& atoms() const;
  bool is_real() const;
  /// True when the value lies in Q(tags): no atoms and no I.
  bool is_rational_function() const;
  std::optional<Rational> rational_value() const;
  /// Tags the element depends on, including through its atoms.
  std::set<std::uint32_t> support() const;
  /// Process-local identity, stable for the lifetime of the value.
  std::uint64_t id() const;

  Element operator-() const;
  friend Element operator+(const Element& a, const Element& b);
  friend Element operator-(const Element& a, const Element& b);
  friend Element operator*(const Element& a, const Element& b);
  /// Throws std::domain_error("zero divisor") when b is zero.
  friend Element operator/(const Element& a, const Element& b);
  Element inverse() const;
  Element pow(unsigned e) const;

  bool is_zero() const;
  /// -1, 0 or +1. Throws std::domain_error on an element not flagged real.
  int sign() const;

  Element conjugate() const;
  /// (re, im), both flagged real, with *this = re + i * im.
  std::pair<Element, Element> split_re_im() const;
  /// Partial derivative with respect to the tag variable, by implicit
  /// differentiation through every atom.
  Element partial_derivative(std::uint32_t tag) const;

  /// Enclosure of the value at the anchor of width at most 2^-bits. Real
  /// elements get real segments.
  ComplexBox enclosure(long bits) const;
  /// Enclosure from one evaluation pass at the given working precision.
  ComplexBox evaluate(long precision) const;
  /// Square-free, primitive defining polynomial in Q[tags][Z].
  MPoly defining_polynomial() const;
  /// Box of width at most 2^-bits isolating the value among all roots of
  /// defining_polynomial() at the anchor.
  ComplexBox isolating_box(long bits) const;

  /// Presentation text, for diagnostics.
  std::string str() const;

 private:
  struct Rep;
  explicit Element(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  static Element make(MPoly num, MPoly den, std::vector<AtomPtr> atoms, bool real);
  std::shared_ptr<const Rep> rep_;
  friend class Atom;
  friend Element invert_numerator(const MPoly& num, const std::vector<AtomPtr>& atoms, bool real);
};

/// An adjoined root: the unique root inside `box` of the relation
/// sum_j c_j Z^j, c_j Elements. Immutable apart from caches.
class Atom {
 public:
  enum class Kind { kRoot, kInverse, kConjugate };

  /// New root atom for a monic relation; `box` must be certified for it.
  static AtomPtr make_root(std::vector<Element> relation, ComplexBox box, bool real);
  /// Atom for 1/a, a nonzero.
  static AtomPtr make_inverse(const Element& a);

  Var var() const { return var_; }
  Kind kind() const { return kind_; }
  bool real() const { return real_; }
  /// Relation coefficients, lowest degree first.
  const std::vector<Element>& relation() const { return relation_; }
  /// Relation with denominators cleared: polynomial in tags, I, dependency
  /// atoms and var(). Its leading coefficient is nonzero at the anchor.
  const MPoly& tower() const { return tower_; }
  /// Atoms occurring in tower(), excluding this one.
  const std::vector<AtomPtr>& dependencies() const { return deps_; }
  /// Whether tower()'s leading coefficient lies in Q[tags], so that
  /// pseudo-division by it keeps denominators free of atoms.
  bool reduces() const { return reduces_; }
  /// Upper bound on the degree of defining().
  unsigned degree_bound() const { return degree_bound_; }

  /// Certified box narrower than 2^-bits.
  ComplexBox box(long bits) const;
  /// Square-free defining polynomial in Q[tags][var()].
  MPoly defining() const;
  /// Partial derivative of the root with respect to a tag, as an element.
  Element derivative(std::uint32_t tag) const;
  std::set<std::uint32_t> support() const;
  AtomPtr conjugate() const;

 private:
  Atom(Kind kind, std::vector<Element> relation, ComplexBox box, bool real);
  void init_tower();

  const Kind kind_;
  const Var var_;
  const bool real_;
  std::vector<Element> relation_;
  MPoly tower_;
  std::vector<AtomPtr> deps_;
  bool reduces_ = false;
  unsigned degree_bound_ = 1;

  mutable std::mutex mu_;
  mutable ComplexBox box_;
  mutable std::optional<MPoly> defining_;
  mutable std::optional<Element> slope_inverse_;  // 1 / (d tower / d var) at the root
  mutable std::map<std::uint32_t, Element> derivatives_;
  mutable std::optional<std::set<std::uint32_t>> support_;
  mutable std::weak_ptr<Atom> conjugate_;
  std::weak_ptr<Atom> self_;
};

/// Root choice for adjoin_root.
struct RootSelector {
  enum class Kind { kSmallest, kRealIndex, kHint };
  Kind kind = Kind::kSmallest;
  int index = 1;  ///< kRealIndex: 1-based position among real roots, increasing
  ComplexBox hint;
  static RootSelector smallest() { return {}; }
  static RootSelector real_index(int k) { return {Kind::kRealIndex, k, {}}; }
  static RootSelector near(const ComplexBox& b) { return {Kind::kHint, 1, b}; }
};

/// A root of sum_j coeffs[j] Z^j selected per `selector`. kSmallest picks the
/// smallest modulus, ties going to the smaller argument measured in [0, 2pi).
/// Throws std::invalid_argument for a constant polynomial and
/// std::out_of_range when the selector matches no root.
Element adjoin_root(std::vector<Element> coeffs, const RootSelector& selector = {});

/// All real roots, increasing. Coefficients must be real; repeated roots are
/// reported once.
std::vector<Element> real_roots(std::vector<Element> coeffs);

/// Every root with the chosen ordering of adjoin_root's kSmallest selector.
std::vector<Element> all_roots(std::vector<Element> coeffs);

/// Coefficients of p as a polynomial in v, each an element (p over Q[tags][v]).
std::vector<Element> element_coefficients(const MPoly& p, Var v);

}  // namespace nashdcf

#endif
