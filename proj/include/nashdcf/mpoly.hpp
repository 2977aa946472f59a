#ifndef NASHDCF_MPOLY_HPP
#define NASHDCF_MPOLY_HPP

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nashdcf/rational.hpp"

namespace nashdcf {

/// Variable identifier. Tags occupy the low range in allocation order, so the
/// numeric order of identifiers is the global variable order.
using Var = std::uint32_t;

namespace var {

inline constexpr Var kZ = 0x40000000u;        ///< root symbol Z
inline constexpr Var kGamma = 0x40000001u;    ///< shift parameter γ
inline constexpr Var kImag = 0x40000002u;     ///< imaginary unit inside element presentations
inline constexpr Var kDiffBase = 0x48000000u; ///< x_0, x_1, ... of a p* form
inline constexpr Var kAtomBase = 0x50000000u; ///< root variables of adjoined atoms

constexpr Var tag(std::uint32_t index) { return index; }
constexpr bool is_tag(Var v) { return v < kZ; }
constexpr bool is_atom(Var v) { return v >= kAtomBase; }
constexpr Var diff(std::uint32_t order) { return kDiffBase + order; }
constexpr bool is_diff(Var v) { return v >= kDiffBase && v < kAtomBase; }

std::string name(Var v);

}  // namespace var

/// A power product, stored as (variable, exponent) pairs sorted by variable.
class Monomial {
 public:
  using Power = std::pair<Var, std::uint32_t>;

  Monomial() = default;
  static Monomial of(Var v, std::uint32_t e = 1);

  std::span<const Power> powers() const { return {p_.data(), p_.size()}; }
  bool is_one() const { return p_.empty(); }
  std::uint32_t degree(Var v) const;
  std::uint32_t total_degree() const;
  /// Largest variable present; undefined for the unit monomial.
  Var top() const { return p_.back().first; }

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& m) const;
  /// Exact quotient; requires divides(m).
  Monomial quotient(const Monomial& m) const;
  Monomial without(Var v) const;
  Monomial with(Var v, std::uint32_t e) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  boost::container::small_vector<Power, 4> p_;
};

/// Lexicographic comparison with the larger variable most significant.
int compare(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coef;
};

/// Sparse multivariate polynomial over Q. Terms are kept in strictly
/// decreasing monomial order with no zero coefficients.
class MPoly {
 public:
  MPoly() = default;
  MPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  MPoly(long c) : MPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  MPoly(int c) : MPoly(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static MPoly variable(Var v);
  static MPoly monomial(Monomial m, Rational c);
  /// Sorts and merges arbitrary terms.
  static MPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return t_; }
  std::size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].mono.is_one()); }
  Rational constant_value() const;  ///< coefficient of the unit monomial
  const Term& leading() const { return t_.front(); }

  std::uint32_t degree(Var v) const;
  std::uint32_t total_degree() const;
  std::vector<Var> variables() const;
  bool contains(Var v) const;
  bool has_var_where(bool (*pred)(Var)) const;

  MPoly operator-() const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  MPoly scaled(const Rational& c) const;
  MPoly times_monomial(const Monomial& m) const;
  MPoly pow(unsigned e) const;

  friend bool operator==(const MPoly& a, const MPoly& b);

  /// Coefficients with respect to v; entry k multiplies v^k. Empty for zero.
  std::vector<MPoly> coefficients(Var v) const;
  static MPoly from_coefficients(Var v, const std::vector<MPoly>& coeffs);
  /// Leading coefficient with respect to v.
  MPoly leading_coefficient(Var v) const;

  MPoly derivative(Var v) const;
  MPoly substitute(Var v, const MPoly& value) const;
  MPoly evaluate(Var v, const Rational& value) const;
  MPoly rename(Var from, Var to) const;

  /// Scales to integer coefficients with gcd 1 and positive leading coefficient.
  MPoly normalized() const;
  /// Positive rational c with this = c * normalized().
  Rational unit_content() const;

 private:
  std::vector<Term> t_;
};

/// a / b when b divides a exactly in Q[vars].
std::optional<MPoly> divide_exact(const MPoly& a, const MPoly& b);
/// As divide_exact, but throws std::domain_error on a nonzero remainder.
MPoly divexact(const MPoly& a, const MPoly& b);

std::string to_string(const MPoly& p);

}  // namespace nashdcf

#endif
