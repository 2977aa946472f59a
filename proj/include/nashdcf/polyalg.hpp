#ifndef NASHDCF_POLYALG_HPP
#define NASHDCF_POLYALG_HPP

#include <map>
#include <optional>

#include "nashdcf/mpoly.hpp"
#include "nashdcf/upoly.hpp"

namespace nashdcf {

/// View of p as a polynomial in v with coefficients free of v.
Poly<MPoly> to_upoly(const MPoly& p, Var v);
MPoly from_upoly(const Poly<MPoly>& p, Var v);

/// Univariate polynomial over Q; p must involve no variable other than v.
Poly<Rational> to_rational_upoly(const MPoly& p, Var v);
MPoly from_rational_upoly(const Poly<Rational>& p, Var v);

/// Sylvester resultant eliminating v, computed by the subresultant PRS.
/// Throws std::invalid_argument("no elimination variable") if neither input
/// involves v.
MPoly resultant(const MPoly& a, const MPoly& b, Var v);

/// Greatest common divisor in Q[vars], normalized (integer coefficients,
/// content 1, positive leading coefficient). gcd(0, 0) = 0.
MPoly gcd(const MPoly& a, const MPoly& b);

/// gcd of the coefficients of p with respect to v (normalized).
MPoly content(const MPoly& p, Var v);
/// p / content(p, v), normalized.
MPoly primitive_part(const MPoly& p, Var v);

/// p / gcd(p, dp/dv) made primitive in v. Throws on p = 0.
MPoly squarefree_part(const MPoly& p, Var v);

/// Pseudo-remainder of p by the monic-or-not divisor d in v.
MPoly pseudo_remainder(const MPoly& p, const MPoly& d, Var v);

/// Monic gcd over Q.
Poly<Rational> gcd(Poly<Rational> a, Poly<Rational> b);
/// Euclidean division over Q.
PseudoDivision<Rational> divide(const Poly<Rational>& a, const Poly<Rational>& b);

/// Substitutes rational values for every variable except keep, producing a
/// univariate image. Variables missing from the assignment are an error.
Poly<Rational> univariate_image(const MPoly& p, Var keep, const std::map<Var, Rational>& values);

/// Deterministic evaluation point for image-based shortcuts.
std::map<Var, Rational> probe_point(const std::vector<Var>& vars, unsigned attempt);

/// Cofactor t with t * b = r (mod a) in Q(other vars)[v], where r is free of v.
/// Empty when gcd(a, b) has positive degree in v.
struct InverseCofactor {
  MPoly cofactor;  ///< polynomial in v (and other vars), degree < deg_v a
  MPoly residue;   ///< nonzero, free of v
};
std::optional<InverseCofactor> inverse_cofactor(const MPoly& a, const MPoly& b, Var v);

}  // namespace nashdcf

#endif
