#ifndef NASHDCF_ROOTS_HPP
#define NASHDCF_ROOTS_HPP

#include <functional>
#include <vector>

#include "nashdcf/interval.hpp"

namespace nashdcf {

/// Coefficient enclosures (lowest degree first) of a univariate polynomial
/// whose coefficients are only known through refinable boxes. Called with a
/// precision in bits; larger precision must give narrower boxes.
using CoeffFn = std::function<std::vector<ComplexBox>(long bits)>;

/// Krawczyk image of X for the polynomial with coefficient boxes c.
/// `certified` is set when K(X) lies in the interior of X and f' has no zero
/// on X: then X holds exactly one root (one real root when X is a real
/// segment and the coefficients are real).
ComplexBox krawczyk(const std::vector<ComplexBox>& c, const ComplexBox& X, long bits, bool& certified);

/// Horner evaluation in box arithmetic.
ComplexBox eval_boxes(const std::vector<ComplexBox>& c, const ComplexBox& x, long bits);

struct IsolatedRoot {
  ComplexBox box;
  bool real;  ///< certified real (box is a real segment)
};

/// Isolates every root of a polynomial with nonzero leading coefficient and
/// pairwise-distinct roots. Boxes are pairwise disjoint and each certified by
/// krawczyk(); their number equals the degree, so no root is missed. With
/// real coefficients, real roots come back as real segments and every other
/// box stays off the real axis. Approximations come from Durand-Kerner in
/// dyadic arithmetic and only seed the certification.
std::vector<IsolatedRoot> isolate_roots(const CoeffFn& coeffs, int degree, bool real_coefficients);

/// Shrinks a certified box until its width is at most 2^-target_bits, keeping
/// the root inside by intersecting with Krawczyk images.
ComplexBox refine_root(const CoeffFn& coeffs, ComplexBox X, long target_bits);

}  // namespace nashdcf

#endif
