#ifndef NASHDCF_RATIONAL_HPP
#define NASHDCF_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nashdcf {

using Integer = mpz_class;

/// Exact rational number; gmp keeps it reduced with a positive denominator.
using Rational = mpq_class;

/// Parses `p`, `-p`, `p/q`. Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline int sign(const Rational& q) { return sgn(q); }

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/// Number of bits of |z| (0 for z = 0).
std::size_t bit_length(const Integer& z);

}  // namespace nashdcf

#endif
