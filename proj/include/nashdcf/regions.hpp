#ifndef NASHDCF_REGIONS_HPP
#define NASHDCF_REGIONS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nashdcf/element.hpp"
#include "nashdcf/mpoly.hpp"

namespace nashdcf {

enum class RegionMode { kReal, kComplex };

/// A polynomial in L1..Lm (tag variables 1..m) together with its ambient
/// dimension and field.
struct RegionPoly {
  MPoly poly;
  unsigned m = 0;
  RegionMode mode = RegionMode::kReal;
};

/// Validates the variable range; throws std::invalid_argument.
RegionPoly region_poly(MPoly poly, unsigned m, RegionMode mode);

/// Gaussian rational re + i*im.
struct GaussQ {
  Rational re, im;
};

/// A point of K^m. Rational and Gaussian-rational coordinates are kept on
/// the side and take a polynomial-over-Q fast path.
class RegionPoint {
 public:
  RegionPoint() = default;
  explicit RegionPoint(std::vector<Element> coords);
  static RegionPoint rational(const std::vector<Rational>& coords);
  static RegionPoint gaussian(const std::vector<GaussQ>& coords);

  std::size_t size() const { return coords_.size(); }
  const std::vector<Element>& coords() const { return coords_; }
  const std::optional<std::vector<GaussQ>>& exact() const { return exact_; }
  /// Same point without the rational fast path.
  RegionPoint symbolic() const;
  /// First k coordinates.
  RegionPoint prefix(std::size_t k) const;
  /// "(3/7, -2/5)"; non-Gaussian coordinates print their presentation.
  std::string str() const;

 private:
  std::vector<Element> coords_;
  std::optional<std::vector<GaussQ>> exact_;
};

/// Leading coefficient in Lm, as a polynomial in L1..L(m-1).
RegionPoly omega(const RegionPoly& p);

/// Whether P(x1, ..., x(m-1), xm + g) = 0 for some real g >= 0.
bool gamma_member(const RegionPoly& p, const RegionPoint& x);

/// Membership in W_P = (K^m \ Gamma_P) intersected with W_omega(P) x K.
bool wp_member(const RegionPoly& p, const RegionPoint& x);

/// Membership of an assignment in the cylinder over W_P, where P is written
/// in the increasing tags t1 < ... < tm.
bool cylinder_member(const MPoly& p, const std::vector<std::uint32_t>& tags,
                     const std::map<std::uint32_t, Element>& assignment, RegionMode mode);

/// A member of W_P with sup-norm above `bound`, by doubling along the last
/// coordinate over a member of W_omega(P). nullopt when P = 0 or the search
/// gives up.
std::optional<RegionPoint> search_member(const RegionPoly& p, const Rational& bound);

/// A member of W_P within 2^-bits of x in every coordinate, or nullopt after
/// `tries` random perturbations.
std::optional<RegionPoint> member_near(const RegionPoly& p, const std::vector<GaussQ>& x, unsigned bits,
                                       std::uint64_t seed, unsigned tries = 64);

struct AxiomLine {
  std::string axiom;
  bool ok = true;
  std::size_t passed = 0, total = 0;
  std::string detail;  ///< counterexample or search result
  std::string str() const;
};

struct AxiomReport {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<AxiomLine> lines;
  bool ok() const;
  std::string str() const;
};

struct AxiomOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  Rational r2_bound = Rational(1000000);
};

/// Sampled points for the axiom checks: coordinates with numerators and
/// denominators up to 100, plus points next to real roots in the last
/// coordinate.
std::vector<RegionPoint> sample_points(const RegionPoly& p, std::size_t count, std::uint64_t seed);

/// R0 for P and Q, R1 for the pair and R2 for P over sampled points.
AxiomReport check_R_axioms(const RegionPoly& p, const RegionPoly& q, const AxiomOptions& opt = {});

}  // namespace nashdcf

#endif
