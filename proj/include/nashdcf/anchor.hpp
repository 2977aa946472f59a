#ifndef NASHDCF_ANCHOR_HPP
#define NASHDCF_ANCHOR_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "nashdcf/interval.hpp"
#include "nashdcf/mpoly.hpp"

namespace nashdcf {

/// Append-only allocator of transcendental tags. Tag k is the variable L<k>;
/// allocation order is the tag order.
class TagRegistry {
 public:
  /// n new tags, all larger than every tag handed out before.
  std::vector<std::uint32_t> fresh_tags(std::size_t n);
  std::uint32_t high_water() const;
  bool allocated(std::uint32_t tag) const { return tag < high_water(); }
  /// Raises the high-water mark (session restore). Never lowers it.
  void reserve_through(std::uint32_t count);

 private:
  mutable std::mutex mu_;
  std::uint32_t next_ = 0;
};

namespace anchor {

/// Initial precision of every refinement loop; loops double it per step.
inline constexpr long kStartBits = 32;

/// The k-th prime, k = 0 giving 2.
unsigned long prime(std::uint32_t k);

/// Dyadic grid cell [m, m+1] / 2^precision containing x0(tag) = exp(sqrt(p_tag)).
/// Cells are nested as precision grows and have width exactly 2^-precision.
Interval coordinate(std::uint32_t tag, long precision);

/// Boxes for every tag variable of p at the given precision.
std::map<Var, Interval> assignment(const MPoly& p, long precision);

/// Sound enclosure of p(x0) for p in Q[tags]; width shrinks with precision.
Interval eval(const MPoly& p, long precision);

/// Exact sign of p(x0) for p in Q[tags]. The coordinates are algebraically
/// independent, so a nonzero p does not vanish at x0 and the refinement loop
/// terminates.
int sign(const MPoly& p);

}  // namespace anchor
}  // namespace nashdcf

#endif
