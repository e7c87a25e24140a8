#pragma once

#include <cstdint>

#include "bzcert/factored.hpp"

namespace bzcert {

/// Enclosure of a polynomial over disks by a second-order Taylor expansion
/// at the disk center with a rigorous third-order remainder:
///
///   p(c + t) = p(c) + p'(c) t + p''(c)/2 t^2 + R,  |R| <= rho^3 sup |p'''/6|
///
/// where the supremum over the disk is bounded by ball evaluation of the
/// factored third derivative.
/// Overestimation is third order in the disk radius, which keeps the arc
/// and cell counts of the subdivision routines small even for polynomials of
/// degree several hundred.
class TaylorModel {
 public:
  explicit TaylorModel(FactoredPoly p);

  const FactoredPoly& poly() const { return orders_[0]; }

  /// Ball containing p(w) for every w in the disk.
  Ball enclose(const Disk& d) const;
  /// Value at the (exact) center of the disk.
  Ball value(const Ball& z) const { return orders_[0].eval(z); }

  /// Taylor coefficients p^{(k)}(z)/k! for k = 0, 1, 2.
  std::array<Ball, 3> jet(const Ball& z) const;
  /// Upper bound of |p'''/6| over the disk.
  XReal remainder_bound(const Disk& d) const;

 private:
  // k-th derivatives, k = 0..3
  std::array<FactoredPoly, 4> orders_;
};

/// Arc of a circle given by a dyadic fraction of the full turn:
/// angles in [2 pi j / 2^level, 2 pi (j+1) / 2^level].
struct Arc {
  std::uint64_t index;
  int level;

  Arc left() const { return {2 * index, level + 1}; }
  Arc right() const { return {2 * index + 1, level + 1}; }
};

/// A disk containing every point of the arc on the given circle.
Disk arc_disk(const Disk& circle, const Arc& arc);
/// Ball containing the circle point at the arc midpoint.
Ball arc_midpoint(const Disk& circle, const Arc& arc);
/// Upper bound of the distance from the arc midpoint to any point of the arc.
XReal arc_reach(const Disk& circle, const Arc& arc);

/// Smallest level with at least n arcs.
int level_for(std::uint64_t n);

}  // namespace bzcert
