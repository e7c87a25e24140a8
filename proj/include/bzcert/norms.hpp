#pragma once

#include "bzcert/factored.hpp"

namespace bzcert {

/// Certified upper bound together with the largest value actually observed
/// (a lower bound for the same supremum).
struct SupBound {
  XReal upper;
  XReal lower;
};

/// Default ratio between the certified bound and the best sampled value at
/// which boundary refinement stops.
inline constexpr double kDefaultTightness = 1.05;

/// Bounds sup |p| over the circle (equivalently the closed disk, by the
/// maximum modulus principle). Starts from the coefficient majorant and
/// refines arcs adaptively until within `tightness` of the sampled maximum.
SupBound max_modulus_on_circle(const FactoredPoly& p, const Disk& circle,
                               double tightness = kDefaultTightness);

/// C^1 norm on a closed disk, using the convention
/// ||f|| = max(sup |f|, sup |f'|).
SupBound c1_norm_upper(const FactoredPoly& p, const Disk& disk,
                       double tightness = kDefaultTightness);

}  // namespace bzcert
