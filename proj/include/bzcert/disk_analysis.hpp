#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "bzcert/factored.hpp"
#include "bzcert/taylor.hpp"

namespace bzcert {

/// A disk certified to contain exactly one zero, which is simple.
struct ZeroEnclosure {
  Disk disk;
  /// Certified positive lower bound of |p'| on the enclosure disk.
  XReal derivative_lower_bound;
  bool simple = true;
};

/// Perturbation radius delta: every h with ||h||_{C^1(disk)} <= delta leaves
/// the number of zeros in the disk and their simplicity unchanged.
struct StabilityRadius {
  XReal delta;
  /// Certified lower bound of |p| on the boundary circle.
  XReal boundary_min;
  /// Smallest certified lower bound of |p| on the circles of radius
  /// `separation` around the zeros.
  XReal circle_min;
  /// Smallest certified lower bound of |p'| on the disks of radius
  /// `separation` around the zeros.
  XReal derivative_min;
  XReal separation;
};

/// Lower bound of a minimum, with the smallest value actually sampled.
struct InfBound {
  XReal lower;
  XReal upper;
};

inline constexpr double kDefaultMinTightness = 1.25;

/// Number of zeros (with multiplicity) in the open disk, by the argument
/// principle. Throws DomainError for the zero polynomial and
/// PrecisionExhausted when a zero on the boundary cannot be excluded.
int count_zeros_winding(const FactoredPoly& p, const Disk& disk);

/// Certified lower bound of min |p| over the circle.
InfBound min_modulus_on_circle(const FactoredPoly& p, const Disk& circle,
                               double tightness = kDefaultMinTightness);

/// Pairwise disjoint enclosures of all zeros in the open disk. Throws
/// PrecisionExhausted when some zero cannot be isolated as a simple zero
/// (in particular for multiple zeros).
std::vector<ZeroEnclosure> locate_zeros(const FactoredPoly& p, const Disk& disk);

/// Tries to certify that the disk of radius at most rho_max around z contains
/// exactly one zero of p, which is simple, by Rouche comparison with the
/// linearization at z. Works for polynomials with ball coefficients: the
/// certificate then holds for every member of the family.
std::optional<ZeroEnclosure> certify_simple_zero(const TaylorModel& p, const TaylorModel& dp,
                                                 const Ball& z, const XReal& rho_max);

/// delta = min(boundary_min, circle_min, derivative_min) / 2. The
/// separation radius defaults to a third of the smaller of the enclosure gaps
/// and the distance to the boundary, halved while p' has a zero within it.
StabilityRadius stability_radius(const FactoredPoly& p, const Disk& disk,
                                 const std::vector<ZeroEnclosure>& zeros,
                                 std::optional<XReal> separation = std::nullopt);

/// Non-certified approximations of all roots (Aberth iteration in extended
/// double precision). Used only to seed the certified routines.
std::vector<std::complex<long double>> approximate_roots(const UniPoly& p);

/// Newton refinement of an approximation at the working precision.
Ball polish_root(const FactoredPoly& p, const FactoredPoly& dp, Ball z);

}  // namespace bzcert
