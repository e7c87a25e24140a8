#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bzcert/construction.hpp"

namespace bzcert {

/// Intersection point (u, eps phi(u)) on the perturbed graph.
struct LiftedPoint {
  Ball w1;
  Ball w2;
  /// Upper bound of |P_{m,eps}(w1, w2)| at the enclosure center.
  XReal residual;
};

struct TailBound {
  bool holds = false;
  /// Certified C^1 bound of Q_{m+2} + ... + Q_M (0 when the tail is empty).
  XReal norm;
  /// Direct boundary-refined bound and the ledger sum it is capped by.
  XReal direct;
  XReal ledger;
  XReal delta_next;
};

struct IntersectionCertificate {
  int m = 0;
  int curve_degree = 0;
  std::int64_t target_count = 0;
  int count = 0;
  FactoredPoly reduced_poly;
  /// FNV-1a digest of the reduced polynomial's coefficients.
  std::string reduced_poly_digest;
  std::vector<ZeroEnclosure> enclosures;
  std::vector<LiftedPoint> points;
  TailBound tail;
  bool transversal = false;
  /// Holomorphic graphs meet complex curves with positive sign; not computed.
  bool positively_oriented = true;
  /// Only the disk locus is certified.
  bool global_transversality_certified = false;
  bool residuals_within_width = false;
  std::int64_t bezout_bound = 0;
  XReal max_enclosure_radius;
  XReal min_derivative;
  XReal max_residual;

  double violation_ratio() const {
    return bezout_bound == 0 ? 0.0 : static_cast<double>(target_count) / static_cast<double>(bezout_bound);
  }
};

/// Q_{m+1} + ... + Q_M
FactoredPoly reduced_equation(const ConstructionState& state, int m);

/// Certifies ||Q_{m+2} + ... + Q_M||_{C^1(B)} < delta_{m+1}. Throws
/// PrecisionExhausted when the gap cannot be certified.
TailBound check_tail_bound(const ConstructionState& state, int m);

IntersectionCertificate certify_intersections(const ConstructionState& state, int m);

/// Homogenization of P_{m,eps} to degree d_m.
TriHomPoly emit_curve(const ConstructionState& state, int m);

struct GeneralCurveSpec {
  BiPoly R;
  /// Degree of the projection to the w1-axis over the closed unit disk.
  int k = 0;
  /// Certified lower bound of min |t_i(w1) - t_l(w1)| over |w1| <= 1.
  XReal min_branch_gap;
  /// Number of boxes in the certified covering.
  int boxes = 0;
  int max_depth = 0;
};

/// Certifies that every fiber R(w1, .) over |w1| <= 1 has k simple roots by
/// a box covering; throws DomainError when ramification cannot be excluded.
GeneralCurveSpec validate_general_curve(const BiPoly& R);

struct GeneralCurveCertificate {
  IntersectionCertificate diagonal;
  int k = 0;
  /// k * b_{d_m}
  std::int64_t count = 0;
  /// b_{d_m} = a_{k d_m}
  std::int64_t b_at_d = 0;
  /// Total degree of R(w1, P_{m,eps}(w1, w2)).
  int curve_degree = 0;
  std::int64_t bezout_bound = 0;
  XReal branch_gap;
  /// eps * sup_B |Q_{m+1} + ... + Q_M|
  XReal tail_sup;
  XReal max_admissible_epsilon;
  bool cross_branch_excluded = false;
  /// (u, eps phi(u) + t_i(u)) for every diagonal zero u and branch i.
  std::vector<LiftedPoint> points;
};

/// `state` must have been built from b_d = a_{k d}.
GeneralCurveCertificate certify_general_curve_intersections(const GeneralCurveSpec& spec,
                                                            const ConstructionState& state, int m);

/// Certified enclosures of the k roots of a fiber polynomial whose
/// coefficients are balls (every member of the family has one simple root in
/// each disk). Empty when certification fails.
std::vector<ZeroEnclosure> certify_fiber_roots(const UniPoly& fiber, const UniPoly& center_fiber);

std::string polynomial_digest(const UniPoly& p);

}  // namespace bzcert
