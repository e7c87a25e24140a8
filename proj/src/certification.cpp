#include "bzcert/certification.hpp"

#include <cstdio>

#include "bzcert/errors.hpp"
#include "bzcert/norms.hpp"

namespace bzcert {

namespace {

constexpr int kGridCells = 8;
constexpr int kMaxBoxDepth = 10;

const XReal& sqrt2_up() {
  static const XReal v = XReal::from_double(1.4142135623730951 * (1.0 + 0x1p-50));
  return v;
}

void check_stage_range(const ConstructionState& state, int m, const char* what) {
  if (m < 1 || m > state.M - 1) {
    throw DomainError(std::string(what) + ": stage " + std::to_string(m) + " outside 1.." +
                      std::to_string(state.M - 1));
  }
}

XReal lower_gap(const Disk& a, const Disk& b) {
  return sub((a.center - b.center).abs_lower(), add_up(a.radius, b.radius), Dir::Down);
}

}  // namespace

std::string polynomial_digest(const UniPoly& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  for (const Ball& c : p.coeffs()) feed(c.to_string(40));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FactoredPoly reduced_equation(const ConstructionState& state, int m) {
  check_stage_range(state, m, "reduced_equation");
  return state.partial_sum(m + 1, state.M);
}

TailBound check_tail_bound(const ConstructionState& state, int m) {
  check_stage_range(state, m, "check_tail_bound");
  TailBound t;
  t.delta_next = state.stage(m + 1).delta;
  if (m == state.M - 1) {
    t.holds = true;
    return t;
  }
  for (int j = m + 2; j <= state.M; ++j) t.ledger = add_up(t.ledger, state.stage(j).norm);
  t.direct = c1_norm_upper(state.partial_sum(m + 2, state.M), Disk::unit()).upper;
  t.norm = min(t.direct, t.ledger);
  t.holds = t.norm < t.delta_next;
  if (!t.holds) {
    throw PrecisionExhausted("tail bound " + t.norm.to_string() + " not below delta_" +
                                 std::to_string(m + 1) + " = " + t.delta_next.to_string(),
                             m);
  }
  return t;
}

IntersectionCertificate certify_intersections(const ConstructionState& state, int m) {
  check_stage_range(state, m, "certify_intersections");
  IntersectionCertificate cert;
  cert.m = m;
  cert.curve_degree = state.stage(m).d;
  cert.target_count = state.stage(m).a_at_d;
  cert.bezout_bound = cert.curve_degree;
  cert.tail = check_tail_bound(state, m);

  cert.reduced_poly = reduced_equation(state, m);
  cert.reduced_poly_digest = polynomial_digest(cert.reduced_poly.dense());
  cert.enclosures = locate_zeros(cert.reduced_poly, Disk::unit());
  cert.count = static_cast<int>(cert.enclosures.size());
  if (cert.count != cert.target_count) {
    throw CertificationFailure("stage " + std::to_string(m) + ": certified " + std::to_string(cert.count) +
                                   " intersections, expected " + std::to_string(cert.target_count),
                               m);
  }

  const XReal box = XReal::parse("0.55", Dir::Down);
  cert.transversal = true;
  cert.min_derivative = XReal::infinity();
  for (const ZeroEnclosure& z : cert.enclosures) {
    if (!(add_up(z.disk.center.abs_upper(), z.disk.radius) < box)) {
      throw CertificationFailure("stage " + std::to_string(m) + ": intersection outside B_0.55", m);
    }
    cert.transversal = cert.transversal && z.simple && z.derivative_lower_bound.sign() > 0;
    cert.max_enclosure_radius = max(cert.max_enclosure_radius, z.disk.radius);
    cert.min_derivative = min(cert.min_derivative, z.derivative_lower_bound);
  }
  if (!cert.transversal) throw CertificationFailure("non-transversal intersection", m);

  const BiPoly P = assemble_P(state, m);
  const FactoredPoly phi = state.phi();
  cert.residuals_within_width = true;
  for (const ZeroEnclosure& z : cert.enclosures) {
    LiftedPoint pt{z.disk.center, state.epsilon * phi.eval(z.disk.center), {}};
    pt.residual = P.eval(pt.w1, pt.w2).abs_upper();
    cert.max_residual = max(cert.max_residual, pt.residual);
    if (!(pt.residual <= z.disk.radius.mul_pow2(1))) cert.residuals_within_width = false;
    cert.points.push_back(std::move(pt));
  }
  if (!cert.residuals_within_width) {
    throw CertificationFailure("stage " + std::to_string(m) + ": residual exceeds enclosure width", m);
  }
  return cert;
}

TriHomPoly emit_curve(const ConstructionState& state, int m) {
  const BiPoly P = assemble_P(state, m);
  const int d = state.stage(m).d;
  if (P.total_degree() != d) {
    throw CertificationFailure("deg P_" + std::to_string(m) + " = " + std::to_string(P.total_degree()) +
                                   " differs from d_m = " + std::to_string(d),
                               m);
  }
  return homogenize(P, d);
}

std::vector<ZeroEnclosure> certify_fiber_roots(const UniPoly& fiber, const UniPoly& center_fiber) {
  const int k = fiber.degree();
  if (k < 1 || fiber.coeff(k).contains_zero()) return {};
  const auto approx = approximate_roots(center_fiber);
  if (static_cast<int>(approx.size()) != k) return {};
  const FactoredPoly center(center_fiber);
  const FactoredPoly dcenter = center.derivative();
  const TaylorModel model{FactoredPoly(fiber)};
  const TaylorModel dmodel{FactoredPoly(fiber.derivative())};

  std::vector<ZeroEnclosure> out;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    long double sep = 4.0L * (std::abs(approx[i]) + 1.0L);
    for (std::size_t j = 0; j < approx.size(); ++j) {
      if (j != i) sep = std::min(sep, std::abs(approx[i] - approx[j]));
    }
    if (!(sep > 0)) return {};
    const Ball z = polish_root(center, dcenter, Ball(static_cast<double>(approx[i].real()),
                                                     static_cast<double>(approx[i].imag())));
    auto enc = certify_simple_zero(model, dmodel, z, XReal::from_double(static_cast<double>(sep / 2)));
    if (!enc) return {};
    for (const ZeroEnclosure& e : out) {
      if (lower_gap(e.disk, enc->disk).sign() <= 0) return {};
    }
    out.push_back(std::move(*enc));
  }
  return out;
}

GeneralCurveSpec validate_general_curve(const BiPoly& R) {
  GeneralCurveSpec spec;
  spec.R = R;
  spec.k = R.degree_w2();
  if (spec.k < 1) throw DomainError("the curve must depend on w2");
  spec.min_branch_gap = XReal::infinity();

  struct Box {
    double cx, cy, h;
    int depth;
  };
  std::vector<Box> stack;
  const double h0 = 1.0 / kGridCells;
  for (int i = kGridCells - 1; i >= 0; --i) {
    for (int j = kGridCells - 1; j >= 0; --j) {
      stack.push_back({-1.0 + (2 * i + 1) * h0, -1.0 + (2 * j + 1) * h0, h0, 0});
    }
  }
  while (!stack.empty()) {
    const Box b = stack.back();
    stack.pop_back();
    // Boxes are dyadic, so these distances are exact.
    const double dx = std::max(std::abs(b.cx) - b.h, 0.0);
    const double dy = std::max(std::abs(b.cy) - b.h, 0.0);
    if (dx * dx + dy * dy > 1.0) continue;

    const Ball center(b.cx, b.cy);
    const Ball cell = center.with_radius(mul_up(XReal::from_double(b.h), sqrt2_up()));
    const auto roots = certify_fiber_roots(R.fiber(cell), R.fiber(center));
    if (static_cast<int>(roots.size()) == spec.k) {
      ++spec.boxes;
      spec.max_depth = std::max(spec.max_depth, b.depth);
      for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
          spec.min_branch_gap = min(spec.min_branch_gap, lower_gap(roots[i].disk, roots[j].disk));
        }
      }
      continue;
    }
    if (b.depth >= kMaxBoxDepth) {
      char where[96];
      std::snprintf(where, sizeof where, "(%.6g, %.6g)", b.cx, b.cy);
      throw DomainError(std::string("cannot exclude ramification of the w1-projection near w1 = ") + where +
                        "; choose coordinates in which the curve is unramified over |w1| <= 1");
    }
    const double h = b.h / 2;
    for (int sx = 1; sx >= -1; sx -= 2) {
      for (int sy = 1; sy >= -1; sy -= 2) stack.push_back({b.cx + sx * h, b.cy + sy * h, h, b.depth + 1});
    }
  }
  return spec;
}

GeneralCurveCertificate certify_general_curve_intersections(const GeneralCurveSpec& spec,
                                                            const ConstructionState& state, int m) {
  GeneralCurveCertificate gc;
  gc.k = spec.k;
  gc.diagonal = certify_intersections(state, m);
  gc.b_at_d = state.stage(m).a_at_d;
  gc.count = static_cast<std::int64_t>(spec.k) * gc.diagonal.count;
  gc.branch_gap = spec.min_branch_gap;

  const BiPoly composed = compose_w2(spec.R, assemble_P(state, m));
  gc.curve_degree = composed.total_degree();
  if (gc.curve_degree != spec.k * state.stage(m).d) {
    throw CertificationFailure("deg R(w1, P_m) = " + std::to_string(gc.curve_degree) + ", expected k d_m = " +
                                   std::to_string(spec.k * state.stage(m).d),
                               m);
  }
  gc.bezout_bound = static_cast<std::int64_t>(spec.R.total_degree()) * gc.curve_degree;

  const XReal sup = max_modulus_on_circle(gc.diagonal.reduced_poly, Disk::unit()).upper;
  gc.tail_sup = mul_up(state.epsilon.abs_upper(), sup);
  gc.max_admissible_epsilon = sup.is_zero() ? XReal::infinity() : div(gc.branch_gap, sup, Dir::Down);
  gc.cross_branch_excluded = gc.tail_sup < gc.branch_gap;
  if (!gc.cross_branch_excluded) {
    throw DomainError("cross-branch solutions not excluded: eps sup|tail| = " + gc.tail_sup.to_string() +
                          " >= branch gap " + gc.branch_gap.to_string() +
                          "; largest admissible epsilon " + gc.max_admissible_epsilon.to_string(),
                      m);
  }

  for (const LiftedPoint& p : gc.diagonal.points) {
    const UniPoly fiber = spec.R.fiber(p.w1);
    const auto roots = certify_fiber_roots(fiber, fiber);
    if (static_cast<int>(roots.size()) != spec.k) {
      throw PrecisionExhausted("fiber roots at an intersection point not isolated", m);
    }
    for (const ZeroEnclosure& t : roots) {
      gc.points.push_back({p.w1, p.w2 + t.disk.center.with_radius(t.disk.radius), p.residual});
    }
  }
  return gc;
}

}  // namespace bzcert
