#include "bzcert/taylor.hpp"

#include "bzcert/errors.hpp"

namespace bzcert {

TaylorModel::TaylorModel(FactoredPoly p) {
  orders_[0] = std::move(p);
  for (int k = 1; k < 4; ++k) orders_[k] = orders_[k - 1].derivative();
}

std::array<Ball, 3> TaylorModel::jet(const Ball& z) const {
  return {orders_[0].eval(z), orders_[1].eval(z), orders_[2].eval(z).mul_pow2(-1)};
}

XReal TaylorModel::remainder_bound(const Disk& d) const {
  if (orders_[3].is_zero()) return {};
  const XReal sup = orders_[3].eval(d.center.with_radius(d.radius)).abs_upper();
  return div(sup, XReal::from_double(6.0), Dir::Up);
}

Ball TaylorModel::enclose(const Disk& d) const {
  const auto j = jet(d.center);
  const XReal& r = d.radius;
  XReal spread = mul_up(j[1].abs_upper(), r);
  if (!j[2].is_exact_zero()) spread = add_up(spread, mul_up(j[2].abs_upper(), mul_up(r, r)));
  const XReal rem = remainder_bound(d);
  if (!rem.is_zero()) spread = add_up(spread, mul_up(rem, mul_up(r, mul_up(r, r))));
  Ball out = j[0];
  out.inflate(spread);
  return out;
}

int level_for(std::uint64_t n) {
  int level = 0;
  while ((std::uint64_t{1} << level) < n) ++level;
  return level;
}

Ball arc_midpoint(const Disk& circle, const Arc& arc) {
  // theta = 2 pi (2j + 1) / 2^(level + 1)
  const mpfr_prec_t p = working_precision() + 16;
  mpfr_t theta, s, c;
  mpfr_inits2(p, theta, s, c, static_cast<mpfr_ptr>(nullptr));
  mpfr_const_pi(theta, MPFR_RNDN);
  mpfr_mul_ui(theta, theta, 2 * arc.index + 1, MPFR_RNDN);
  mpfr_div_2ui(theta, theta, static_cast<unsigned long>(arc.level), MPFR_RNDN);
  mpfr_sin_cos(s, c, theta, MPFR_RNDN);
  // theta carries at most three roundings and sin/cos one more each, so the
  // computed unit vector is within 2^(4-p) of the exact one.
  Ball unit = Ball::from_mpfr(c, s, XReal::pow2(4 - static_cast<std::int64_t>(p)));
  mpfr_clears(theta, s, c, static_cast<mpfr_ptr>(nullptr));
  return circle.center + unit * Ball::from_xreal(circle.radius);
}

XReal arc_reach(const Disk& circle, const Arc& arc) {
  // Every arc point lies within (arc length / 2) = R pi / 2^level of the midpoint.
  static const XReal pi_up = [] {
    mpfr_t v;
    mpfr_init2(v, 64);
    mpfr_const_pi(v, MPFR_RNDU);
    const XReal r = XReal::from_mpfr(v, Dir::Up);
    mpfr_clear(v);
    return r;
  }();
  return mul_up(circle.radius, pi_up.mul_pow2(-arc.level));
}

Disk arc_disk(const Disk& circle, const Arc& arc) {
  return Disk(arc_midpoint(circle, arc), arc_reach(circle, arc));
}

}  // namespace bzcert
