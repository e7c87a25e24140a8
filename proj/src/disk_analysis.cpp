#include "bzcert/disk_analysis.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bzcert/errors.hpp"

namespace bzcert {

namespace {

using cld = std::complex<long double>;

constexpr int kWindingExtraLevels = 40;
constexpr int kMinExtraLevels = 40;
constexpr std::size_t kArcBudget = std::size_t{1} << 22;

// Bound a bit above sqrt(2): a disk of radius r around a point at distance
// more than sqrt(2) r from the origin subtends an angle below pi/2.
const XReal& sqrt2_up() {
  static const XReal v = XReal::from_double(1.4142135623730951 * (1.0 + 0x1p-50));
  return v;
}


// Midpoint ball lies in a sector of half-angle < pi/4 around its own argument.
bool narrow_sector(const Ball& b) {
  if (b.mid_is_zero()) return false;
  return mul_up(b.rad(), sqrt2_up()) < b.mid_abs(Dir::Down);
}

long double wrap(long double a) {
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  while (a > std::numbers::pi_v<long double>) a -= two_pi;
  while (a <= -std::numbers::pi_v<long double>) a += two_pi;
  return a;
}

cld to_ld(mpfr_srcptr re, mpfr_srcptr im, long shift) {
  auto part = [shift](mpfr_srcptr x) -> long double {
    if (mpfr_zero_p(x)) return 0.0L;
    long e = 0;
    const long double m = mpfr_get_ld_2exp(&e, x, MPFR_RNDN);
    return std::ldexp(m, static_cast<int>(std::clamp<long>(e - shift, -20000, 20000)));
  };
  return {part(re), part(im)};
}

void horner_ld(const std::vector<cld>& a, cld z, cld& v, cld& dv) {
  v = a.back();
  dv = 0;
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    dv = dv * z + v;
    v = v * z + a[k];
  }
}

// Bini's initial points: circles whose radii come from the upper convex hull
// of (k, log|a_k|).
std::vector<cld> newton_polygon_start(const std::vector<cld>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<int> idx;
  std::vector<long double> lg;
  for (int k = 0; k <= n; ++k) {
    if (std::abs(a[k]) == 0.0L) continue;
    const long double y = std::log(std::abs(a[k]));
    while (idx.size() >= 2) {
      const int i0 = idx[idx.size() - 2], i1 = idx.back();
      const long double y0 = lg[lg.size() - 2], y1 = lg.back();
      // Drop i1 when it lies on or below the chord from i0 to k.
      if ((y1 - y0) * (k - i0) <= (y - y0) * (i1 - i0)) {
        idx.pop_back();
        lg.pop_back();
      } else {
        break;
      }
    }
    idx.push_back(k);
    lg.push_back(y);
  }
  std::vector<cld> z;
  z.reserve(n);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::size_t s = 0; s + 1 < idx.size(); ++s) {
    const int span = idx[s + 1] - idx[s];
    const long double r = std::exp((lg[s] - lg[s + 1]) / span);
    for (int j = 0; j < span; ++j) {
      const long double t = two_pi * j / span + two_pi * s / n + 0.7L;
      z.push_back(std::polar(r, t));
    }
  }
  return z;
}

}  // namespace

std::vector<cld> approximate_roots(const UniPoly& p) {
  if (p.degree() < 1) return {};
  // Scale all coefficients by a common power of two to stay in range.
  long top = LONG_MIN;
  for (const Ball& c : p.coeffs()) {
    if (!mpfr_zero_p(c.re())) top = std::max(top, static_cast<long>(mpfr_get_exp(c.re())));
    if (!mpfr_zero_p(c.im())) top = std::max(top, static_cast<long>(mpfr_get_exp(c.im())));
  }
  std::vector<cld> a;
  a.reserve(p.coeffs().size());
  for (const Ball& c : p.coeffs()) a.push_back(to_ld(c.re(), c.im(), top));
  while (a.size() > 1 && std::abs(a.back()) == 0.0L) a.pop_back();

  std::vector<cld> roots;
  std::size_t low = 0;
  while (low + 1 < a.size() && std::abs(a[low]) == 0.0L) ++low;
  roots.assign(low, cld(0));
  a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(low));
  const int n = static_cast<int>(a.size()) - 1;
  if (n < 1) return roots;
  if (n == 1) {
    roots.push_back(-a[0] / a[1]);
    return roots;
  }

  std::vector<cld> z = newton_polygon_start(a);
  std::vector<char> done(n, 0);
  const long double eps = std::numeric_limits<long double>::epsilon();
  for (int sweep = 0; sweep < 600; ++sweep) {
    bool all = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      cld v, dv;
      horner_ld(a, z[i], v, dv);
      if (v == cld(0)) {
        done[i] = 1;
        continue;
      }
      const cld ratio = v / dv;
      cld s = 0;
      for (int j = 0; j < n; ++j) {
        if (j != i) s += 1.0L / (z[i] - z[j]);
      }
      const cld w = ratio / (1.0L - ratio * s);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
      z[i] -= w;
      if (std::abs(w) <= 8 * eps * std::max(std::abs(z[i]), 1e-300L)) {
        done[i] = 1;
      } else {
        all = false;
      }
    }
    if (all) break;
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

Ball polish_root(const FactoredPoly& p, const FactoredPoly& dp, Ball z) {
  z = z.midpoint();
  const long prec = static_cast<long>(working_precision());
  for (int it = 0; it < 64; ++it) {
    const Ball v = p.eval(z).midpoint();
    const Ball dv = dp.eval(z).midpoint();
    if (v.mid_is_zero() || dv.mid_is_zero()) break;
    const Ball step = (v / dv).midpoint();
    z = (z - step).midpoint();
    const XReal size = max(z.mid_abs(Dir::Up), XReal::pow2(-prec));
    if (step.mid_abs(Dir::Up) <= size.mul_pow2(4 - prec)) break;
  }
  return z;
}

int count_zeros_winding(const FactoredPoly& p, const Disk& disk) {
  if (p.is_zero()) throw DomainError("winding number of the zero polynomial");
  if (p.degree() == 0) {
    if (p.dense().coeffs()[0].contains_zero()) throw PrecisionExhausted("constant polynomial not separated from 0");
    return 0;
  }
  const TaylorModel model(p);
  const int base = level_for(16);

  std::vector<Arc> stack;
  for (std::uint64_t j = std::uint64_t{1} << base; j-- > 0;) stack.push_back({j, base});
  std::vector<long double> args;
  std::size_t processed = 0;
  while (!stack.empty()) {
    const Arc arc = stack.back();
    stack.pop_back();
    const Ball enc = model.enclose(Disk(arc_midpoint(disk, arc), arc_reach(disk, arc)));
    if (narrow_sector(enc)) {
      // Arcs are visited in angular order (left child first).
      args.push_back(static_cast<long double>(enc.mid_arg()));
      continue;
    }
    if (arc.level >= base + kWindingExtraLevels || ++processed > kArcBudget) {
      throw PrecisionExhausted("cannot exclude a zero near the boundary circle");
    }
    stack.push_back(arc.right());
    stack.push_back(arc.left());
  }
  long double total = 0;
  for (std::size_t k = 0; k < args.size(); ++k) {
    total += wrap(args[(k + 1) % args.size()] - args[k]);
  }
  const long double turns = total / (2.0L * std::numbers::pi_v<long double>);
  const long double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.25L) throw PrecisionExhausted("ambiguous winding number");
  return static_cast<int>(rounded);
}

InfBound min_modulus_on_circle(const FactoredPoly& p, const Disk& circle, double tightness) {
  if (p.is_zero()) throw DomainError("minimum modulus of the zero polynomial");
  if (p.degree() == 0) {
    const XReal lo = p.dense().coeffs()[0].abs_lower();
    if (lo.is_zero()) throw PrecisionExhausted("constant not separated from 0");
    return {lo, p.dense().coeffs()[0].abs_upper()};
  }
  const TaylorModel model(p);
  const XReal factor = XReal::from_double(tightness);
  const int base = level_for(8);

  XReal best = XReal::infinity();
  for (std::uint64_t j = 0; j < (std::uint64_t{1} << base); ++j) {
    best = min(best, model.value(arc_midpoint(circle, {j, base})).abs_upper());
  }

  std::vector<Arc> stack;
  for (std::uint64_t j = std::uint64_t{1} << base; j-- > 0;) stack.push_back({j, base});
  XReal lower = XReal::infinity();
  std::size_t processed = 0;
  while (!stack.empty()) {
    const Arc arc = stack.back();
    stack.pop_back();
    const Ball mid = arc_midpoint(circle, arc);
    const XReal lb = model.enclose(Disk(mid, arc_reach(circle, arc))).abs_lower();
    if (arc.level > base) best = min(best, model.value(mid).abs_upper());
    ++processed;
    const bool settled = !lb.is_zero() && best <= mul(factor, lb, Dir::Down);
    const bool out_of_budget =
        arc.level >= base + kMinExtraLevels || processed + stack.size() > kArcBudget;
    if (settled || (out_of_budget && !lb.is_zero())) {
      lower = min(lower, lb);
      continue;
    }
    if (out_of_budget) throw PrecisionExhausted("cannot bound |p| away from 0 on the circle");
    stack.push_back(arc.right());
    stack.push_back(arc.left());
  }
  return {lower, best};
}

std::optional<ZeroEnclosure> certify_simple_zero(const TaylorModel& p, const TaylorModel& dp,
                                                 const Ball& z, const XReal& rho_max) {
  const auto j = p.jet(z);
  const XReal slope = j[1].abs_lower();
  if (slope.is_zero() || rho_max.is_zero()) return std::nullopt;
  const XReal b0 = j[0].abs_upper();
  const XReal b2 = j[2].abs_upper();
  const long prec = static_cast<long>(working_precision());

  XReal rho = max(div(b0, slope, Dir::Up).mul_pow2(2), rho_max.mul_pow2(-prec / 2));
  rho = max(rho, rho_max.mul_pow2(-4 * prec));
  for (; rho <= rho_max; rho = rho.mul_pow2(3)) {
    const Disk d(z, rho);
    const XReal rho2 = mul_up(rho, rho);
    const XReal err =
        add_up(add_up(b0, mul_up(b2, rho2)), mul_up(p.remainder_bound(d), mul_up(rho2, rho)));
    if (!(err < mul(slope, rho, Dir::Down))) continue;

    const auto dj = dp.jet(z);
    XReal loss = add_up(mul_up(dj[1].abs_upper(), rho), mul_up(dj[2].abs_upper(), rho2));
    loss = add_up(loss, mul_up(dp.remainder_bound(d), mul_up(rho2, rho)));
    const XReal dlow = sub(dj[0].abs_lower(), loss, Dir::Down);
    if (dlow.sign() <= 0) return std::nullopt;
    return ZeroEnclosure{d, dlow, true};
  }
  return std::nullopt;
}

std::vector<ZeroEnclosure> locate_zeros(const FactoredPoly& p, const Disk& disk) {
  const int n = count_zeros_winding(p, disk);
  if (n == 0) return {};

  const std::vector<cld> approx = approximate_roots(p.dense());
  const cld c = disk.center.to_complex_ld();
  const long double R = static_cast<long double>(disk.radius.to_double());

  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    if (std::abs(approx[i] - c) < 1.05L * R) cand.push_back(i);
  }

  const FactoredPoly dp = p.derivative();
  const TaylorModel model(p);
  const TaylorModel dmodel(dp);
  std::vector<ZeroEnclosure> found;
  for (std::size_t i : cand) {
    long double sep = std::numeric_limits<long double>::infinity();
    for (std::size_t k = 0; k < approx.size(); ++k) {
      if (k != i) sep = std::min(sep, std::abs(approx[k] - approx[i]));
    }
    sep = std::min(sep, 2 * R);
    if (!(sep > 0)) continue;
    const Ball z0 = polish_root(p, dp, Ball(static_cast<double>(approx[i].real()),
                                            static_cast<double>(approx[i].imag())));
    // Long double approximations carry more digits than the double seed;
    // Newton recovers them at the working precision.
    auto enc = certify_simple_zero(model, dmodel, z0,
                                   XReal::from_double(static_cast<double>(sep / 2)));
    if (!enc) continue;
    const XReal reach = add_up((enc->disk.center - disk.center).abs_upper(), enc->disk.radius);
    if (!(reach < disk.radius)) continue;
    bool overlaps = false;
    for (const ZeroEnclosure& e : found) {
      const XReal gap = (enc->disk.center - e.disk.center).abs_lower();
      if (!(add_up(enc->disk.radius, e.disk.radius) < gap)) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps) found.push_back(std::move(*enc));
  }
  if (static_cast<int>(found.size()) != n) {
    throw PrecisionExhausted("isolated " + std::to_string(found.size()) + " of " +
                             std::to_string(n) + " zeros as simple");
  }
  return found;
}

StabilityRadius stability_radius(const FactoredPoly& p, const Disk& disk,
                                 const std::vector<ZeroEnclosure>& zeros,
                                 std::optional<XReal> separation) {
  StabilityRadius out;
  out.boundary_min = min_modulus_on_circle(p, disk).lower;
  if (zeros.empty()) {
    out.circle_min = XReal::infinity();
    out.derivative_min = XReal::infinity();
    out.delta = out.boundary_min.mul_pow2(-1);
    return out;
  }

  XReal r = XReal::infinity();
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const Disk& a = zeros[i].disk;
    const XReal to_edge = sub(sub(disk.radius, (a.center - disk.center).abs_upper(), Dir::Down),
                              a.radius, Dir::Down);
    r = min(r, to_edge);
    for (std::size_t k = i + 1; k < zeros.size(); ++k) {
      const Disk& b = zeros[k].disk;
      r = min(r, sub((a.center - b.center).abs_lower(), add_up(a.radius, b.radius), Dir::Down));
    }
  }
  if (separation) {
    // Circles must stay disjoint and inside the disk.
    if (!(separation->sign() > 0) || !(separation->mul_pow2(1) <= r)) {
      throw DomainError("separation radius too large for the given zeros");
    }
    r = *separation;
  } else {
    r = div(r, XReal::from_double(3.0), Dir::Down);
  }
  if (r.sign() <= 0) throw PrecisionExhausted("zero enclosures too wide for a separation radius");

  const FactoredPoly dp = p.derivative();
  const int attempts = separation ? 1 : 5;
  for (int attempt = 0; attempt < attempts; ++attempt, r = r.mul_pow2(-1)) {
    XReal circle_min = XReal::infinity();
    XReal deriv_min = XReal::infinity();
    bool derivative_vanishes = false;
    for (const ZeroEnclosure& z : zeros) {
      if (!(z.disk.radius < r)) throw PrecisionExhausted("zero enclosure wider than the separation radius");
      const Disk small(z.disk.center, r);
      // |p'| attains its minimum over the disk on the boundary once p' is
      // known to have no zero inside.
      if (count_zeros_winding(dp, small) != 0) {
        derivative_vanishes = true;
        break;
      }
      circle_min = min(circle_min, min_modulus_on_circle(p, small).lower);
      deriv_min = min(deriv_min, min_modulus_on_circle(dp, small).lower);
    }
    if (derivative_vanishes) continue;
    out.separation = r;
    out.circle_min = circle_min;
    out.derivative_min = deriv_min;
    out.delta = min(out.boundary_min, min(circle_min, deriv_min)).mul_pow2(-1);
    return out;
  }
  throw PrecisionExhausted("p' vanishes near a zero at every separation radius tried");
}

}  // namespace bzcert
