#include <mpfr.h>

#include <cmath>
#include <random>

#include "bzcert/errors.hpp"
#include "bzcert/factored.hpp"
#include "bzcert/norms.hpp"
#include "bzcert/taylor.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace bzcert;

namespace {

// 4x the working precision, enough to hold products and sums exactly.
constexpr mpfr_prec_t kWork = 128;
constexpr mpfr_prec_t kWide = 4 * kWork;

struct Wide {
  mpfr_t re, im;
  Wide() {
    mpfr_init2(re, kWide);
    mpfr_init2(im, kWide);
    mpfr_set_zero(re, 1);
    mpfr_set_zero(im, 1);
  }
  ~Wide() {
    mpfr_clear(re);
    mpfr_clear(im);
  }
  Wide(const Wide&) = delete;
  Wide& operator=(const Wide&) = delete;
};

// A point of the ball: midpoint plus a random offset of length <= radius.
void sample_point(const Ball& b, std::mt19937_64& rng, Wide& out) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double x = u(rng), y = u(rng);
  const double n = std::hypot(x, y);
  if (n > 1) {
    x /= n;
    y /= n;
  }
  mpfr_t r;
  mpfr_init2(r, kWide);
  b.rad().to_mpfr(r);
  mpfr_mul_d(r, r, 0.999 * x, MPFR_RNDZ);
  mpfr_add(out.re, b.re(), r, MPFR_RNDN);
  b.rad().to_mpfr(r);
  mpfr_mul_d(r, r, 0.999 * y, MPFR_RNDZ);
  mpfr_add(out.im, b.im(), r, MPFR_RNDN);
  mpfr_clear(r);
}

// |exact - mid(result)| <= rad(result), with the distance taken at wide precision.
bool contains(const Ball& result, const Wide& exact) {
  mpfr_t dx, dy, r;
  mpfr_inits2(kWide, dx, dy, r, static_cast<mpfr_ptr>(nullptr));
  mpfr_sub(dx, exact.re, result.re(), MPFR_RNDN);
  mpfr_sub(dy, exact.im, result.im(), MPFR_RNDN);
  mpfr_hypot(dx, dx, dy, MPFR_RNDN);
  result.rad().to_mpfr(r);
  // allow the wide computation's own rounding
  mpfr_mul_d(r, r, 1.0 + 1e-30, MPFR_RNDU);
  const bool ok = mpfr_lessequal_p(dx, r);
  mpfr_clears(dx, dy, r, static_cast<mpfr_ptr>(nullptr));
  return ok;
}

Ball random_ball(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_int_distribution<int> e(-60, 4);
  std::uniform_int_distribution<int> coin(0, 3);
  Ball b(u(rng), u(rng));
  // push some bits below the double range to exercise 128-bit midpoints
  b = b + Ball(u(rng), u(rng)).mul_pow2(-70);
  if (coin(rng) != 0) b = b.with_radius(XReal::from_double(std::ldexp(std::abs(u(rng)), e(rng))));
  return b;
}

void wide_mul(const Wide& a, const Wide& b, Wide& out) {
  mpfr_t t;
  mpfr_init2(t, kWide);
  mpfr_mul(out.re, a.re, b.re, MPFR_RNDN);
  mpfr_mul(t, a.im, b.im, MPFR_RNDN);
  mpfr_sub(out.re, out.re, t, MPFR_RNDN);
  mpfr_mul(out.im, a.re, b.im, MPFR_RNDN);
  mpfr_mul(t, a.im, b.re, MPFR_RNDN);
  mpfr_add(out.im, out.im, t, MPFR_RNDN);
  mpfr_clear(t);
}

bool same(const Ball& a, const Ball& b) {
  return mpfr_equal_p(a.re(), b.re()) && mpfr_equal_p(a.im(), b.im()) && a.rad() == b.rad();
}

bool same(const BiPoly& a, const BiPoly& b) {
  if (a.terms().size() != b.terms().size()) return false;
  for (const auto& [k, c] : a.terms()) {
    if (!same(c, b.coeff(k.first, k.second))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("xreal directed rounding brackets the exact result") {
  const XReal third_dn = div(XReal::from_double(1.0), XReal::from_double(3.0), Dir::Down);
  const XReal third_up = div(XReal::from_double(1.0), XReal::from_double(3.0), Dir::Up);
  CHECK(third_dn < third_up);
  CHECK(mul(third_dn, XReal::from_double(3.0), Dir::Down) < XReal::from_double(1.0));
  CHECK(XReal::from_double(1.0) < mul(third_up, XReal::from_double(3.0), Dir::Up));
  const XReal tiny = XReal::pow2(-100000);
  CHECK(tiny.sign() > 0);
  CHECK(tiny.to_string(4) == "1.001e-30103");
  CHECK(XReal::parse_hex(tiny.to_hex()) == tiny);
  CHECK(XReal::from_double(0.75).floor_pow2() == XReal::pow2(-1));
}

TEST_CASE("ball addition of exact integers is exact") {
  const Ball s = Ball(1.0) + Ball(0.0, 1.0);
  CHECK(s.is_exact());
  CHECK(s.to_complex() == std::complex<double>(1.0, 1.0));
}

TEST_CASE("abs lower bound of a ball around the origin is zero") {
  const Ball b = Ball(0.0).with_radius(XReal::from_double(0.5));
  CHECK(b.abs_lower().is_zero());
  CHECK(b.abs_upper() == XReal::from_double(0.5));
  CHECK(b.contains_zero());
}

TEST_CASE("division by a ball containing zero is rejected") {
  CHECK_THROWS_AS(Ball(1.0) / Ball(0.0).with_radius(XReal::from_double(0.1)), DomainError);
}

TEST_CASE("ball operations contain exact results at four times the precision") {
  PrecisionScope scope(kWork);
  std::mt19937_64 rng(12345);
  int failures = 0;
  int control = 0;
  for (int trial = 0; trial < 1000000; ++trial) {
    const Ball a = random_ball(rng);
    const Ball b = random_ball(rng);
    Wide x, y, z;
    sample_point(a, rng, x);
    sample_point(b, rng, y);
    wide_mul(x, y, z);
    failures += !contains(a * b, z);
    // negative control: dropping the radius must be detectable
    control += !contains((a * b).midpoint(), z);
    if (trial % 10 == 0) {
      mpfr_add(z.re, x.re, y.re, MPFR_RNDN);
      mpfr_add(z.im, x.im, y.im, MPFR_RNDN);
      failures += !contains(a + b, z);
      mpfr_sub(z.re, x.re, y.re, MPFR_RNDN);
      mpfr_sub(z.im, x.im, y.im, MPFR_RNDN);
      failures += !contains(a - b, z);
      const XReal lo = a.abs_lower(), hi = a.abs_upper();
      mpfr_t m, t;
      mpfr_inits2(kWide, m, t, static_cast<mpfr_ptr>(nullptr));
      mpfr_hypot(m, x.re, x.im, MPFR_RNDN);
      lo.to_mpfr(t);
      failures += mpfr_less_p(m, t);
      hi.to_mpfr(t);
      failures += mpfr_greater_p(m, t);
      mpfr_clears(m, t, static_cast<mpfr_ptr>(nullptr));
    }
    if (trial % 10 == 5 && !b.contains_zero()) {
      // x / y == w  <=>  check w * y == x up to the wide rounding
      const Ball q = a / b;
      Wide w;
      // exact quotient at wide precision
      mpfr_t den, t;
      mpfr_inits2(kWide, den, t, static_cast<mpfr_ptr>(nullptr));
      mpfr_sqr(den, y.re, MPFR_RNDN);
      mpfr_sqr(t, y.im, MPFR_RNDN);
      mpfr_add(den, den, t, MPFR_RNDN);
      mpfr_mul(w.re, x.re, y.re, MPFR_RNDN);
      mpfr_mul(t, x.im, y.im, MPFR_RNDN);
      mpfr_add(w.re, w.re, t, MPFR_RNDN);
      mpfr_div(w.re, w.re, den, MPFR_RNDN);
      mpfr_mul(w.im, x.im, y.re, MPFR_RNDN);
      mpfr_mul(t, x.re, y.im, MPFR_RNDN);
      mpfr_sub(w.im, w.im, t, MPFR_RNDN);
      mpfr_div(w.im, w.im, den, MPFR_RNDN);
      mpfr_clears(den, t, static_cast<mpfr_ptr>(nullptr));
      failures += !contains(q, w);
    }
  }
  CHECK(failures == 0);
  CHECK(control > 100000);
}

TEST_CASE("evaluation of w^2 + 1 at i contains zero") {
  const UniPoly p({Ball(1.0), Ball(0.0), Ball(1.0)});
  CHECK(p.eval(Ball(0.0, 1.0)).contains_zero());
}

TEST_CASE("the zero polynomial evaluates to an exact zero") {
  const UniPoly z;
  CHECK(z.degree() == -1);
  CHECK(z.eval(Ball(0.3, 0.7)).is_exact_zero());
  CHECK((z * UniPoly::linear(Ball(2.0))).is_zero());
  CHECK(z.derivative().is_zero());
}

TEST_CASE("random degree-20 evaluation contains the wide-precision value") {
  PrecisionScope scope(kWork);
  std::mt19937_64 rng(7);
  int failures = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<Ball> c;
    for (int k = 0; k <= 20; ++k) c.push_back(random_ball(rng));
    const UniPoly p(c);
    Ball z = random_ball(rng);
    z = z.mul_pow2(-2);
    const Ball v = p.eval(z);
    Wide x, acc, coef;
    sample_point(z, rng, x);
    for (int k = 20; k >= 0; --k) {
      Wide t;
      wide_mul(acc, x, t);
      sample_point(c[static_cast<std::size_t>(k)], rng, coef);
      mpfr_add(acc.re, t.re, coef.re, MPFR_RNDN);
      mpfr_add(acc.im, t.im, coef.im, MPFR_RNDN);
    }
    failures += !contains(v, acc);
  }
  CHECK(failures == 0);
}

TEST_CASE("sparse evaluation path agrees with dense containment") {
  PrecisionScope scope(kWork);
  const UniPoly p = UniPoly::monomial(225) - UniPoly::constant(Ball(1.0).mul_pow2(-450));
  const Ball z(0.25, 0.0);
  CHECK(p.eval(z).contains_zero());
  const Ball z2(0.3, 0.1);
  const Ball direct = ipow(z2, 225) - Ball(1.0).mul_pow2(-450);
  const Ball v = p.eval(z2);
  CHECK((v - direct).abs_upper() <= add_up(v.rad(), direct.rad()));
}

TEST_CASE("derivatives") {
  const UniPoly w3 = UniPoly::monomial(3);
  const UniPoly d = w3.derivative();
  CHECK(d.degree() == 2);
  CHECK(d.coeff(2).to_complex() == std::complex<double>(3.0));
  CHECK(UniPoly::constant(Ball(5.0)).derivative().is_zero());
  const UniPoly q = pow(UniPoly::linear(Ball(2.0)), 4);
  CHECK(q.derivative().eval(Ball(2.0)).contains_zero());
}

TEST_CASE("(w-2)^2 (w-1/4) expands to w^3 - 17/4 w^2 + 5 w - 1") {
  const UniPoly p = pow(UniPoly::linear(Ball(2.0)), 2) * UniPoly::linear(Ball(0.25));
  using oracle::QC;
  const oracle::QPoly expected{QC(-1), QC(5), QC(mpq_class(-17, 4)), QC(1)};
  CHECK(oracle::equals_exactly(p, expected));
  const oracle::QPoly lin2{QC(-2), QC(1)}, lin4{QC(mpq_class(-1, 4)), QC(1)};
  CHECK(oracle::equals_exactly(p, oracle::mul(oracle::power(lin2, 2), lin4)));
  CHECK(p.degree() == 3);
}

TEST_CASE("degree additivity of products") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const int a = static_cast<int>(rng() % 12), b = static_cast<int>(rng() % 12);
    const UniPoly p = oracle::to_uni(oracle::random_poly(rng, a));
    const UniPoly q = oracle::to_uni(oracle::random_poly(rng, b));
    CHECK((p * q).degree() == a + b);
  }
}

TEST_CASE("homogenization examples") {
  const TriHomPoly h1 = homogenize(BiPoly::w2(), 1);
  CHECK(h1.degree() == 1);
  CHECK(h1.terms().size() == 1);
  CHECK(h1.coeff({0, 0, 1}).to_complex() == std::complex<double>(1.0));
  CHECK(same(dehomogenize(h1), BiPoly::w2()));

  const BiPoly p = BiPoly::w2() - pow(BiPoly::w1(), 3);
  const TriHomPoly h = homogenize(p, 3);
  CHECK(h.terms().size() == 2);
  CHECK(h.coeff({2, 0, 1}).to_complex() == std::complex<double>(1.0));
  CHECK(h.coeff({0, 3, 0}).to_complex() == std::complex<double>(-1.0));
  CHECK(same(dehomogenize(h), p));
  // substitution check at a random projective point
  const Ball z0(0.7, 0.2), z1(-0.3, 0.5), z2(0.9, -0.4);
  const Ball lhs = h.eval(z0, z1, z2);
  const Ball rhs = p.eval(z1 / z0, z2 / z0) * z0 * z0 * z0;
  CHECK((lhs - rhs).contains_zero());
  CHECK_THROWS_AS(homogenize(p, 2), DomainError);
}

TEST_CASE("homogenize and dehomogenize round trip on random polynomials") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    BiPoly p;
    const int terms = 1 + static_cast<int>(rng() % 8);
    for (int k = 0; k < terms; ++k) p.set(static_cast<int>(rng() % 6), static_cast<int>(rng() % 6), Ball(u(rng), u(rng)));
    if (p.is_zero()) continue;
    const int extra = static_cast<int>(rng() % 3);
    const TriHomPoly h = homogenize(p, p.total_degree() + extra);
    for (const auto& [e, c] : h.terms()) CHECK(e[0] + e[1] + e[2] == h.degree());
    CHECK(same(dehomogenize(h), p));
  }
}

TEST_CASE("bivariate total degree and composition") {
  const BiPoly r = pow(BiPoly::w2(), 2) - (BiPoly::w1() - BiPoly::constant(Ball(3.0))) * (BiPoly::w1() - BiPoly::constant(Ball(4.0)));
  CHECK(r.total_degree() == 2);
  CHECK(r.degree_w2() == 2);
  const BiPoly p = BiPoly::w2() - pow(BiPoly::w1(), 3);
  CHECK(compose_w2(r, p).total_degree() == 6);
  const UniPoly f = r.fiber(Ball(1.0));
  CHECK(f.degree() == 2);
  CHECK(f.coeff(0).to_complex() == std::complex<double>(-6.0));
}

TEST_CASE("c1 norm of w on the unit disk is one up to refinement") {
  const SupBound b = c1_norm_upper(FactoredPoly(UniPoly::monomial(1)), Disk::unit());
  CHECK(XReal::from_double(1.0) <= b.upper);
  CHECK(b.upper <= XReal::from_double(1.05));
  CHECK(c1_norm_upper(FactoredPoly(UniPoly()), Disk::unit()).upper.is_zero());
}

TEST_CASE("sup bounds dominate boundary sampling") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 40; ++t) {
    const auto a = oracle::random_poly(rng, 15);
    const UniPoly p = oracle::to_uni(a);
    const SupBound s = max_modulus_on_circle(FactoredPoly(p), Disk::unit());
    const SupBound c1 = c1_norm_upper(FactoredPoly(p), Disk::unit());
    const auto ld = oracle::to_ld(p);
    const long double m0 = oracle::sampled_max(ld, 0, 1, 4096);
    const long double m1 = oracle::sampled_max(oracle::derivative(ld), 0, 1, 4096);
    CHECK(static_cast<long double>(s.upper.to_double()) >= m0);
    CHECK(static_cast<long double>(c1.upper.to_double()) >= std::max(m0, m1));
    CHECK(s.upper.to_double() <= 1.06 * static_cast<double>(m0) + 1e-12);
    // the largest interior value never exceeds the certified boundary bound
    CHECK(static_cast<long double>(s.upper.to_double()) >= oracle::sampled_max(ld, 0, 0.5L, 512));
  }
}

TEST_CASE("factored polynomials expand and differentiate like their dense forms") {
  PrecisionScope scope(kWork);
  const UniPoly q = UniPoly::monomial(9) - UniPoly::constant(Ball(1.0).mul_pow2(-18));
  const FactoredPoly f = FactoredPoly::product(Ball(1.0).mul_pow2(-30), Ball(2.0), 6, q);
  const UniPoly dense = pow(UniPoly::linear(Ball(2.0)), 6) * q;
  using oracle::QC;
  oracle::QPoly exact = oracle::mul(oracle::power({QC(-2), QC(1)}, 6), [&] {
    oracle::QPoly e(10);
    e[0] = QC(mpq_class(-1, 262144));
    e[9] = QC(1);
    return e;
  }());
  exact = oracle::scale(exact, QC(mpq_class(1, 1073741824)));
  CHECK(oracle::equals_exactly(f.dense(), exact));
  CHECK(oracle::equals_exactly(dense.scaled(Ball(1.0).mul_pow2(-30)), exact));
  const FactoredPoly df = f.derivative();
  CHECK(df.degree() == 14);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Ball z = random_ball(rng).mul_pow2(-2).midpoint();
    const Ball a = df.eval(z), b = f.dense().derivative().eval(z);
    CHECK((a - b).contains_zero());
    CHECK((f.eval(z) - f.dense().eval(z)).contains_zero());
  }
}

TEST_CASE("taylor model enclosures contain sampled values") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const auto a = oracle::random_poly(rng, 12);
    const UniPoly p = oracle::to_uni(a);
    const TaylorModel m{FactoredPoly(p)};
    const Disk d(u(rng) * 0.5, u(rng) * 0.5, 0.1);
    const Ball enc = m.enclose(d);
    for (int s = 0; s < 20; ++s) {
      const std::complex<double> w = d.center.to_complex() + std::polar(0.1 * std::abs(u(rng)), 3.14159 * u(rng));
      CHECK((p.eval(Ball(w)) - enc.midpoint()).abs_lower() <= enc.rad());
    }
  }
}
