#include "bzcert/ball.hpp"

#include <mutex>
#include <sstream>
#include <vector>

#include "bzcert/errors.hpp"

namespace bzcert {

namespace {

constexpr mpfr_prec_t kDefaultPrecision = 128;
thread_local mpfr_prec_t t_precision = kDefaultPrecision;

// Per-thread temporaries, re-initialized when the working precision changes.
struct Scratch {
  Scratch() {
    for (auto& t : tmp) mpfr_init2(t, kDefaultPrecision);
    mpfr_init2(small, 64);
    prec = kDefaultPrecision;
  }
  ~Scratch() {
    for (auto& t : tmp) mpfr_clear(t);
    mpfr_clear(small);
  }
  void sync() {
    const mpfr_prec_t p = t_precision;
    if (p == prec) return;
    for (auto& t : tmp) mpfr_set_prec(t, p);
    prec = p;
  }
  mpfr_t tmp[8];
  mpfr_t small;
  mpfr_prec_t prec;
};

Scratch& scratch() {
  thread_local Scratch s;
  s.sync();
  return s;
}

XReal hypot_bound(mpfr_srcptr re, mpfr_srcptr im, Dir dir) {
  Scratch& s = scratch();
  if (mpfr_zero_p(im)) return XReal::abs_from_mpfr(re, dir);
  if (mpfr_zero_p(re)) return XReal::abs_from_mpfr(im, dir);
  mpfr_hypot(s.small, re, im, dir == Dir::Up ? MPFR_RNDU : MPFR_RNDD);
  return XReal::from_mpfr(s.small, dir);
}

}  // namespace

void ensure_wide_exponent_range() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
  });
}

mpfr_prec_t working_precision() { return t_precision; }

PrecisionScope::PrecisionScope(mpfr_prec_t bits) : saved_(t_precision) {
  ensure_wide_exponent_range();
  if (bits < 32) bits = 32;
  t_precision = bits;
}

PrecisionScope::~PrecisionScope() { t_precision = saved_; }

XReal rounding_error(mpfr_srcptr x, int ternary) {
  if (ternary == 0) return {};
  if (mpfr_zero_p(x)) return XReal::pow2(mpfr_get_emin() - 1);
  return XReal::pow2(mpfr_get_exp(x) - mpfr_get_prec(x));
}

void Ball::init(mpfr_prec_t p) {
  mpfr_init2(re_, p);
  mpfr_init2(im_, p);
}

Ball::Ball() {
  ensure_wide_exponent_range();
  init(t_precision);
  mpfr_set_zero(re_, 1);
  mpfr_set_zero(im_, 1);
}

Ball::Ball(double re, double im) {
  ensure_wide_exponent_range();
  init(t_precision < 53 ? 53 : t_precision);
  mpfr_set_d(re_, re, MPFR_RNDN);
  mpfr_set_d(im_, im, MPFR_RNDN);
}

Ball::Ball(const Ball& other) : rad_(other.rad_) {
  init(other.precision());
  mpfr_set(re_, other.re_, MPFR_RNDN);
  mpfr_set(im_, other.im_, MPFR_RNDN);
}

Ball::Ball(Ball&& other) noexcept : rad_(other.rad_) {
  init(MPFR_PREC_MIN);
  mpfr_swap(re_, other.re_);
  mpfr_swap(im_, other.im_);
}

Ball& Ball::operator=(const Ball& other) {
  if (this == &other) return *this;
  if (precision() != other.precision()) {
    mpfr_set_prec(re_, other.precision());
    mpfr_set_prec(im_, other.precision());
  }
  mpfr_set(re_, other.re_, MPFR_RNDN);
  mpfr_set(im_, other.im_, MPFR_RNDN);
  rad_ = other.rad_;
  return *this;
}

Ball& Ball::operator=(Ball&& other) noexcept {
  mpfr_swap(re_, other.re_);
  mpfr_swap(im_, other.im_);
  rad_ = other.rad_;
  return *this;
}

Ball::~Ball() {
  mpfr_clear(re_);
  mpfr_clear(im_);
}

Ball Ball::from_decimal(std::string_view re, std::string_view im) {
  Ball b;
  const std::string rs(re), is(im);
  int t1 = mpfr_set_str(b.re_, rs.c_str(), 10, MPFR_RNDN);
  if (t1 == -1) throw DomainError("not a decimal number: '" + rs + "'");
  t1 = mpfr_strtofr(b.re_, rs.c_str(), nullptr, 10, MPFR_RNDN);
  int t2 = mpfr_set_str(b.im_, is.c_str(), 10, MPFR_RNDN);
  if (t2 == -1) throw DomainError("not a decimal number: '" + is + "'");
  t2 = mpfr_strtofr(b.im_, is.c_str(), nullptr, 10, MPFR_RNDN);
  b.rad_ = add_up(rounding_error(b.re_, t1), rounding_error(b.im_, t2));
  return b;
}

Ball Ball::from_ratio(long num, unsigned long den) {
  if (den == 0) throw DomainError("from_ratio: zero denominator");
  Ball b;
  mpfr_set_si(b.re_, num, MPFR_RNDN);
  const int t = mpfr_div_ui(b.re_, b.re_, den, MPFR_RNDN);
  b.rad_ = rounding_error(b.re_, t);
  return b;
}

Ball Ball::from_mpfr(mpfr_srcptr re, mpfr_srcptr im, XReal rad) {
  Ball b;
  const int t1 = mpfr_set(b.re_, re, MPFR_RNDN);
  const int t2 = mpfr_set(b.im_, im, MPFR_RNDN);
  b.rad_ = add_up(rad, add_up(rounding_error(b.re_, t1), rounding_error(b.im_, t2)));
  return b;
}

Ball Ball::from_xreal(const XReal& re) {
  if (re.is_infinite()) throw DomainError("from_xreal: infinite value");
  Ball b;
  Scratch& s = scratch();
  mpfr_set_prec(s.small, 64);
  re.to_mpfr(s.small);
  const int t = mpfr_set(b.re_, s.small, MPFR_RNDN);
  b.rad_ = rounding_error(b.re_, t);
  return b;
}

bool Ball::contains_zero() const { return abs_lower().is_zero(); }

bool Ball::is_finite() const {
  return mpfr_number_p(re_) && mpfr_number_p(im_) && !rad_.is_infinite();
}

Ball Ball::midpoint() const {
  Ball b(*this);
  b.rad_ = {};
  return b;
}

Ball Ball::with_radius(const XReal& r) const {
  Ball b(*this);
  b.rad_ = r;
  return b;
}

Ball& Ball::inflate(const XReal& r) {
  rad_ = add_up(rad_, r);
  return *this;
}

XReal Ball::mid_abs(Dir dir) const { return hypot_bound(re_, im_, dir); }

XReal Ball::abs_upper() const { return add_up(mid_abs(Dir::Up), rad_); }

XReal Ball::abs_lower() const {
  const XReal m = mid_abs(Dir::Down);
  const XReal d = sub(m, rad_, Dir::Down);
  return d.sign() > 0 ? d : XReal{};
}

double Ball::mid_arg() const {
  Scratch& s = scratch();
  mpfr_atan2(s.small, im_, re_, MPFR_RNDN);
  return mpfr_get_d(s.small, MPFR_RNDN);
}

std::complex<double> Ball::to_complex() const {
  return {mpfr_get_d(re_, MPFR_RNDN), mpfr_get_d(im_, MPFR_RNDN)};
}

std::complex<long double> Ball::to_complex_ld() const {
  return {mpfr_get_ld(re_, MPFR_RNDN), mpfr_get_ld(im_, MPFR_RNDN)};
}

std::string Ball::to_string(int digits) const {
  std::vector<char> buf(128 + 2 * digits);
  mpfr_snprintf(buf.data(), buf.size(), "(%.*Re, %.*Re) +/- ", digits - 1, re_, digits - 1, im_);
  return std::string(buf.data()) + rad_.to_string(6);
}

Ball Ball::conj() const {
  Ball b(*this);
  mpfr_neg(b.im_, b.im_, MPFR_RNDN);
  return b;
}

Ball Ball::mul_pow2(long k) const {
  Ball b(*this);
  mpfr_mul_2si(b.re_, b.re_, k, MPFR_RNDN);
  mpfr_mul_2si(b.im_, b.im_, k, MPFR_RNDN);
  b.rad_ = rad_.mul_pow2(k);
  return b;
}

Ball Ball::mul_ui(unsigned long k) const {
  Ball b;
  const int t1 = mpfr_mul_ui(b.re_, re_, k, MPFR_RNDN);
  const int t2 = mpfr_mul_ui(b.im_, im_, k, MPFR_RNDN);
  b.rad_ = add_up(mul_up(rad_, XReal::from_double(static_cast<double>(k))),
                  add_up(rounding_error(b.re_, t1), rounding_error(b.im_, t2)));
  return b;
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball r;
  const int t1 = mpfr_add(r.re_, a.re_, b.re_, MPFR_RNDN);
  const int t2 = mpfr_add(r.im_, a.im_, b.im_, MPFR_RNDN);
  r.rad_ = add_up(add_up(a.rad_, b.rad_),
                  add_up(rounding_error(r.re_, t1), rounding_error(r.im_, t2)));
  return r;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball r;
  const int t1 = mpfr_sub(r.re_, a.re_, b.re_, MPFR_RNDN);
  const int t2 = mpfr_sub(r.im_, a.im_, b.im_, MPFR_RNDN);
  r.rad_ = add_up(add_up(a.rad_, b.rad_),
                  add_up(rounding_error(r.re_, t1), rounding_error(r.im_, t2)));
  return r;
}

Ball operator-(const Ball& a) {
  Ball r(a);
  mpfr_neg(r.re_, r.re_, MPFR_RNDN);
  mpfr_neg(r.im_, r.im_, MPFR_RNDN);
  return r;
}

Ball operator*(const Ball& a, const Ball& b) {
  Scratch& s = scratch();
  Ball r;
  XReal err;
  int t = mpfr_mul(s.tmp[0], a.re_, b.re_, MPFR_RNDN);
  err = add_up(err, rounding_error(s.tmp[0], t));
  t = mpfr_mul(s.tmp[1], a.im_, b.im_, MPFR_RNDN);
  err = add_up(err, rounding_error(s.tmp[1], t));
  t = mpfr_mul(s.tmp[2], a.re_, b.im_, MPFR_RNDN);
  err = add_up(err, rounding_error(s.tmp[2], t));
  t = mpfr_mul(s.tmp[3], a.im_, b.re_, MPFR_RNDN);
  err = add_up(err, rounding_error(s.tmp[3], t));
  t = mpfr_sub(r.re_, s.tmp[0], s.tmp[1], MPFR_RNDN);
  err = add_up(err, rounding_error(r.re_, t));
  t = mpfr_add(r.im_, s.tmp[2], s.tmp[3], MPFR_RNDN);
  err = add_up(err, rounding_error(r.im_, t));
  XReal rad = err;
  if (!b.rad_.is_zero()) rad = add_up(rad, mul_up(a.mid_abs(Dir::Up), b.rad_));
  if (!a.rad_.is_zero()) rad = add_up(rad, mul_up(b.mid_abs(Dir::Up), a.rad_));
  if (!a.rad_.is_zero() && !b.rad_.is_zero()) rad = add_up(rad, mul_up(a.rad_, b.rad_));
  r.rad_ = rad;
  return r;
}

Ball operator/(const Ball& a, const Ball& b) {
  const XReal bl = b.abs_lower();
  if (bl.is_zero()) throw DomainError("division by a ball containing zero");
  Scratch& s = scratch();
  Ball inv;
  // n = |mid b|^2, inverse midpoint = conj(b) / n.
  mpfr_sqr(s.tmp[0], b.re_, MPFR_RNDN);
  mpfr_sqr(s.tmp[1], b.im_, MPFR_RNDN);
  mpfr_add(s.tmp[0], s.tmp[0], s.tmp[1], MPFR_RNDN);
  mpfr_div(inv.re_, b.re_, s.tmp[0], MPFR_RNDN);
  mpfr_div(inv.im_, b.im_, s.tmp[0], MPFR_RNDN);
  mpfr_neg(inv.im_, inv.im_, MPFR_RNDN);
  // Each component carries at most four roundings: relative error < 2^(3-p).
  const XReal comp = add_up(XReal::abs_from_mpfr(inv.re_, Dir::Up),
                            XReal::abs_from_mpfr(inv.im_, Dir::Up));
  XReal rad = mul_up(comp, XReal::pow2(3 - static_cast<std::int64_t>(inv.precision())));
  if (!b.rad_.is_zero()) {
    // |1/z - 1/m| <= r / (|m| (|m| - r)) for |z - m| <= r < |m|.
    const XReal m_low = b.mid_abs(Dir::Down);
    rad = add_up(rad, div(b.rad_, mul(m_low, bl, Dir::Down), Dir::Up));
  }
  inv.rad_ = rad;
  return a * inv;
}

Ball& Ball::operator+=(const Ball& b) { return *this = *this + b; }
Ball& Ball::operator-=(const Ball& b) { return *this = *this - b; }
Ball& Ball::operator*=(const Ball& b) { return *this = *this * b; }

void fused_mul_add(Ball& acc, const Ball& z, const XReal& z_abs_up, const Ball& c) {
  Scratch& s = scratch();
  const mpfr_prec_t p = s.prec;
  XReal acc_abs;
  if (!z.rad_.is_zero()) acc_abs = acc.mid_abs(Dir::Up);
  XReal err;
  int t = mpfr_mul(s.tmp[0], acc.re_, z.re_, MPFR_RNDN);
  err = add_up(err, rounding_error(s.tmp[0], t));
  t = mpfr_mul(s.tmp[1], acc.im_, z.im_, MPFR_RNDN);
  err = add_up(err, rounding_error(s.tmp[1], t));
  t = mpfr_mul(s.tmp[2], acc.re_, z.im_, MPFR_RNDN);
  err = add_up(err, rounding_error(s.tmp[2], t));
  t = mpfr_mul(s.tmp[3], acc.im_, z.re_, MPFR_RNDN);
  err = add_up(err, rounding_error(s.tmp[3], t));
  t = mpfr_sub(s.tmp[4], s.tmp[0], s.tmp[1], MPFR_RNDN);
  err = add_up(err, rounding_error(s.tmp[4], t));
  t = mpfr_add(s.tmp[5], s.tmp[2], s.tmp[3], MPFR_RNDN);
  err = add_up(err, rounding_error(s.tmp[5], t));
  if (acc.precision() != p) {
    mpfr_set_prec(acc.re_, p);
    mpfr_set_prec(acc.im_, p);
  }
  t = mpfr_add(acc.re_, s.tmp[4], c.re_, MPFR_RNDN);
  err = add_up(err, rounding_error(acc.re_, t));
  t = mpfr_add(acc.im_, s.tmp[5], c.im_, MPFR_RNDN);
  err = add_up(err, rounding_error(acc.im_, t));

  XReal rad = add_up(err, c.rad_);
  if (!acc.rad_.is_zero()) rad = add_up(rad, mul_up(z_abs_up, acc.rad_));
  if (!z.rad_.is_zero()) {
    rad = add_up(rad, mul_up(acc_abs, z.rad_));
    if (!acc.rad_.is_zero()) rad = add_up(rad, mul_up(acc.rad_, z.rad_));
  }
  acc.rad_ = rad;
}

}  // namespace bzcert
