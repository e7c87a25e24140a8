#include "bzcert/xreal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bzcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nudges a correctly rounded result so it lies on the requested side of the
// exact value, given the sign of (exact - rounded).
double nudge(double s, double residual, Dir dir) {
  if (residual > 0 && dir == Dir::Up) return std::nextafter(s, kInf);
  if (residual < 0 && dir == Dir::Down) return std::nextafter(s, -kInf);
  return s;
}

struct TempMpfr {
  explicit TempMpfr(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~TempMpfr() { mpfr_clear(v); }
  TempMpfr(const TempMpfr&) = delete;
  TempMpfr& operator=(const TempMpfr&) = delete;
  mpfr_t v;
};

}  // namespace

XReal XReal::make(double m, std::int64_t e) {
  XReal r;
  if (m == 0.0) return r;
  int k = 0;
  r.m_ = std::frexp(m, &k);
  r.e_ = e + k;
  return r;
}

XReal XReal::from_double(double v) {
  if (std::isinf(v)) {
    if (v < 0) throw std::domain_error("XReal: negative infinity");
    return infinity();
  }
  if (std::isnan(v)) throw std::domain_error("XReal: NaN");
  return make(v, 0);
}

XReal XReal::pow2(std::int64_t e) {
  XReal r;
  r.m_ = 0.5;
  r.e_ = e + 1;
  return r;
}

XReal XReal::infinity() {
  XReal r;
  r.inf_ = true;
  r.m_ = 1.0;
  return r;
}

XReal XReal::from_mpfr(mpfr_srcptr x, Dir dir) {
  if (mpfr_zero_p(x)) return {};
  if (mpfr_inf_p(x)) {
    if (mpfr_sgn(x) < 0) throw std::domain_error("XReal: negative infinity");
    return infinity();
  }
  if (mpfr_nan_p(x)) throw std::domain_error("XReal: NaN");
  long e = 0;
  double m = mpfr_get_d_2exp(&e, x, dir == Dir::Up ? MPFR_RNDU : MPFR_RNDD);
  return make(m, e);
}

XReal XReal::abs_from_mpfr(mpfr_srcptr x, Dir dir) {
  if (mpfr_zero_p(x)) return {};
  if (mpfr_inf_p(x)) return infinity();
  if (mpfr_nan_p(x)) throw std::domain_error("XReal: NaN");
  long e = 0;
  mpfr_rnd_t rnd = (dir == Dir::Up) == (mpfr_sgn(x) > 0) ? MPFR_RNDU : MPFR_RNDD;
  double m = mpfr_get_d_2exp(&e, x, rnd);
  return make(std::fabs(m), e);
}

XReal XReal::parse(std::string_view text, Dir dir) {
  std::string s(text);
  if (s == "inf" || s == "infinity") return infinity();
  TempMpfr t(53);
  if (mpfr_set_str(t.v, s.c_str(), 10, dir == Dir::Up ? MPFR_RNDU : MPFR_RNDD) != 0)
    throw std::invalid_argument("XReal: cannot parse '" + s + "'");
  return from_mpfr(t.v, dir);
}

void XReal::to_mpfr(mpfr_ptr out) const {
  if (inf_) {
    mpfr_set_inf(out, 1);
    return;
  }
  mpfr_set_d(out, m_, MPFR_RNDN);
  mpfr_mul_2si(out, out, e_, MPFR_RNDN);
}

double XReal::to_double() const {
  if (inf_) return kInf;
  if (m_ == 0.0) return 0.0;
  if (e_ > 1100) return m_ > 0 ? kInf : -kInf;
  if (e_ < -1100) return 0.0;
  return std::ldexp(m_, static_cast<int>(e_));
}

double XReal::log2_abs() const {
  if (inf_) return kInf;
  if (m_ == 0.0) return -kInf;
  return std::log2(std::fabs(m_)) + static_cast<double>(e_);
}

std::string XReal::to_string(int digits) const {
  if (inf_) return "inf";
  if (m_ == 0.0) return "0";
  TempMpfr t(64);
  to_mpfr(t.v);
  std::vector<char> buf(64 + digits);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, t.v);
  return std::string(buf.data());
}

std::string XReal::to_hex() const {
  if (inf_) return "inf";
  if (m_ == 0.0) return "0";
  TempMpfr t(53);
  to_mpfr(t.v);
  std::vector<char> buf(96);
  mpfr_snprintf(buf.data(), buf.size(), "%Ra", t.v);
  return std::string(buf.data());
}

XReal XReal::parse_hex(std::string_view text) {
  std::string s(text);
  if (s == "inf") return infinity();
  TempMpfr t(53);
  if (mpfr_set_str(t.v, s.c_str(), 16, MPFR_RNDN) != 0) {
    throw std::invalid_argument("XReal: cannot parse '" + s + "'");
  }
  return from_mpfr(t.v, Dir::Up);
}

XReal XReal::operator-() const {
  if (inf_) throw std::domain_error("XReal: negating infinity");
  XReal r = *this;
  r.m_ = -m_;
  return r;
}

XReal XReal::abs() const {
  XReal r = *this;
  r.m_ = std::fabs(m_);
  return r;
}

XReal XReal::mul_pow2(std::int64_t k) const {
  if (inf_ || m_ == 0.0) return *this;
  XReal r = *this;
  r.e_ += k;
  return r;
}

XReal XReal::floor_pow2() const {
  if (inf_ || m_ <= 0.0) throw std::domain_error("floor_pow2 requires a finite positive value");
  return pow2(e_ - 1);
}

XReal add(const XReal& a, const XReal& b, Dir dir) {
  if (a.inf_ || b.inf_) return XReal::infinity();
  if (a.m_ == 0.0) return b;
  if (b.m_ == 0.0) return a;
  const XReal& hi = a.e_ >= b.e_ ? a : b;
  const XReal& lo = a.e_ >= b.e_ ? b : a;
  const std::int64_t diff = hi.e_ - lo.e_;
  if (diff > 900) {
    return XReal::make(nudge(hi.m_, lo.m_, dir), hi.e_);
  }
  const double ls = std::ldexp(lo.m_, static_cast<int>(-diff));
  const double s = hi.m_ + ls;
  // Fast two-sum: |hi.m_| >= |ls| so the residual is exact.
  const double residual = ls - (s - hi.m_);
  return XReal::make(nudge(s, residual, dir), hi.e_);
}

XReal sub(const XReal& a, const XReal& b, Dir dir) {
  if (b.inf_) throw std::domain_error("XReal: subtracting infinity");
  return add(a, -b, dir);
}

XReal mul(const XReal& a, const XReal& b, Dir dir) {
  if (a.m_ == 0.0 || b.m_ == 0.0) return {};
  if (a.inf_ || b.inf_) return XReal::infinity();
  const double p = a.m_ * b.m_;
  const double residual = std::fma(a.m_, b.m_, -p);
  return XReal::make(nudge(p, residual, dir), a.e_ + b.e_);
}

XReal div(const XReal& a, const XReal& b, Dir dir) {
  if (b.m_ == 0.0) throw std::domain_error("XReal: division by zero");
  if (b.inf_) return {};
  if (a.inf_) return XReal::infinity();
  if (a.m_ == 0.0) return {};
  const double q = a.m_ / b.m_;
  // a - q*b is exact; exact quotient = q + r/b.
  const double r = std::fma(-q, b.m_, a.m_);
  const double residual = (b.m_ > 0) ? r : -r;
  return XReal::make(nudge(q, residual, dir), a.e_ - b.e_);
}

XReal sqrt(const XReal& a, Dir dir) {
  if (a.m_ < 0.0) throw std::domain_error("XReal: sqrt of negative value");
  if (a.inf_ || a.m_ == 0.0) return a;
  double m = a.m_;
  std::int64_t e = a.e_;
  if (e % 2 != 0) {
    m *= 2.0;
    e -= 1;
  }
  const double s = std::sqrt(m);
  const double residual = std::fma(-s, s, m);
  return XReal::make(nudge(s, residual, dir), e / 2);
}

std::strong_ordering operator<=>(const XReal& a, const XReal& b) {
  if (a.inf_ || b.inf_) {
    if (a.inf_ && b.inf_) return std::strong_ordering::equal;
    if (a.inf_) return std::strong_ordering::greater;
    return std::strong_ordering::less;
  }
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  if (a.e_ != b.e_) {
    return sa > 0 ? (a.e_ <=> b.e_) : (b.e_ <=> a.e_);
  }
  if (a.m_ < b.m_) return std::strong_ordering::less;
  if (a.m_ > b.m_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace bzcert
