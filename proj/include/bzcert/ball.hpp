#pragma once

#include <mpfr.h>

#include <complex>
#include <string>
#include <string_view>

#include "bzcert/xreal.hpp"

namespace bzcert {

/// Current working precision (mantissa bits) for newly created balls.
mpfr_prec_t working_precision();

/// Sets the working precision for the lifetime of the scope (per thread).
class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

/// Complex ball: an MPFR midpoint (real and imaginary part) plus an error
/// radius. The ball {z : |z - mid| <= rad} contains the exact value of every
/// quantity it represents; every operation preserves that containment.
class Ball {
 public:
  /// Exact zero at the working precision.
  Ball();
  /// Exact value (doubles are exactly representable at >= 53 bits).
  explicit Ball(double re, double im = 0.0);
  Ball(std::complex<double> z) : Ball(z.real(), z.imag()) {}

  Ball(const Ball& other);
  Ball(Ball&& other) noexcept;
  Ball& operator=(const Ball& other);
  Ball& operator=(Ball&& other) noexcept;
  ~Ball();

  /// Ball around a decimal literal; the radius covers the conversion error.
  static Ball from_decimal(std::string_view re, std::string_view im = "0");
  /// num / den as a ball (exact when den is a power of two).
  static Ball from_ratio(long num, unsigned long den);
  static Ball from_mpfr(mpfr_srcptr re, mpfr_srcptr im, XReal rad = {});
  static Ball from_xreal(const XReal& re);

  mpfr_srcptr re() const { return re_; }
  mpfr_srcptr im() const { return im_; }
  const XReal& rad() const { return rad_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(re_); }

  bool is_exact() const { return rad_.is_zero(); }
  bool is_exact_zero() const { return rad_.is_zero() && mid_is_zero(); }
  bool mid_is_zero() const { return mpfr_zero_p(re_) && mpfr_zero_p(im_); }
  bool contains_zero() const;
  bool is_finite() const;

  /// Midpoint as an exact ball.
  Ball midpoint() const;
  Ball with_radius(const XReal& r) const;
  Ball& inflate(const XReal& r);

  /// Upper bound of |z| over the ball.
  XReal abs_upper() const;
  /// Lower bound of |z| over the ball (0 when the ball contains the origin).
  XReal abs_lower() const;
  /// Upper / lower bounds for |mid|.
  XReal mid_abs(Dir dir) const;
  /// Argument of the midpoint in (-pi, pi], as a double.
  double mid_arg() const;

  std::complex<double> to_complex() const;
  std::complex<long double> to_complex_ld() const;
  std::string to_string(int digits = 17) const;

  Ball conj() const;
  Ball mul_pow2(long k) const;

  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a);
  friend Ball operator*(const Ball& a, const Ball& b);
  /// Throws DomainError when the divisor contains 0.
  friend Ball operator/(const Ball& a, const Ball& b);
  Ball& operator+=(const Ball& b);
  Ball& operator-=(const Ball& b);
  Ball& operator*=(const Ball& b);

  /// Multiplication by an unsigned integer.
  Ball mul_ui(unsigned long k) const;

  /// acc <- acc * z + c. Hot path of Horner evaluation; no allocation when the
  /// precision of acc already matches the working precision.
  friend void fused_mul_add(Ball& acc, const Ball& z, const XReal& z_abs_up, const Ball& c);

 private:
  void init(mpfr_prec_t p);
  mpfr_t re_;
  mpfr_t im_;
  XReal rad_;
};

/// Rounding error bound of an MPFR result (0 when the operation was exact).
XReal rounding_error(mpfr_srcptr x, int ternary);

/// Sets MPFR's exponent range to the widest supported values (idempotent).
void ensure_wide_exponent_range();

}  // namespace bzcert
