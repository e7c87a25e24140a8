#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace bzcert {

/// Rounding direction for bound arithmetic.
enum class Dir { Down, Up };

/// A real number stored as a 53-bit mantissa with a 64-bit binary exponent.
///
/// Used for error radii and certified bounds. The quantities produced by the
/// construction (scaling constants, stability radii, norms) routinely fall
/// below 1e-300, so a plain double is not enough. Every arithmetic helper
/// takes a rounding direction and returns a value on the requested side of
/// the exact result; exact results stay exact.
class XReal {
 public:
  constexpr XReal() = default;

  static XReal from_double(double v);
  static XReal pow2(std::int64_t e);
  /// Rounds an MPFR value in the given direction.
  static XReal from_mpfr(mpfr_srcptr x, Dir dir);
  /// |x| rounded in the given direction.
  static XReal abs_from_mpfr(mpfr_srcptr x, Dir dir);
  static XReal infinity();
  /// Parses a decimal string such as "3.172e-412".
  static XReal parse(std::string_view text, Dir dir);

  bool is_zero() const { return m_ == 0.0; }
  bool is_infinite() const { return inf_; }
  int sign() const { return inf_ ? 1 : (m_ > 0) - (m_ < 0); }
  double mantissa() const { return m_; }
  std::int64_t exponent() const { return e_; }

  /// Exact conversion into an MPFR variable of precision >= 53.
  void to_mpfr(mpfr_ptr out) const;
  /// Nearest double; saturates to 0 or infinity outside the double range.
  double to_double() const;
  /// Approximate base-2 logarithm of |x|.
  double log2_abs() const;
  /// Decimal mantissa/exponent string, e.g. "3.1720000000000001e-412".
  std::string to_string(int digits = 17) const;
  /// Exact binary form, e.g. "0x8p-11"; parse_hex inverts it.
  std::string to_hex() const;
  static XReal parse_hex(std::string_view text);

  XReal operator-() const;
  XReal abs() const;
  /// Multiplication by 2^k (exact).
  XReal mul_pow2(std::int64_t k) const;
  /// Largest power of two not exceeding a positive value.
  XReal floor_pow2() const;

  friend XReal add(const XReal& a, const XReal& b, Dir dir);
  friend XReal sub(const XReal& a, const XReal& b, Dir dir);
  friend XReal mul(const XReal& a, const XReal& b, Dir dir);
  friend XReal div(const XReal& a, const XReal& b, Dir dir);
  friend XReal sqrt(const XReal& a, Dir dir);

  friend std::strong_ordering operator<=>(const XReal& a, const XReal& b);
  friend bool operator==(const XReal& a, const XReal& b) = default;

 private:
  static XReal make(double m, std::int64_t e);

  double m_ = 0.0;  // |m_| in [0.5, 1) unless zero
  std::int64_t e_ = 0;
  bool inf_ = false;
};

inline XReal max(const XReal& a, const XReal& b) { return a < b ? b : a; }
inline XReal min(const XReal& a, const XReal& b) { return b < a ? b : a; }

// Upper-bound shorthands used throughout radius bookkeeping.
inline XReal add_up(const XReal& a, const XReal& b) { return add(a, b, Dir::Up); }
inline XReal mul_up(const XReal& a, const XReal& b) { return mul(a, b, Dir::Up); }

}  // namespace bzcert
