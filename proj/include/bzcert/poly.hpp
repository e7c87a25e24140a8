#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "bzcert/ball.hpp"

namespace bzcert {

/// Closed or open disk {w : |w - center| <= radius}. The center is an exact
/// point; any uncertainty of a ball center is absorbed into the radius.
struct Disk {
  Disk(const Ball& c, const XReal& r);
  Disk(double cx, double cy, double r) : Disk(Ball(cx, cy), XReal::from_double(r)) {}

  static Disk unit() { return {0.0, 0.0, 1.0}; }

  Ball center;
  XReal radius;
};

/// Dense univariate polynomial with ball coefficients, lowest degree first.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Ball> coeffs);

  static UniPoly constant(const Ball& c);
  static UniPoly monomial(int k, const Ball& c = Ball(1.0));
  /// w - root
  static UniPoly linear(const Ball& root);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Ball>& coeffs() const { return coeffs_; }
  /// Coefficient of w^k (exact zero beyond the degree).
  Ball coeff(int k) const;
  /// True when every coefficient has zero radius.
  bool is_exact() const;
  XReal max_radius() const;

  UniPoly derivative() const;
  /// p^{(k)} / k!, the k-th Taylor coefficient polynomial.
  UniPoly taylor_coefficient(int k) const;

  /// Contains p(z') for every z' in z and every polynomial in the ball family.
  Ball eval(const Ball& z) const;
  /// Upper bound of sum_k |a_k| r^k.
  XReal majorant(const XReal& r) const;

  UniPoly operator-() const;
  UniPoly& operator+=(const UniPoly& q);
  UniPoly& operator-=(const UniPoly& q);
  friend UniPoly operator+(UniPoly p, const UniPoly& q) { return p += q; }
  friend UniPoly operator-(UniPoly p, const UniPoly& q) { return p -= q; }
  friend UniPoly operator*(const UniPoly& p, const UniPoly& q);
  UniPoly scaled(const Ball& s) const;
  /// Exact scaling by 2^k.
  UniPoly mul_pow2(long k) const;

 private:
  void trim();
  std::vector<Ball> coeffs_;
};

UniPoly pow(const UniPoly& p, int n);
/// z^n by repeated squaring (tight for balls away from 0).
Ball ipow(const Ball& z, unsigned n);

/// Bivariate polynomial in (w1, w2), stored sparsely by exponent pair.
class BiPoly {
 public:
  using Key = std::pair<int, int>;  // (power of w1, power of w2)

  BiPoly() = default;
  static BiPoly w1();
  static BiPoly w2();
  static BiPoly constant(const Ball& c);
  /// Embeds a univariate polynomial in w1.
  static BiPoly from_w1(const UniPoly& p);

  const std::map<Key, Ball>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  int degree_w1() const;
  int degree_w2() const;
  Ball coeff(int i, int j) const;
  void set(int i, int j, const Ball& c);

  Ball eval(const Ball& w1, const Ball& w2) const;
  /// Coefficients in w2 after substituting a value (or ball) for w1.
  UniPoly fiber(const Ball& w1) const;
  /// Coefficient of w2^j as a polynomial in w1.
  UniPoly w2_coefficient(int j) const;
  BiPoly d_w1() const;
  BiPoly d_w2() const;

  BiPoly operator-() const;
  BiPoly& operator+=(const BiPoly& q);
  BiPoly& operator-=(const BiPoly& q);
  friend BiPoly operator+(BiPoly p, const BiPoly& q) { return p += q; }
  friend BiPoly operator-(BiPoly p, const BiPoly& q) { return p -= q; }
  friend BiPoly operator*(const BiPoly& p, const BiPoly& q);
  BiPoly scaled(const Ball& s) const;

 private:
  std::map<Key, Ball> terms_;
};

BiPoly pow(const BiPoly& p, int n);

/// R(w1, P(w1, w2)): substitutes P for the second variable of R.
BiPoly compose_w2(const BiPoly& r, const BiPoly& p);

/// Homogeneous polynomial in [z0, z1, z2].
class TriHomPoly {
 public:
  using Key = std::array<int, 3>;

  explicit TriHomPoly(int degree) : degree_(degree) {}

  int degree() const { return degree_; }
  const std::map<Key, Ball>& terms() const { return terms_; }
  /// Throws DomainError unless i + j + k equals the degree.
  void set(const Key& exponents, const Ball& c);
  Ball coeff(const Key& exponents) const;
  Ball eval(const Ball& z0, const Ball& z1, const Ball& z2) const;
  /// True when z0 divides every term.
  bool divisible_by_z0() const;

 private:
  int degree_;
  std::map<Key, Ball> terms_;
};

/// Lifts P to degree target_degree via w1 = z1/z0, w2 = z2/z0.
TriHomPoly homogenize(const BiPoly& p, int target_degree);
/// Sets z0 = 1.
BiPoly dehomogenize(const TriHomPoly& p);

}  // namespace bzcert
