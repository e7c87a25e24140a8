#pragma once

#include <vector>

#include "bzcert/poly.hpp"

namespace bzcert {

/// Polynomial kept as a sum of products scale * (w - root)^power * factor(w),
/// together with its dense expansion.
///
/// Ball evaluation of the dense form over a disk grows like the coefficient
/// majorant, which for (w - 2)^30 near w = 1 is 3^30 times the true size.
/// Evaluating the factors separately avoids that cancellation, so enclosures
/// over disks stay within a small factor of the true range.
class FactoredPoly {
 public:
  struct Term {
    Ball scale;
    Ball root;
    int power = 0;
    UniPoly factor;
  };

  FactoredPoly() = default;
  /// A single dense term.
  FactoredPoly(UniPoly p);  // NOLINT(google-explicit-constructor)
  static FactoredPoly product(const Ball& scale, const Ball& root, int power, const UniPoly& factor);

  const std::vector<Term>& terms() const { return terms_; }
  /// Dense expansion (encloses the same family of polynomials).
  const UniPoly& dense() const { return dense_; }
  int degree() const { return dense_.degree(); }
  bool is_zero() const { return dense_.is_zero(); }

  FactoredPoly derivative() const;
  Ball eval(const Ball& z) const;
  XReal majorant(const XReal& r) const;

  FactoredPoly& operator+=(const FactoredPoly& q);
  friend FactoredPoly operator+(FactoredPoly p, const FactoredPoly& q) { return p += q; }
  FactoredPoly scaled(const Ball& s) const;

 private:
  std::vector<Term> terms_;
  UniPoly dense_;
};

}  // namespace bzcert
