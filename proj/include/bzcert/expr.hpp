#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "bzcert/poly.hpp"

namespace bzcert {

/// Parsed arithmetic expression over +, -, *, /, ^, parentheses, decimal
/// literals and identifiers. Juxtaposition means multiplication ("2w1").
class Expr {
 public:
  struct Node;

  /// Throws ConfigError on syntax errors.
  static Expr parse(std::string_view text);

  const std::string& text() const { return text_; }
  /// True when every identifier is in `allowed` (a space-separated list).
  bool uses_only(std::string_view allowed, std::string* offending = nullptr) const;

  /// Integer evaluation with d bound to the argument. Throws DomainError on
  /// overflow, division, negative exponents or non-integer literals.
  std::int64_t eval_int(std::int64_t d) const;

  /// Polynomial in w1, w2 with complex coefficients (i is the imaginary
  /// unit). Exponents must be constant non-negative integers; divisors must
  /// be nonzero constants. Throws ConfigError otherwise.
  BiPoly eval_bipoly() const;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace bzcert
