#include "bzcert/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <vector>

#include "bzcert/errors.hpp"

namespace bzcert {

struct Expr::Node {
  enum class Kind { Number, Ident, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind;
  std::string text;  // literal or identifier
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr make(Kind k, NodePtr a, NodePtr b = nullptr) {
  return std::make_shared<const Expr::Node>(Expr::Node{k, {}, std::move(a), std::move(b)});
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr run() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("cannot parse expression '" + std::string(s_) + "': " + why +
                      " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool starts_primary() {
    skip();
    if (pos_ >= s_.size()) return false;
    const unsigned char c = static_cast<unsigned char>(s_[pos_]);
    return std::isdigit(c) || std::isalpha(c) || c == '_' || c == '(' || c == '.';
  }

  NodePtr sum() {
    NodePtr n = product();
    for (;;) {
      if (accept('+')) {
        n = make(Kind::Add, n, product());
      } else if (accept('-')) {
        n = make(Kind::Sub, n, product());
      } else {
        return n;
      }
    }
  }

  NodePtr product() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) {
        n = make(Kind::Mul, n, unary());
      } else if (accept('/')) {
        n = make(Kind::Div, n, unary());
      } else if (starts_primary()) {
        n = make(Kind::Mul, n, power());
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr n = sum();
      if (!accept(')')) fail("missing ')'");
      return n;
    }
    const std::size_t start = pos_;
    const unsigned char c = static_cast<unsigned char>(s_[pos_]);
    if (std::isdigit(c) || c == '.') {
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t q = pos_ + 1;
        if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
        if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
          pos_ = q;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
      }
      std::string lit(s_.substr(start, pos_ - start));
      if (lit == "." || std::count(lit.begin(), lit.end(), '.') > 1) fail("malformed number");
      return std::make_shared<const Expr::Node>(Expr::Node{Kind::Number, lit, nullptr, nullptr});
    }
    if (std::isalpha(c) || c == '_') {
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      return std::make_shared<const Expr::Node>(
          Expr::Node{Kind::Ident, std::string(s_.substr(start, pos_ - start)), nullptr, nullptr});
    }
    fail("unexpected '" + std::string(1, s_[pos_]) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void collect_idents(const Expr::Node& n, std::set<std::string>& out) {
  if (n.kind == Kind::Ident) out.insert(n.text);
  if (n.lhs) collect_idents(*n.lhs, out);
  if (n.rhs) collect_idents(*n.rhs, out);
}

template <class Op>
std::int64_t checked(Op op, std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (op(a, b, &r)) throw DomainError("integer overflow while evaluating the sequence");
  return r;
}

bool add_ovf(std::int64_t a, std::int64_t b, std::int64_t* r) { return __builtin_add_overflow(a, b, r); }
bool sub_ovf(std::int64_t a, std::int64_t b, std::int64_t* r) { return __builtin_sub_overflow(a, b, r); }
bool mul_ovf(std::int64_t a, std::int64_t b, std::int64_t* r) { return __builtin_mul_overflow(a, b, r); }

std::int64_t int_pow(std::int64_t base, std::int64_t e) {
  if (e < 0) throw DomainError("negative exponent in integer expression");
  if (base == 0) return e == 0 ? 1 : 0;
  if (base == 1) return 1;
  if (base == -1) return (e % 2 == 0) ? 1 : -1;
  std::int64_t r = 1;
  for (std::int64_t k = 0; k < e; ++k) {
    r = checked(mul_ovf, r, base);
  }
  return r;
}

std::int64_t eval_int_node(const Expr::Node& n, std::int64_t d) {
  std::int64_t out = 0;
  switch (n.kind) {
    case Kind::Number: {
      const auto* first = n.text.data();
      const auto* last = first + n.text.size();
      auto [ptr, ec] = std::from_chars(first, last, out);
      if (ec == std::errc::result_out_of_range) throw DomainError("integer literal out of range: " + n.text);
      if (ec != std::errc() || ptr != last) throw DomainError("not an integer literal: " + n.text);
      return out;
    }
    case Kind::Ident:
      if (n.text != "d") throw DomainError("unknown variable '" + n.text + "'");
      return d;
    case Kind::Neg:
      return checked(sub_ovf, 0, eval_int_node(*n.lhs, d));
    case Kind::Add:
      return checked(add_ovf, eval_int_node(*n.lhs, d), eval_int_node(*n.rhs, d));
    case Kind::Sub:
      return checked(sub_ovf, eval_int_node(*n.lhs, d), eval_int_node(*n.rhs, d));
    case Kind::Mul:
      return checked(mul_ovf, eval_int_node(*n.lhs, d), eval_int_node(*n.rhs, d));
    case Kind::Div: {
      const std::int64_t a = eval_int_node(*n.lhs, d);
      const std::int64_t b = eval_int_node(*n.rhs, d);
      if (b == 0 || a % b != 0) throw DomainError("inexact integer division");
      return a / b;
    }
    case Kind::Pow:
      return int_pow(eval_int_node(*n.lhs, d), eval_int_node(*n.rhs, d));
  }
  return 0;
}

int constant_exponent(const Expr::Node& n) {
  std::set<std::string> ids;
  collect_idents(n, ids);
  if (!ids.empty()) throw ConfigError("exponents must be constant integers");
  std::int64_t e = 0;
  try {
    e = eval_int_node(n, 0);
  } catch (const DomainError& err) {
    throw ConfigError(std::string("bad exponent: ") + err.what());
  }
  if (e < 0 || e > 100000) throw ConfigError("exponent out of range");
  return static_cast<int>(e);
}

BiPoly eval_bipoly_node(const Expr::Node& n) {
  switch (n.kind) {
    case Kind::Number:
      return BiPoly::constant(Ball::from_decimal(n.text));
    case Kind::Ident:
      if (n.text == "w1") return BiPoly::w1();
      if (n.text == "w2") return BiPoly::w2();
      if (n.text == "i") return BiPoly::constant(Ball(0.0, 1.0));
      throw ConfigError("unknown variable '" + n.text + "' (expected w1, w2 or i)");
    case Kind::Neg:
      return -eval_bipoly_node(*n.lhs);
    case Kind::Add:
      return eval_bipoly_node(*n.lhs) + eval_bipoly_node(*n.rhs);
    case Kind::Sub:
      return eval_bipoly_node(*n.lhs) - eval_bipoly_node(*n.rhs);
    case Kind::Mul:
      return eval_bipoly_node(*n.lhs) * eval_bipoly_node(*n.rhs);
    case Kind::Div: {
      const BiPoly den = eval_bipoly_node(*n.rhs);
      if (den.total_degree() > 0) throw ConfigError("division by a non-constant polynomial");
      const Ball c = den.coeff(0, 0);
      if (c.contains_zero()) throw ConfigError("division by zero");
      return eval_bipoly_node(*n.lhs).scaled(Ball(1.0) / c);
    }
    case Kind::Pow:
      return pow(eval_bipoly_node(*n.lhs), constant_exponent(*n.rhs));
  }
  return {};
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  Expr e;
  e.text_ = std::string(text);
  e.root_ = Parser(text).run();
  return e;
}

bool Expr::uses_only(std::string_view allowed, std::string* offending) const {
  std::set<std::string> ids;
  collect_idents(*root_, ids);
  std::set<std::string> ok;
  std::istringstream in{std::string(allowed)};
  for (std::string w; in >> w;) ok.insert(w);
  for (const auto& id : ids) {
    if (!ok.count(id)) {
      if (offending) *offending = id;
      return false;
    }
  }
  return true;
}

std::int64_t Expr::eval_int(std::int64_t d) const { return eval_int_node(*root_, d); }

BiPoly Expr::eval_bipoly() const { return eval_bipoly_node(*root_); }

}  // namespace bzcert
