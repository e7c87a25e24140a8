#include "bzcert/poly.hpp"

#include <algorithm>

#include "bzcert/errors.hpp"

namespace bzcert {

Disk::Disk(const Ball& c, const XReal& r) : center(c.midpoint()), radius(add_up(r, c.rad())) {
  if (radius.sign() <= 0) throw DomainError("disk radius must be positive");
}

// ---------------------------------------------------------------- UniPoly

UniPoly::UniPoly(std::vector<Ball> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_exact_zero()) coeffs_.pop_back();
}

UniPoly UniPoly::constant(const Ball& c) { return UniPoly(std::vector<Ball>{c}); }

UniPoly UniPoly::monomial(int k, const Ball& c) {
  if (k < 0) throw DomainError("monomial: negative degree");
  std::vector<Ball> v(static_cast<std::size_t>(k) + 1);
  v.back() = c;
  return UniPoly(std::move(v));
}

UniPoly UniPoly::linear(const Ball& root) {
  return UniPoly(std::vector<Ball>{-root, Ball(1.0)});
}

Ball UniPoly::coeff(int k) const {
  if (k < 0 || k > degree()) return Ball();
  return coeffs_[static_cast<std::size_t>(k)];
}

bool UniPoly::is_exact() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Ball& b) { return b.is_exact(); });
}

XReal UniPoly::max_radius() const {
  XReal r;
  for (const auto& c : coeffs_) r = max(r, c.rad());
  return r;
}

UniPoly UniPoly::derivative() const {
  if (degree() < 1) return {};
  std::vector<Ball> v;
  v.reserve(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) v.push_back(coeffs_[k].mul_ui(k));
  return UniPoly(std::move(v));
}

UniPoly UniPoly::taylor_coefficient(int k) const {
  if (k < 0) throw DomainError("taylor_coefficient: negative order");
  if (k == 0) return *this;
  if (degree() < k) return {};
  std::vector<Ball> v;
  v.reserve(coeffs_.size() - k);
  for (std::size_t j = k; j < coeffs_.size(); ++j) {
    // binomial(j, k) fits in an unsigned long for the degrees handled here
    unsigned long b = 1;
    for (int i = 1; i <= k; ++i) b = b * (j - k + i) / i;
    v.push_back(coeffs_[j].mul_ui(b));
  }
  return UniPoly(std::move(v));
}

Ball ipow(const Ball& z, unsigned n) {
  Ball result(1.0);
  Ball base = z;
  bool first = true;
  while (n != 0) {
    if (n & 1u) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n != 0) base = base * base;
  }
  return result;
}

Ball UniPoly::eval(const Ball& z) const {
  if (coeffs_.empty()) return Ball();
  std::size_t nonzero = 0;
  for (const Ball& c : coeffs_) nonzero += c.is_exact_zero() ? 0 : 1;
  if (4 * nonzero < coeffs_.size()) {
    // Few terms: jump over runs of zero coefficients with powers of z.
    Ball acc = coeffs_.back();
    int last = degree();
    Ball step_pow;
    int step = -1;
    for (int k = degree() - 1; k >= 0; --k) {
      const Ball& c = coeffs_[static_cast<std::size_t>(k)];
      if (c.is_exact_zero() && k != 0) continue;
      if (last - k != step) {
        step = last - k;
        step_pow = ipow(z, static_cast<unsigned>(step));
      }
      acc = acc * step_pow + c;
      last = k;
    }
    return acc;
  }
  const XReal z_abs = z.mid_abs(Dir::Up);
  Ball acc;
  acc = coeffs_.back();
  if (acc.precision() != working_precision()) acc = acc + Ball();
  for (int k = degree() - 1; k >= 0; --k) fused_mul_add(acc, z, z_abs, coeffs_[static_cast<std::size_t>(k)]);
  return acc;
}

XReal UniPoly::majorant(const XReal& r) const {
  XReal acc;
  for (int k = degree(); k >= 0; --k) {
    acc = add_up(mul_up(acc, r), coeffs_[static_cast<std::size_t>(k)].abs_upper());
  }
  return acc;
}

UniPoly UniPoly::operator-() const {
  std::vector<Ball> v;
  v.reserve(coeffs_.size());
  for (const auto& c : coeffs_) v.push_back(-c);
  return UniPoly(std::move(v));
}

UniPoly& UniPoly::operator+=(const UniPoly& q) {
  if (q.coeffs_.size() > coeffs_.size()) coeffs_.resize(q.coeffs_.size());
  for (std::size_t k = 0; k < q.coeffs_.size(); ++k) {
    if (q.coeffs_[k].is_exact_zero()) continue;
    coeffs_[k] = coeffs_[k] + q.coeffs_[k];
  }
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& q) { return *this += -q; }

UniPoly operator*(const UniPoly& p, const UniPoly& q) {
  if (p.is_zero() || q.is_zero()) return {};
  std::vector<Ball> v(p.coeffs_.size() + q.coeffs_.size() - 1);
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i) {
    if (p.coeffs_[i].is_exact_zero()) continue;
    for (std::size_t j = 0; j < q.coeffs_.size(); ++j) {
      if (q.coeffs_[j].is_exact_zero()) continue;
      v[i + j] += p.coeffs_[i] * q.coeffs_[j];
    }
  }
  return UniPoly(std::move(v));
}

UniPoly UniPoly::scaled(const Ball& s) const {
  std::vector<Ball> v;
  v.reserve(coeffs_.size());
  for (const auto& c : coeffs_) v.push_back(c * s);
  return UniPoly(std::move(v));
}

UniPoly UniPoly::mul_pow2(long k) const {
  std::vector<Ball> v;
  v.reserve(coeffs_.size());
  for (const auto& c : coeffs_) v.push_back(c.mul_pow2(k));
  return UniPoly(std::move(v));
}

UniPoly pow(const UniPoly& p, int n) {
  if (n < 0) throw DomainError("pow: negative exponent");
  UniPoly result = UniPoly::constant(Ball(1.0));
  UniPoly base = p;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------- BiPoly

BiPoly BiPoly::w1() {
  BiPoly p;
  p.set(1, 0, Ball(1.0));
  return p;
}

BiPoly BiPoly::w2() {
  BiPoly p;
  p.set(0, 1, Ball(1.0));
  return p;
}

BiPoly BiPoly::constant(const Ball& c) {
  BiPoly p;
  p.set(0, 0, c);
  return p;
}

BiPoly BiPoly::from_w1(const UniPoly& u) {
  BiPoly p;
  for (int k = 0; k <= u.degree(); ++k) p.set(k, 0, u.coeffs()[static_cast<std::size_t>(k)]);
  return p;
}

int BiPoly::total_degree() const {
  int d = -1;
  for (const auto& [key, c] : terms_) d = std::max(d, key.first + key.second);
  return d;
}

int BiPoly::degree_w1() const {
  int d = -1;
  for (const auto& [key, c] : terms_) d = std::max(d, key.first);
  return d;
}

int BiPoly::degree_w2() const {
  int d = -1;
  for (const auto& [key, c] : terms_) d = std::max(d, key.second);
  return d;
}

Ball BiPoly::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? Ball() : it->second;
}

void BiPoly::set(int i, int j, const Ball& c) {
  if (i < 0 || j < 0) throw DomainError("BiPoly: negative exponent");
  if (c.is_exact_zero()) {
    terms_.erase({i, j});
  } else {
    terms_.insert_or_assign({i, j}, c);
  }
}

UniPoly BiPoly::w2_coefficient(int j) const {
  std::vector<Ball> v(static_cast<std::size_t>(std::max(degree_w1(), 0)) + 1);
  for (const auto& [key, c] : terms_) {
    if (key.second == j) v[static_cast<std::size_t>(key.first)] = c;
  }
  return UniPoly(std::move(v));
}

UniPoly BiPoly::fiber(const Ball& w1) const {
  const int dj = degree_w2();
  if (dj < 0) return {};
  std::vector<Ball> v;
  v.reserve(static_cast<std::size_t>(dj) + 1);
  for (int j = 0; j <= dj; ++j) v.push_back(w2_coefficient(j).eval(w1));
  return UniPoly(std::move(v));
}

Ball BiPoly::eval(const Ball& w1, const Ball& w2) const { return fiber(w1).eval(w2); }

BiPoly BiPoly::d_w1() const {
  BiPoly r;
  for (const auto& [key, c] : terms_) {
    if (key.first > 0) r.set(key.first - 1, key.second, c.mul_ui(static_cast<unsigned long>(key.first)));
  }
  return r;
}

BiPoly BiPoly::d_w2() const {
  BiPoly r;
  for (const auto& [key, c] : terms_) {
    if (key.second > 0) r.set(key.first, key.second - 1, c.mul_ui(static_cast<unsigned long>(key.second)));
  }
  return r;
}

BiPoly BiPoly::operator-() const {
  BiPoly r;
  for (const auto& [key, c] : terms_) r.terms_.emplace(key, -c);
  return r;
}

BiPoly& BiPoly::operator+=(const BiPoly& q) {
  for (const auto& [key, c] : q.terms_) {
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_exact_zero()) terms_.erase(it);
    }
  }
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& q) { return *this += -q; }

BiPoly operator*(const BiPoly& p, const BiPoly& q) {
  BiPoly r;
  for (const auto& [kp, cp] : p.terms_) {
    for (const auto& [kq, cq] : q.terms_) {
      BiPoly::Key k{kp.first + kq.first, kp.second + kq.second};
      auto it = r.terms_.find(k);
      if (it == r.terms_.end()) {
        r.terms_.emplace(k, cp * cq);
      } else {
        it->second += cp * cq;
      }
    }
  }
  for (auto it = r.terms_.begin(); it != r.terms_.end();) {
    it = it->second.is_exact_zero() ? r.terms_.erase(it) : std::next(it);
  }
  return r;
}

BiPoly BiPoly::scaled(const Ball& s) const {
  BiPoly r;
  for (const auto& [key, c] : terms_) r.set(key.first, key.second, c * s);
  return r;
}

BiPoly pow(const BiPoly& p, int n) {
  if (n < 0) throw DomainError("pow: negative exponent");
  BiPoly result = BiPoly::constant(Ball(1.0));
  BiPoly base = p;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

BiPoly compose_w2(const BiPoly& r, const BiPoly& p) {
  // Horner in the second variable: sum_j (coefficient_j(w1)) * P^j.
  const int dj = r.degree_w2();
  BiPoly acc;
  for (int j = dj; j >= 0; --j) {
    acc = acc * p + BiPoly::from_w1(r.w2_coefficient(j));
  }
  return acc;
}

// ---------------------------------------------------------------- TriHomPoly

void TriHomPoly::set(const Key& e, const Ball& c) {
  if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + e[1] + e[2] != degree_) {
    throw DomainError("TriHomPoly: exponents must be non-negative and sum to the degree");
  }
  if (c.is_exact_zero()) {
    terms_.erase(e);
  } else {
    terms_.insert_or_assign(e, c);
  }
}

Ball TriHomPoly::coeff(const Key& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Ball() : it->second;
}

Ball TriHomPoly::eval(const Ball& z0, const Ball& z1, const Ball& z2) const {
  Ball acc;
  for (const auto& [e, c] : terms_) {
    Ball t = c;
    for (int i = 0; i < e[0]; ++i) t *= z0;
    for (int i = 0; i < e[1]; ++i) t *= z1;
    for (int i = 0; i < e[2]; ++i) t *= z2;
    acc += t;
  }
  return acc;
}

bool TriHomPoly::divisible_by_z0() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.first[0] > 0; });
}

TriHomPoly homogenize(const BiPoly& p, int target_degree) {
  if (target_degree < p.total_degree()) {
    throw DomainError("homogenize: target degree below the total degree");
  }
  TriHomPoly h(target_degree);
  for (const auto& [key, c] : p.terms()) {
    h.set({target_degree - key.first - key.second, key.first, key.second}, c);
  }
  return h;
}

BiPoly dehomogenize(const TriHomPoly& p) {
  BiPoly r;
  for (const auto& [e, c] : p.terms()) {
    r += [&] {
      BiPoly t;
      t.set(e[1], e[2], c);
      return t;
    }();
  }
  return r;
}

}  // namespace bzcert
