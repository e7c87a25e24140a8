#include "bzcert/factored.hpp"

namespace bzcert {

FactoredPoly::FactoredPoly(UniPoly p) {
  if (p.is_zero()) return;
  dense_ = p;
  terms_.push_back({Ball(1.0), Ball(), 0, std::move(p)});
}

FactoredPoly FactoredPoly::product(const Ball& scale, const Ball& root, int power,
                                   const UniPoly& factor) {
  FactoredPoly out;
  if (factor.is_zero() || scale.is_exact_zero()) return out;
  out.dense_ = (pow(UniPoly::linear(root), power) * factor).scaled(scale);
  out.terms_.push_back({scale, root, power, factor});
  return out;
}

FactoredPoly FactoredPoly::derivative() const {
  FactoredPoly out;
  out.dense_ = dense_.derivative();
  if (out.dense_.is_zero()) return out;
  for (const Term& t : terms_) {
    if (t.power == 0) {
      UniPoly f = t.factor.derivative();
      if (!f.is_zero()) out.terms_.push_back({t.scale, t.root, 0, std::move(f)});
      continue;
    }
    // (w-r)^e f  ->  (w-r)^(e-1) (e f + (w-r) f')
    UniPoly f = t.factor.scaled(Ball(static_cast<double>(t.power))) +
                UniPoly::linear(t.root) * t.factor.derivative();
    if (!f.is_zero()) out.terms_.push_back({t.scale, t.root, t.power - 1, std::move(f)});
  }
  return out;
}

Ball FactoredPoly::eval(const Ball& z) const {
  Ball acc;
  for (const Term& t : terms_) {
    Ball v = t.factor.eval(z);
    if (t.power > 0) v = v * ipow(z - t.root, static_cast<unsigned>(t.power));
    acc += t.scale * v;
  }
  return acc;
}

XReal FactoredPoly::majorant(const XReal& r) const {
  XReal acc;
  for (const Term& t : terms_) {
    XReal v = t.factor.majorant(r);
    if (t.power > 0) {
      const XReal base = add_up(t.root.abs_upper(), r);
      for (int k = 0; k < t.power; ++k) v = mul_up(v, base);
    }
    acc = add_up(acc, mul_up(t.scale.abs_upper(), v));
  }
  return min(acc, dense_.majorant(r));
}

FactoredPoly& FactoredPoly::operator+=(const FactoredPoly& q) {
  dense_ += q.dense_;
  terms_.insert(terms_.end(), q.terms_.begin(), q.terms_.end());
  return *this;
}

FactoredPoly FactoredPoly::scaled(const Ball& s) const {
  FactoredPoly out;
  out.dense_ = dense_.scaled(s);
  if (out.dense_.is_zero()) return out;
  out.terms_ = terms_;
  for (Term& t : out.terms_) t.scale = t.scale * s;
  return out;
}

}  // namespace bzcert
