#include "bzcert/norms.hpp"

#include <algorithm>
#include <vector>

#include "bzcert/taylor.hpp"

namespace bzcert {

namespace {

constexpr int kExtraLevels = 36;
constexpr std::size_t kArcBudget = 1u << 20;

}  // namespace

SupBound max_modulus_on_circle(const FactoredPoly& p, const Disk& circle, double tightness) {
  if (p.is_zero()) return {};
  const XReal reach = add_up(circle.center.abs_upper(), circle.radius);
  const XReal coarse = p.majorant(reach);
  if (p.degree() == 0) {
    return {coarse, p.dense().coeffs()[0].abs_lower()};
  }

  const TaylorModel model(p);
  const XReal factor = XReal::from_double(tightness);
  const int base = level_for(static_cast<std::uint64_t>(std::max(8, 2 * p.degree())));

  XReal best;
  for (std::uint64_t j = 0; j < (std::uint64_t{1} << base); ++j) {
    best = max(best, model.value(arc_midpoint(circle, {j, base})).abs_lower());
  }

  std::vector<Arc> stack;
  for (std::uint64_t j = std::uint64_t{1} << base; j-- > 0;) stack.push_back({j, base});
  XReal refined;
  std::size_t processed = 0;
  while (!stack.empty()) {
    const Arc arc = stack.back();
    stack.pop_back();
    const Ball mid = arc_midpoint(circle, arc);
    const Ball enc = model.enclose(Disk(mid, arc_reach(circle, arc)));
    const XReal ub = enc.abs_upper();
    if (arc.level > base) best = max(best, model.value(mid).abs_lower());
    ++processed;
    const bool settled = ub <= mul(factor, best, Dir::Down);
    if (settled || arc.level >= base + kExtraLevels || processed + stack.size() > kArcBudget) {
      refined = max(refined, ub);
      continue;
    }
    stack.push_back(arc.right());
    stack.push_back(arc.left());
  }
  return {min(coarse, refined), best};
}

SupBound c1_norm_upper(const FactoredPoly& p, const Disk& disk, double tightness) {
  const SupBound f = max_modulus_on_circle(p, disk, tightness);
  const SupBound df = max_modulus_on_circle(p.derivative(), disk, tightness);
  return {max(f.upper, df.upper), max(f.lower, df.lower)};
}

}  // namespace bzcert
