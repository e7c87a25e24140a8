#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bzcert/disk_analysis.hpp"
#include "bzcert/expr.hpp"
#include "bzcert/factored.hpp"

namespace bzcert {

/// Total evaluator d -> a_d over the positive integers.
class SequenceSpec {
 public:
  using Fn = std::function<std::int64_t(std::int64_t)>;

  SequenceSpec() = default;
  SequenceSpec(std::string description, Fn fn);

  /// Closed form in d ("d^2", "2^d + 1") or "@path" to a table file. Probes
  /// d = 1..10 and throws ConfigError on parse failures or values <= 0.
  static SequenceSpec parse(const std::string& text);
  /// Table a_1, a_2, ... extended beyond its end by `extension` (nullptr:
  /// repeat the last entry).
  static SequenceSpec from_table(std::vector<std::int64_t> values, std::optional<Expr> extension,
                                 std::string description);

  /// a_d; throws DomainError when the value is not a positive integer.
  std::int64_t operator()(std::int64_t d) const;
  const std::string& description() const { return description_; }

  /// The sequence d -> a_{k d}.
  SequenceSpec dilated(int k) const;

 private:
  std::string description_;
  Fn fn_;
};

/// One construction step.
struct Stage {
  int m = 1;
  UniPoly q;
  FactoredPoly Q;
  /// Scaling constant c_m (zero for the first stage, where Q vanishes).
  XReal c;
  int d = 1;
  /// Stability radius delta_m (1 by convention for m = 1).
  XReal delta;
  bool delta_by_convention = false;
  /// a_{d_m}
  std::int64_t a_at_d = 0;
  /// Number of zeros of q_m, a_{d_{m-1}} (0 for m = 1).
  std::int64_t zero_count = 0;
  /// Certified C^1 bound of the unscaled product (w - lambda)^{2 d_{m-1}} q_m.
  XReal unscaled_norm;
  /// Certified C^1 bound of Q_m.
  XReal norm;
  /// 2^{-m} min(delta_1, ..., delta_{m-1}); the cascade requires norm < bound.
  XReal cascade_bound;
  std::vector<ZeroEnclosure> zeros;
  std::optional<StabilityRadius> stability;
};

struct ConstructionOptions {
  /// Testing hook: multiplies c_m of this stage by 2^{m+2} (0 = off).
  int corrupt_stage = 0;
};

struct ConstructionState {
  SequenceSpec sequence;
  /// Exact lambda, |lambda| > 1.
  Ball lambda;
  /// Exact (binary) epsilon.
  Ball epsilon;
  int M = 0;
  std::vector<Stage> stages;

  const Stage& stage(int m) const;
  /// phi = Q_1 + ... + Q_M.
  FactoredPoly phi() const;
  /// Q_first + ... + Q_last (zero when first > last).
  FactoredPoly partial_sum(int first, int last) const;
  /// min(delta_1, ..., delta_m)
  XReal min_delta(int m) const;
};

/// w^n - 4^{-n}
UniPoly make_q(std::int64_t zero_count);

/// Builds stage m from stages 1..m-1 of the state.
Stage make_stage(const ConstructionState& state, int m, const ConstructionOptions& options = {});

/// Validates the parameters and returns a state holding only stage 1.
ConstructionState begin_construction(const SequenceSpec& sequence, int M, const Ball& lambda,
                                     const Ball& epsilon);
/// Appends the next stage; errors carry the index of that stage.
void extend_construction(ConstructionState& state, const ConstructionOptions& options = {});

ConstructionState build_stages(const SequenceSpec& sequence, int M, const Ball& lambda,
                               const Ball& epsilon, const ConstructionOptions& options = {});

/// P_{m,eps} = w2 - eps (Q_1 + ... + Q_m)(w1). Throws PrecisionExhausted when
/// the coefficients are not exactly representable at the working precision.
BiPoly assemble_P(const ConstructionState& state, int m);

/// Smooth radial bump: 1 on |w| <= 1/2, 0 on |w| >= 2/3, strictly between.
double bump_rho(std::complex<double> w);

struct EmbeddingPoint {
  Ball w1;
  Ball w2;
};

/// (w, eps rho(w) phi(w)); w is taken as an exact point.
EmbeddingPoint sample_embedding(const ConstructionState& state, std::complex<double> w);

/// Upper bound of sup |grad rho| over the plane.
XReal bump_slope_bound();

/// Certified bounds of the graph perturbation w -> eps rho(w) phi(w) on the
/// closed unit disk.
struct EmbeddingBounds {
  XReal c0;
  XReal c1;
  /// Sum of the stage C^1 norms (bounds sup |phi| and sup |phi'|).
  XReal phi_norm;
  /// sup |phi| over the support of grad rho.
  XReal phi_sup_annulus;
  XReal bump_slope;
};
EmbeddingBounds embedding_bounds(const ConstructionState& state);

}  // namespace bzcert
