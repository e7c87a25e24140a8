#include "bzcert/construction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bzcert/errors.hpp"
#include "bzcert/norms.hpp"

namespace bzcert {

namespace {

constexpr std::int64_t kMaxZeroCount = std::int64_t{1} << 20;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

SequenceSpec parse_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read sequence table '" + path + "'");
  std::vector<std::int64_t> values;
  std::optional<Expr> extension;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    if (line.rfind("extend:", 0) == 0) {
      const std::string rule = trim(line.substr(7));
      if (rule == "last") {
        extension.reset();
      } else {
        Expr e = Expr::parse(rule);
        std::string bad;
        if (!e.uses_only("d", &bad)) throw ConfigError("unknown variable '" + bad + "' in extension rule");
        extension = std::move(e);
      }
      continue;
    }
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream fields(line);
    for (std::string tok; fields >> tok;) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw ConfigError("bad table entry '" + tok + "' in '" + path + "'");
      values.push_back(v);
    }
  }
  if (values.empty()) throw ConfigError("sequence table '" + path + "' has no entries");
  return SequenceSpec::from_table(std::move(values), std::move(extension), "@" + path);
}

template <class E>
[[noreturn]] void rethrow_at(const E& e, int stage) {
  if (e.stage() != 0) throw e;
  throw E(e.what(), stage);
}

}  // namespace

SequenceSpec::SequenceSpec(std::string description, Fn fn)
    : description_(std::move(description)), fn_(std::move(fn)) {}

SequenceSpec SequenceSpec::from_table(std::vector<std::int64_t> values, std::optional<Expr> extension,
                                      std::string description) {
  auto table = std::make_shared<const std::vector<std::int64_t>>(std::move(values));
  auto ext = std::make_shared<const std::optional<Expr>>(std::move(extension));
  return SequenceSpec(std::move(description), [table, ext](std::int64_t d) {
    const auto n = static_cast<std::int64_t>(table->size());
    if (d <= n) return (*table)[static_cast<std::size_t>(d - 1)];
    if (*ext) return (*ext)->eval_int(d);
    return table->back();
  });
}

SequenceSpec SequenceSpec::parse(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw ConfigError("empty sequence");
  SequenceSpec spec;
  if (text.front() == '@') {
    spec = parse_table_file(text.substr(1));
  } else {
    Expr e = Expr::parse(text);
    std::string bad;
    if (!e.uses_only("d", &bad)) throw ConfigError("unknown variable '" + bad + "' in sequence (only d)");
    spec = SequenceSpec(text, [e](std::int64_t d) { return e.eval_int(d); });
  }
  for (std::int64_t d = 1; d <= 10; ++d) {
    std::int64_t v = 0;
    try {
      v = spec.fn_(d);
    } catch (const DomainError& err) {
      throw ConfigError("sequence cannot be evaluated at d = " + std::to_string(d) + ": " + err.what());
    }
    if (v <= 0) {
      throw ConfigError("sequence value at d = " + std::to_string(d) + " is " + std::to_string(v) +
                        "; terms must be positive");
    }
  }
  return spec;
}

std::int64_t SequenceSpec::operator()(std::int64_t d) const {
  if (!fn_) throw DomainError("empty sequence");
  if (d < 1) throw DomainError("sequence index must be positive");
  const std::int64_t v = fn_(d);
  if (v <= 0) throw DomainError("sequence term a_" + std::to_string(d) + " = " + std::to_string(v) + " is not positive");
  return v;
}

SequenceSpec SequenceSpec::dilated(int k) const {
  if (k < 1) throw DomainError("dilation factor must be positive");
  SequenceSpec base = *this;
  return SequenceSpec("a_{" + std::to_string(k) + "d} with a = " + description_,
                      [base, k](std::int64_t d) {
                        std::int64_t kd = 0;
                        if (__builtin_mul_overflow(d, static_cast<std::int64_t>(k), &kd)) {
                          throw DomainError("sequence index overflow");
                        }
                        return base(kd);
                      });
}

const Stage& ConstructionState::stage(int m) const {
  if (m < 1 || m > static_cast<int>(stages.size())) throw DomainError("stage index out of range");
  return stages[static_cast<std::size_t>(m - 1)];
}

FactoredPoly ConstructionState::partial_sum(int first, int last) const {
  FactoredPoly s;
  for (int j = std::max(first, 1); j <= last; ++j) s += stage(j).Q;
  return s;
}

FactoredPoly ConstructionState::phi() const { return partial_sum(1, static_cast<int>(stages.size())); }

XReal ConstructionState::min_delta(int m) const {
  XReal v = XReal::infinity();
  for (int j = 1; j <= m; ++j) v = min(v, stage(j).delta);
  return v;
}

UniPoly make_q(std::int64_t zero_count) {
  if (zero_count <= 0) throw DomainError("make_q: zero count must be positive");
  if (zero_count > kMaxZeroCount) throw DomainError("make_q: zero count too large");
  const int n = static_cast<int>(zero_count);
  return UniPoly::monomial(n) - UniPoly::constant(Ball::from_xreal(XReal::pow2(-2 * static_cast<std::int64_t>(n))));
}

Stage make_stage(const ConstructionState& state, int m, const ConstructionOptions& options) {
  if (m < 2 || m - 1 > static_cast<int>(state.stages.size())) throw DomainError("make_stage: bad stage index");
  const Stage& prev = state.stage(m - 1);
  const Disk unit = Disk::unit();

  Stage s;
  s.m = m;
  s.zero_count = prev.a_at_d;
  s.q = make_q(s.zero_count);
  const FactoredPoly unscaled = FactoredPoly::product(Ball(1.0), state.lambda, 2 * prev.d, s.q);
  s.unscaled_norm = c1_norm_upper(unscaled, unit).upper;

  const XReal min_delta = state.min_delta(m - 1);
  s.cascade_bound = min_delta.mul_pow2(-m);
  s.c = div(min_delta.mul_pow2(-(m + 1)), s.unscaled_norm, Dir::Down).floor_pow2();
  if (options.corrupt_stage == m) s.c = s.c.mul_pow2(m + 2);
  s.Q = unscaled.scaled(Ball::from_xreal(s.c));
  if (!s.Q.dense().is_exact()) {
    throw PrecisionExhausted("Q_" + std::to_string(m) + " is not exactly representable", m);
  }
  s.norm = mul_up(s.c, s.unscaled_norm);
  if (!(s.norm < s.cascade_bound)) {
    throw CertificationFailure("cascade inequality fails at stage " + std::to_string(m) + ": " +
                                   s.norm.to_string() + " >= " + s.cascade_bound.to_string(),
                               m);
  }

  s.d = s.Q.degree();
  if (s.d != 2 * prev.d + static_cast<int>(s.zero_count)) {
    throw CertificationFailure("degree recurrence violated at stage " + std::to_string(m), m);
  }
  s.a_at_d = state.sequence(s.d);

  s.zeros = locate_zeros(s.Q, unit);
  if (static_cast<std::int64_t>(s.zeros.size()) != s.zero_count) {
    throw CertificationFailure("Q_" + std::to_string(m) + " has " + std::to_string(s.zeros.size()) +
                                   " zeros in B, expected " + std::to_string(s.zero_count),
                               m);
  }
  const XReal half = XReal::pow2(-1);
  for (const ZeroEnclosure& z : s.zeros) {
    if (!(add_up(z.disk.center.abs_upper(), z.disk.radius) < half)) {
      throw CertificationFailure("a zero of Q_" + std::to_string(m) + " is not inside B_1/2", m);
    }
  }
  s.stability = stability_radius(s.Q, unit, s.zeros);
  s.delta = s.stability->delta;
  return s;
}

ConstructionState begin_construction(const SequenceSpec& sequence, int M, const Ball& lambda,
                                     const Ball& epsilon) {
  if (M < 2) throw DomainError("truncation depth must be at least 2");
  if (!(XReal::from_double(1.0) < lambda.abs_lower())) throw DomainError("|lambda| must exceed 1");
  if (epsilon.contains_zero() || mpfr_sgn(epsilon.re()) <= 0 || !mpfr_zero_p(epsilon.im())) {
    throw DomainError("epsilon must be a positive real");
  }

  ConstructionState state;
  state.sequence = sequence;
  state.lambda = lambda;
  state.epsilon = epsilon;
  state.M = M;

  Stage first;
  first.m = 1;
  first.d = 1;
  first.delta = XReal::from_double(1.0);
  first.delta_by_convention = true;
  first.a_at_d = sequence(1);
  state.stages.push_back(std::move(first));
  return state;
}

void extend_construction(ConstructionState& state, const ConstructionOptions& options) {
  const int m = static_cast<int>(state.stages.size()) + 1;
  if (m > state.M) throw DomainError("construction already complete");
  try {
    state.stages.push_back(make_stage(state, m, options));
  } catch (const PrecisionExhausted& e) {
    rethrow_at(e, m);
  } catch (const CertificationFailure& e) {
    rethrow_at(e, m);
  } catch (const DomainError& e) {
    rethrow_at(e, m);
  }
}

ConstructionState build_stages(const SequenceSpec& sequence, int M, const Ball& lambda,
                               const Ball& epsilon, const ConstructionOptions& options) {
  ConstructionState state = begin_construction(sequence, M, lambda, epsilon);
  while (static_cast<int>(state.stages.size()) < M) extend_construction(state, options);
  return state;
}

BiPoly assemble_P(const ConstructionState& state, int m) {
  if (m < 1 || m > state.M) throw DomainError("assemble_P: stage out of range");
  const UniPoly sum = state.partial_sum(1, m).dense();
  BiPoly P = BiPoly::w2() - BiPoly::from_w1(sum).scaled(state.epsilon);
  for (const auto& [key, c] : P.terms()) {
    if (!c.is_exact()) {
      throw PrecisionExhausted("coefficients of P_" + std::to_string(m) +
                                   " are not exactly representable at " +
                                   std::to_string(working_precision()) + " bits",
                               m);
    }
  }
  return P;
}

double bump_rho(std::complex<double> w) {
  const double r = std::abs(w);
  if (r <= 0.5) return 1.0;
  if (r >= 2.0 / 3.0) return 0.0;
  const double t = (2.0 / 3.0 - r) * 6.0;
  const double a = t > 0 ? std::exp(-1.0 / t) : 0.0;
  const double b = t < 1 ? std::exp(-1.0 / (1.0 - t)) : 0.0;
  double g = (a + b) > 0 ? a / (a + b) : (t > 0.5 ? 1.0 : 0.0);
  // Keep the open-annulus values strictly inside (0, 1) despite underflow.
  g = std::clamp(g, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
  return g;
}

EmbeddingPoint sample_embedding(const ConstructionState& state, std::complex<double> w) {
  const double rho = bump_rho(w);
  const Ball w1(w);
  if (rho == 0.0) return {w1, Ball()};
  Ball w2 = state.epsilon * state.phi().eval(w1);
  if (rho != 1.0) w2 = w2 * Ball(rho);
  return {w1, w2};
}

namespace {

// Bump profile g(t) = 1 / (1 + e^u), u = 1/t - 1/(1-t), so that
// g'(t) = g(1-g) (1/t^2 + 1/(1-t)^2) with g(1-g) = 1 / (4 cosh^2(u/2)).
// Bounds g' on [t0, t1] from the monotonicity of u and of the weight.
long double profile_slope_on(long double t0, long double t1) {
  auto u = [](long double t) { return 1.0L / t - 1.0L / (1.0L - t); };
  if (t0 == 0.0L || t1 == 1.0L) {
    // Near an end g(1-g) <= e^{-|u|} and e^{-1/t}/t^2 increases on (0, 1/2).
    const long double t = t0 == 0.0L ? t1 : 1.0L - t0;
    return std::exp(1.0L / (1.0L - t)) * std::exp(-1.0L / t) * (1.0L / (t * t) + 1.0L / ((1 - t) * (1 - t)));
  }
  const long double u0 = u(t0), u1 = u(t1);
  const long double umin = (u0 >= 0 && u1 <= 0) ? 0.0L : std::min(std::abs(u0), std::abs(u1));
  const long double c = std::cosh(umin / 2);
  return (1.0L / (t0 * t0) + 1.0L / ((1 - t1) * (1 - t1))) / (4 * c * c);
}

}  // namespace

XReal bump_slope_bound() {
  static const XReal v = [] {
    constexpr int kPieces = 1 << 14;
    long double g = 0;
    for (int k = 0; k < kPieces; ++k) {
      g = std::max(g, profile_slope_on(static_cast<long double>(k) / kPieces,
                                       static_cast<long double>(k + 1) / kPieces));
    }
    // t = 6 (2/3 - r); the pad absorbs long double rounding.
    return XReal::from_double(static_cast<double>(6 * g * (1 + 1e-9L)));
  }();
  return v;
}

EmbeddingBounds embedding_bounds(const ConstructionState& state) {
  EmbeddingBounds b;
  for (const Stage& s : state.stages) b.phi_norm = add_up(b.phi_norm, s.norm);
  const Disk annulus_hull(Ball(0.0), XReal::parse("0.66666666666666667", Dir::Up));
  b.phi_sup_annulus = min(max_modulus_on_circle(state.phi(), annulus_hull).upper, b.phi_norm);
  b.bump_slope = bump_slope_bound();
  const XReal eps = state.epsilon.abs_upper();
  b.c0 = mul_up(eps, b.phi_norm);
  // |grad(rho phi)| <= |grad rho| |phi| + |phi'|, with grad rho supported in |w| <= 2/3
  b.c1 = mul_up(eps, max(b.phi_norm, add_up(mul_up(b.bump_slope, b.phi_sup_annulus), b.phi_norm)));
  return b;
}

}  // namespace bzcert
