#include "bzcert/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "bzcert/errors.hpp"
#include "json.hpp"

namespace bzcert {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kMinPrecision = 53;
constexpr int kMaxStages = 12;
constexpr int kMaxResolution = 4096;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

std::string fmt_mpfr(mpfr_srcptr x) {
  char buf[96];
  mpfr_snprintf(buf, sizeof buf, "%.24Re", x);
  return buf;
}

json real(const XReal& x) { return {{"value", x.to_string()}, {"exact", x.to_hex()}}; }

std::string ratio_string(std::int64_t num, std::int64_t den) {
  if (den == 0) return "undefined";
  const std::int64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

bool same_ball(const Ball& a, const Ball& b) {
  return mpfr_equal_p(a.re(), b.re()) && mpfr_equal_p(a.im(), b.im()) && a.rad() == b.rad();
}

bool same_poly(const BiPoly& a, const BiPoly& b) {
  if (a.terms().size() != b.terms().size()) return false;
  auto it = b.terms().begin();
  for (const auto& [key, c] : a.terms()) {
    if (it->first != key || !same_ball(c, it->second)) return false;
    ++it;
  }
  return true;
}

const char* error_kind(const Error& e) {
  if (dynamic_cast<const CertificationFailure*>(&e)) return "certification_failure";
  if (dynamic_cast<const PrecisionExhausted*>(&e)) return "precision_exhausted";
  if (dynamic_cast<const ConfigError*>(&e)) return "config_error";
  if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
  if (dynamic_cast<const IoError*>(&e)) return "io_error";
  return "error";
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const CertificationFailure*>(&e)) return kExitCertification;
  if (dynamic_cast<const PrecisionExhausted*>(&e)) return kExitPrecision;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  return kExitConfig;
}

struct Resolved {
  SequenceSpec sequence;
  double epsilon = 0;
  std::complex<double> lambda;
  std::vector<double> sweep;
  std::optional<BiPoly> curve;
  long start_bits = 0;
  long max_bits = 0;
};

Resolved resolve(const RunConfig& cfg) {
  Resolved r;
  if (cfg.stages < 2) throw ConfigError("--stages must be at least 2");
  if (cfg.stages > kMaxStages) throw ConfigError("--stages must be at most " + std::to_string(kMaxStages));
  if (cfg.resolution < 2 || cfg.resolution > kMaxResolution) {
    throw ConfigError("--resolution must lie in 2.." + std::to_string(kMaxResolution));
  }
  if (cfg.corrupt_stage < 0) throw ConfigError("corrupt stage must be non-negative");
  r.sequence = SequenceSpec::parse(cfg.sequence);
  r.epsilon = parse_epsilon(cfg.epsilon);
  r.lambda = parse_lambda(cfg.lambda);
  if (!(std::abs(r.lambda) > 1.0)) throw ConfigError("|lambda| must exceed 1");
  if (!cfg.epsilon_sweep.empty()) r.sweep = parse_epsilon_list(cfg.epsilon_sweep);
  if (!cfg.general_curve.empty()) {
    Expr e = Expr::parse(cfg.general_curve);
    std::string bad;
    if (!e.uses_only("w1 w2 i", &bad)) throw ConfigError("unknown variable '" + bad + "' in general curve");
    r.curve = e.eval_bipoly();
  }
  std::tie(r.start_bits, r.max_bits) = resolve_precision(cfg.precision, cfg.precision_max);
  return r;
}

json stage_json(const Stage& s) {
  json j = {{"m", s.m},
            {"status", "certified"},
            {"d", s.d},
            {"a_at_d", s.a_at_d},
            {"zero_count", s.zero_count},
            {"c", real(s.c)},
            {"delta", real(s.delta)},
            {"delta_by_convention", s.delta_by_convention},
            {"unscaled_norm", real(s.unscaled_norm)},
            {"norm", real(s.norm)},
            {"cascade_bound", real(s.cascade_bound)},
            {"cascade_holds", s.m == 1 || s.norm < s.cascade_bound},
            {"zeros_located", s.zeros.size()},
            {"stability", nullptr}};
  if (s.stability) {
    j["stability"] = {{"boundary_min", real(s.stability->boundary_min)},
                      {"circle_min", real(s.stability->circle_min)},
                      {"derivative_min", real(s.stability->derivative_min)},
                      {"separation", real(s.stability->separation)}};
  }
  return j;
}

json tail_json(const TailBound& t, bool vacuous) {
  return {{"holds", t.holds}, {"vacuous", vacuous},     {"norm", real(t.norm)},
          {"direct", real(t.direct)}, {"ledger", real(t.ledger)}, {"delta_next", real(t.delta_next)}};
}

json certificate_json(const IntersectionCertificate& c, const ConstructionState& st) {
  json enc = json::array();
  for (const ZeroEnclosure& z : c.enclosures) {
    enc.push_back({fmt_mpfr(z.disk.center.re()), fmt_mpfr(z.disk.center.im()), z.disk.radius.to_string()});
  }
  return {{"m", c.m},
          {"status", "certified"},
          {"curve_degree", c.curve_degree},
          {"target_count", c.target_count},
          {"count", c.count},
          {"bezout_bound", c.bezout_bound},
          {"violation_ratio", ratio_string(c.target_count, c.bezout_bound)},
          {"transversal", c.transversal},
          {"positively_oriented", c.positively_oriented},
          {"orientation_basis", "holomorphic graph over the disk"},
          {"global_transversality_certified", c.global_transversality_certified},
          {"localization_radius", "0.55"},
          {"residuals_within_width", c.residuals_within_width},
          {"max_enclosure_radius", real(c.max_enclosure_radius)},
          {"min_derivative_lower_bound", real(c.min_derivative)},
          {"max_residual", real(c.max_residual)},
          {"reduced_poly_degree", c.reduced_poly.degree()},
          {"reduced_poly_digest", c.reduced_poly_digest},
          {"tail", tail_json(c.tail, c.m == st.M - 1)},
          {"enclosures", enc}};
}

/// Mutable record of one attempt at a fixed precision.
struct Attempt {
  json stages = json::array();
  json certificates = json::array();
  json curves = json::array();
  json embedding = nullptr;
  json sweep = nullptr;
  json general = nullptr;
  int context_stage = 0;
  std::optional<ConstructionState> state;
  std::optional<IntersectionCertificate> last;
};

void run_attempt(const Resolved& r, const RunConfig& cfg, Attempt& a) {
  const Ball eps(r.epsilon);
  const Ball lambda(r.lambda);
  const int M = cfg.stages;

  a.context_stage = 1;
  ConstructionState st = begin_construction(r.sequence, M, lambda, eps);
  a.stages.push_back(stage_json(st.stage(1)));
  while (static_cast<int>(st.stages.size()) < M) {
    a.context_stage = static_cast<int>(st.stages.size()) + 1;
    try {
      extend_construction(st, ConstructionOptions{cfg.corrupt_stage});
    } catch (const Error&) {
      a.stages.push_back({{"m", a.context_stage}, {"status", "failed"}});
      throw;
    }
    a.stages.push_back(stage_json(st.stages.back()));
  }

  std::vector<std::int64_t> counts;
  std::vector<std::string> digests;
  for (int m = 1; m <= M - 1; ++m) {
    a.context_stage = m;
    try {
      IntersectionCertificate cert = certify_intersections(st, m);
      a.certificates.push_back(certificate_json(cert, st));
      counts.push_back(cert.count);
      digests.push_back(cert.reduced_poly_digest);
      if (m == M - 1) a.last = std::move(cert);
    } catch (const Error&) {
      a.certificates.push_back({{"m", m}, {"status", "failed"}});
      throw;
    }
  }
  a.state = st;

  const EmbeddingBounds eb = embedding_bounds(st);
  a.embedding = {{"c0_bound", real(eb.c0)},
                 {"c1_bound", real(eb.c1)},
                 {"bump_slope", real(eb.bump_slope)},
                 {"within_epsilon", eb.c1 <= st.epsilon.abs_upper()}};

  // Exact curve coefficients may need more bits than the certificates; raise
  // the precision for this step alone, within the same cap.
  for (int m = 1; m <= M; ++m) {
    a.context_stage = m;
    for (long bits = working_precision();; bits *= 2) {
      PrecisionScope scope(bits);
      try {
        const TriHomPoly curve = emit_curve(st, m);
        const bool round_trip = same_poly(dehomogenize(curve), assemble_P(st, m));
        if (!round_trip) throw CertificationFailure("dehomogenization does not recover P_" + std::to_string(m), m);
        a.curves.push_back({{"m", m},
                            {"degree", curve.degree()},
                            {"d", st.stage(m).d},
                            {"terms", curve.terms().size()},
                            {"bits", bits},
                            {"round_trip_exact", round_trip}});
        break;
      } catch (const PrecisionExhausted&) {
        if (bits * 2 > r.max_bits) throw;
      }
    }
  }

  if (!r.sweep.empty()) {
    a.sweep = json::array();
    for (double e : r.sweep) {
      a.context_stage = 0;
      const ConstructionState s2 = build_stages(r.sequence, M, lambda, Ball(e));
      std::vector<std::int64_t> c2;
      std::vector<std::string> d2;
      for (int m = 1; m <= M - 1; ++m) {
        a.context_stage = m;
        const IntersectionCertificate cert = certify_intersections(s2, m);
        c2.push_back(cert.count);
        d2.push_back(cert.reduced_poly_digest);
      }
      const bool consistent = c2 == counts && d2 == digests;
      a.sweep.push_back({{"epsilon", fmt_double(e)}, {"counts", c2}, {"digests", d2}, {"consistent", consistent}});
      if (!consistent) {
        throw CertificationFailure("epsilon sweep: results at epsilon = " + fmt_double(e) +
                                   " differ from the main run");
      }
    }
  }

  if (r.curve) {
    a.context_stage = 0;
    const GeneralCurveSpec spec = validate_general_curve(*r.curve);
    json g = {{"curve", cfg.general_curve},
              {"k", spec.k},
              {"boxes", spec.boxes},
              {"max_depth", spec.max_depth},
              {"branch_gap", real(spec.min_branch_gap)},
              {"stages", json::array()},
              {"certificates", json::array()}};
    a.general = g;
    ConstructionState sg = begin_construction(r.sequence.dilated(spec.k), M, lambda, eps);
    a.general["sequence"] = sg.sequence.description();
    while (static_cast<int>(sg.stages.size()) < M) {
      a.context_stage = static_cast<int>(sg.stages.size()) + 1;
      extend_construction(sg);
    }
    for (const Stage& s : sg.stages) {
      a.general["stages"].push_back({{"m", s.m}, {"d", s.d}, {"b_at_d", s.a_at_d}, {"delta", real(s.delta)}});
    }
    for (int m = 1; m <= M - 1; ++m) {
      a.context_stage = m;
      const GeneralCurveCertificate gc = certify_general_curve_intersections(spec, sg, m);
      const std::int64_t a_kd = r.sequence(static_cast<std::int64_t>(spec.k) * sg.stage(m).d);
      a.general["certificates"].push_back({{"m", m},
                                           {"count", gc.count},
                                           {"b_at_d", gc.b_at_d},
                                           {"a_at_kd", a_kd},
                                           {"count_at_least_a_at_kd", gc.count >= a_kd},
                                           {"points", gc.points.size()},
                                           {"curve_degree", gc.curve_degree},
                                           {"bezout_bound", gc.bezout_bound},
                                           {"violation_ratio", ratio_string(gc.count, gc.bezout_bound)},
                                           {"transversal", gc.diagonal.transversal},
                                           {"cross_branch_excluded", gc.cross_branch_excluded},
                                           {"tail_sup", real(gc.tail_sup)},
                                           {"max_admissible_epsilon", real(gc.max_admissible_epsilon)}});
    }
  }
}

json config_echo(const RunConfig& cfg, const std::optional<Resolved>& r) {
  json j = {{"sequence", cfg.sequence},
            {"stages", cfg.stages},
            {"epsilon", cfg.epsilon},
            {"lambda", cfg.lambda},
            {"epsilon_sweep", cfg.epsilon_sweep.empty() ? json(nullptr) : json(cfg.epsilon_sweep)},
            {"general_curve", cfg.general_curve.empty() ? json(nullptr) : json(cfg.general_curve)},
            {"resolution", cfg.resolution},
            {"corrupt_stage", cfg.corrupt_stage},
            {"resolved", nullptr}};
  if (r) {
    json sweep = json::array();
    for (double e : r->sweep) sweep.push_back(fmt_double(e));
    j["resolved"] = {{"sequence", r->sequence.description()},
                     {"epsilon", fmt_double(r->epsilon)},
                     {"lambda", {fmt_double(r->lambda.real()), fmt_double(r->lambda.imag())}},
                     {"epsilon_sweep", sweep},
                     {"precision_start", r->start_bits},
                     {"precision_max", r->max_bits}};
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

double parse_epsilon(const std::string& text) {
  const std::string s = text;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  while (end && *end == ' ') ++end;
  if (s.empty() || end == s.c_str() || *end != '\0') throw ConfigError("cannot parse epsilon '" + text + "'");
  if (!std::isfinite(v) || !(v > 0.0)) throw ConfigError("epsilon must be a positive finite real, got '" + text + "'");
  return v;
}

std::vector<double> parse_epsilon_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream in(csv);
  for (std::string item; std::getline(in, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty entry in epsilon sweep");
    out.push_back(parse_epsilon(item.substr(b)));
  }
  if (out.empty()) throw ConfigError("empty epsilon sweep");
  return out;
}

std::complex<double> parse_lambda(const std::string& text) {
  Expr e = Expr::parse(text);
  std::string bad;
  if (!e.uses_only("i", &bad)) throw ConfigError("unknown symbol '" + bad + "' in lambda (use i)");
  const BiPoly p = e.eval_bipoly();
  const std::complex<double> z = p.coeff(0, 0).to_complex();
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ConfigError("lambda is not finite");
  return z;
}

std::pair<long, long> resolve_precision(long start, long max) {
  if (start < 0 || max < 0) throw ConfigError("precision must be positive");
  if (start == 0 && max == 0) return {kDefaultPrecisionStart, kDefaultPrecisionMax};
  if (start == 0) start = std::min(kDefaultPrecisionStart, max);
  if (max == 0) max = std::max(kDefaultPrecisionMax, start);
  if (start < kMinPrecision) throw ConfigError("precision must be at least " + std::to_string(kMinPrecision) + " bits");
  if (start > max) throw ConfigError("--precision exceeds --precision-max");
  if (max > (1L << 24)) throw ConfigError("--precision-max too large");
  return {start, max};
}

void emit_samples(const ConstructionState& state, const IntersectionCertificate& cert, int resolution,
                  const std::string& path) {
  if (resolution < 2) throw ConfigError("resolution must be at least 2");
  std::ostringstream out;
  out << "kind,w1_re,w1_im,w2_re,w2_im\n";
  char line[160];
  auto row = [&](const char* kind, std::complex<double> w1, std::complex<double> w2) {
    std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g,%.17g\n", kind, w1.real(), w1.imag(), w2.real(),
                  w2.imag());
    out << line;
  };
  const double step = 2.0 / (resolution - 1);
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const std::complex<double> w(-1.0 + i * step, -1.0 + j * step);
      if (std::abs(w) > 1.0) continue;
      const EmbeddingPoint p = sample_embedding(state, w);
      row("surface", w, p.w2.to_complex());
    }
  }
  const FactoredPoly graph = state.partial_sum(1, cert.m);
  for (int i = 0; i < resolution; ++i) {
    const Ball w1(-1.0 + i * step);
    row("curve-slice", w1.to_complex(), (state.epsilon * graph.eval(w1)).to_complex());
  }
  for (const LiftedPoint& p : cert.points) row("intersection", p.w1.to_complex(), p.w2.to_complex());
  write_text(path, out.str());
}

std::string strip_timing(const std::string& report) {
  json j = json::parse(report);
  j.erase("timing");
  return j.dump(2);
}

RunResult run_pipeline(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  ensure_wide_exponent_range();
  RunResult result;
  json attempts = json::array();
  json timing_attempts = json::array();
  json failure = nullptr;
  std::optional<Resolved> resolved;
  Attempt last;
  long final_bits = 0;

  auto fail = [&](const char* kind, int stage, const std::string& message, int code) {
    failure = {{"kind", kind}, {"stage", stage == 0 ? json(nullptr) : json(stage)}, {"message", message}};
    result.exit_code = code;
    result.error = message;
  };

  try {
    resolved = resolve(cfg);
  } catch (const Error& e) {
    fail(error_kind(e), 0, e.what(), exit_code_for(e));
  }

  if (resolved) {
    for (long bits = resolved->start_bits; bits <= resolved->max_bits; bits *= 2) {
      const auto ta = Clock::now();
      Attempt a;
      PrecisionScope scope(bits);
      json rec = {{"bits", bits}};
      bool retry = false;
      try {
        run_attempt(*resolved, cfg, a);
        rec["outcome"] = "pass";
        final_bits = bits;
        failure = nullptr;
        result.exit_code = kExitPass;
        result.error.clear();
      } catch (const Error& e) {
        const int stage = e.stage() != 0 ? e.stage() : a.context_stage;
        rec["outcome"] = error_kind(e);
        rec["stage"] = stage == 0 ? json(nullptr) : json(stage);
        rec["message"] = e.what();
        fail(error_kind(e), stage, e.what(), exit_code_for(e));
        retry = dynamic_cast<const PrecisionExhausted*>(&e) != nullptr;
      } catch (const std::exception& e) {
        rec["outcome"] = "internal_error";
        rec["message"] = e.what();
        fail("internal_error", a.context_stage, e.what(), 1);
      }
      attempts.push_back(rec);
      timing_attempts.push_back({{"bits", bits}, {"seconds", seconds_since(ta)}});
      last = std::move(a);
      if (!retry) break;
    }
  }

  if (result.exit_code == kExitPass && !cfg.samples_path.empty() && last.state && last.last) {
    PrecisionScope scope(final_bits);
    try {
      emit_samples(*last.state, *last.last, cfg.resolution, cfg.samples_path);
    } catch (const Error& e) {
      fail(error_kind(e), 0, e.what(), exit_code_for(e));
    }
  }

  json report = {{"schema_version", kReportSchemaVersion},
                 {"config", config_echo(cfg, resolved)},
                 {"precision", {{"attempts", attempts}, {"final_bits", final_bits == 0 ? json(nullptr) : json(final_bits)}}},
                 {"stages", last.stages},
                 {"certificates", last.certificates},
                 {"curves", last.curves},
                 {"embedding", last.embedding},
                 {"epsilon_sweep", last.sweep},
                 {"general_curve", last.general},
                 {"verdict", result.exit_code == kExitPass ? "PASS" : "FAIL"},
                 {"exit_code", result.exit_code},
                 {"failure", failure}};
  report["timing"] = {{"attempts", timing_attempts}, {"total_seconds", seconds_since(t0)}};
  result.report = report.dump(2);

  if (!cfg.report_path.empty()) {
    try {
      write_text(cfg.report_path, result.report + "\n");
    } catch (const IoError& e) {
      fail("io_error", 0, e.what(), kExitIo);
      report["verdict"] = "FAIL";
      report["exit_code"] = result.exit_code;
      report["failure"] = failure;
      result.report = report.dump(2);
    }
  }
  return result;
}

}  // namespace bzcert
