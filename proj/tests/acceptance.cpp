// Acceptance runner: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "bzcert/certification.hpp"
#include "bzcert/errors.hpp"
#include "bzcert/norms.hpp"
#include "bzcert/pipeline.hpp"
#include "json.hpp"
#include "oracle.hpp"

using namespace bzcert;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (pass) detail.str("");
      pass = false;
      detail << what << "; ";
    }
  }
};

template <class T>
std::string list(const std::vector<T>& v) {
  std::ostringstream s;
  s << '[';
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  s << ']';
  return s.str();
}

const RunResult& default_run() {
  static const RunResult r = run_pipeline(RunConfig{});
  return r;
}

json default_report() { return json::parse(default_run().report); }

const ConstructionState& default_state() {
  static const ConstructionState st = [] {
    PrecisionScope scope(kDefaultPrecisionStart);
    return build_stages(SequenceSpec::parse("d^2"), 4, Ball(2.0), Ball(1e-3));
  }();
  return st;
}

void headline(Outcome& o) {
  const json j = default_report();
  o.require(j["exit_code"] == 0, "default run exit code " + j["exit_code"].dump());
  std::vector<std::int64_t> counts, bounds;
  bool ok = true;
  for (const json& c : j["certificates"]) {
    if (c["status"] != "certified") continue;
    counts.push_back(c["count"]);
    bounds.push_back(c["bezout_bound"]);
    ok = ok && c["transversal"] == true && c["localization_radius"] == "0.55" &&
         c["residuals_within_width"] == true;
  }
  o.require(counts == std::vector<std::int64_t>{1, 9, 225}, "counts " + list(counts));
  o.require(bounds == std::vector<std::int64_t>{1, 3, 15}, "bounds " + list(bounds));
  o.require(ok, "a certificate is not transversal inside B_0.55");
  const double secs = json::parse(default_run().report)["timing"]["total_seconds"];
  o.require(secs < 300, "runtime over 5 minutes");
  if (o.pass) o.detail << "counts " << list(counts) << " vs bounds " << list(bounds) << ", " << secs << " s";
}

void cascade(Outcome& o) {
  const json j = default_report();
  int checked = 0;
  for (const json& s : j["stages"]) {
    if (s["m"].get<int>() < 2) continue;
    ++checked;
    const XReal norm = XReal::parse_hex(s["norm"]["exact"].get<std::string>());
    const XReal bound = XReal::parse_hex(s["cascade_bound"]["exact"].get<std::string>());
    o.require(s["cascade_holds"] == true && norm < bound, "stage " + s["m"].dump() + " gap not certified");
  }
  o.require(checked == 3, "expected stages 2..4 in the ledger");
  std::vector<int> codes;
  for (int m = 2; m <= 4; ++m) {
    RunConfig c;
    c.corrupt_stage = m;
    codes.push_back(run_pipeline(c).exit_code);
    o.require(codes.back() == kExitCertification, "mutated stage " + std::to_string(m) + " exit " +
                                                      std::to_string(codes.back()));
  }
  if (o.pass) o.detail << "strict gaps at m = 2..4; mutated stages 2,3,4 exit " << list(codes);
}

void tail(Outcome& o) {
  const json j = default_report();
  int certified = 0;
  for (const json& c : j["certificates"]) {
    const int m = c["m"];
    if (m > 2) continue;  // m <= M - 2
    const json& t = c["tail"];
    const XReal norm = XReal::parse_hex(t["norm"]["exact"].get<std::string>());
    const XReal delta = XReal::parse_hex(t["delta_next"]["exact"].get<std::string>());
    o.require(t["holds"] == true && t["vacuous"] == false && norm < delta, "tail at m = " + std::to_string(m));
    o.detail << "m=" << m << ": " << t["norm"]["value"].get<std::string>() << " < "
             << t["delta_next"]["value"].get<std::string>() << "; ";
    ++certified;
  }
  o.require(certified == 2, "missing tail certificates");
}

void sweep(Outcome& o) {
  RunConfig c;
  c.epsilon_sweep = "1e-1,1e-3,1e-6";
  const RunResult r = run_pipeline(c);
  o.require(r.exit_code == 0, "sweep run exit " + std::to_string(r.exit_code));
  if (!o.pass) return;
  const json j = json::parse(r.report);
  for (const json& e : j["epsilon_sweep"]) {
    o.require(e["consistent"] == true, "eps " + e["epsilon"].get<std::string>() + " differs");
    o.detail << e["epsilon"].get<std::string>() << " -> " << e["counts"].dump() << "; ";
  }
  o.require(j["epsilon_sweep"].size() == 3, "sweep incomplete");
}

void oracle_equivalence(Outcome& o) {
  PrecisionScope scope(kDefaultPrecisionStart);
  std::mt19937_64 rng(20240611);
  int polys = 0, redraws = 0, matched = 0;
  while (polys < 50) {
    const int degree = 1 + static_cast<int>(rng() % 30);
    const auto a = oracle::random_poly(rng, degree);
    const auto roots = oracle::roots(a);
    bool ambiguous = false;
    const int expected = oracle::count_inside(roots, 0, 1.0, 1e-6, &ambiguous);
    if (ambiguous) {  // a root within 1e-6 of the circle; the winding count is ill-posed there
      ++redraws;
      continue;
    }
    ++polys;
    const FactoredPoly p(oracle::to_uni(a));
    const int got = count_zeros_winding(p, Disk::unit());
    o.require(got == expected, "poly " + std::to_string(polys) + ": winding " + std::to_string(got) +
                                   " vs oracle " + std::to_string(expected));
    const auto zs = locate_zeros(p, Disk::unit());
    bool one_to_one = static_cast<int>(zs.size()) == expected;
    for (const auto& r : roots) {
      const std::complex<double> rc(static_cast<double>(r.real()), static_cast<double>(r.imag()));
      if (std::abs(rc) >= 1.0) continue;
      int hits = 0;
      for (const auto& z : zs) hits += std::abs(rc - z.disk.center.to_complex()) <= z.disk.radius.to_double() + 1e-15;
      one_to_one = one_to_one && hits == 1;
    }
    o.require(one_to_one, "poly " + std::to_string(polys) + ": enclosures do not match the oracle roots");
    matched += one_to_one;
  }
  if (o.pass) o.detail << "50/50 counts agree, " << matched << " enclosure sets match one to one, " << redraws
                       << " near-circle draws skipped";
}

void rouche(Outcome& o) {
  PrecisionScope scope(kDefaultPrecisionStart);
  std::mt19937_64 rng(1618);
  struct Subject {
    FactoredPoly p;
    std::vector<ZeroEnclosure> zeros;
    XReal delta;
  };
  std::vector<Subject> subjects;
  for (int m = 2; m <= 3; ++m) {
    const Stage& s = default_state().stage(m);
    subjects.push_back({s.Q, s.zeros, s.delta});
  }
  while (subjects.size() < 20) {
    const auto a = oracle::random_poly(rng, 2 + static_cast<int>(rng() % 12));
    bool ambiguous = false;
    oracle::count_inside(oracle::roots(a), 0, 1.0, 1e-3, &ambiguous);
    if (ambiguous) continue;
    const FactoredPoly p(oracle::to_uni(a));
    auto zs = locate_zeros(p, Disk::unit());
    const XReal delta = stability_radius(p, Disk::unit(), zs).delta;
    subjects.push_back({p, std::move(zs), delta});
  }
  int trials = 0;
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    const Subject& s = subjects[i];
    o.require(s.delta.sign() > 0, "subject " + std::to_string(i) + " has no stability radius");
    for (int k = 0; k < 10 && s.delta.sign() > 0; ++k) {
      const UniPoly g = oracle::to_uni(oracle::random_poly(rng, static_cast<int>(rng() % 6)));
      const XReal n = c1_norm_upper(FactoredPoly(g), Disk::unit()).upper;
      const XReal scale = div(mul(s.delta, XReal::from_double(0.99), Dir::Down), n, Dir::Down);
      const UniPoly h = g.scaled(Ball::from_xreal(scale));
      const FactoredPoly q(s.p.dense() + h);
      bool ok = c1_norm_upper(FactoredPoly(h), Disk::unit()).upper <= s.delta;
      ok = ok && count_zeros_winding(q, Disk::unit()) == static_cast<int>(s.zeros.size());
      const auto moved = locate_zeros(q, Disk::unit());
      ok = ok && moved.size() == s.zeros.size();
      for (const auto& z : moved) ok = ok && z.simple && z.derivative_lower_bound.sign() > 0;
      o.require(ok, "subject " + std::to_string(i) + " perturbation " + std::to_string(k));
      ++trials;
    }
  }
  if (o.pass) o.detail << "20 subjects (Q_2, Q_3 and 18 random) x 10 perturbations at 0.99 delta: " << trials
                       << " preserved count and simplicity";
}

void embedding(Outcome& o) {
  PrecisionScope scope(kDefaultPrecisionStart);
  const ConstructionState& st = default_state();
  const FactoredPoly phi = st.phi();
  int outer = 0, inner = 0;
  for (int i = -40; i <= 40; ++i) {
    for (int j = -40; j <= 40; ++j) {
      const std::complex<double> w(i / 40.0, j / 40.0);
      const double r = std::abs(w);
      if (r > 1.0) continue;
      const EmbeddingPoint p = sample_embedding(st, w);
      o.require(p.w1.to_complex() == w && p.w1.is_exact(), "w1 is not the grid point");
      if (r >= 2.0 / 3.0) {
        o.require(p.w2.is_exact_zero(), "nonzero w2 outside the bump support");
        ++outer;
      } else if (r <= 0.5) {
        o.require((p.w2 - st.epsilon * phi.eval(Ball(w))).contains_zero(), "graph differs from eps phi");
        ++inner;
      }
    }
  }
  const EmbeddingBounds b = embedding_bounds(st);
  const XReal eps = st.epsilon.abs_upper();
  o.require(b.c0 <= eps, "C0 bound above eps");
  o.require(b.c1 <= eps, "C1 bound above eps");
  if (o.pass) o.detail << outer << " points with |w| >= 2/3 on the inclusion, " << inner
                       << " with |w| <= 1/2 on eps phi; C0 <= " << b.c0.to_string() << ", C1 <= "
                       << b.c1.to_string() << " (eps = 1e-3)";
}

void general_curve(Outcome& o) {
  RunConfig c;
  c.sequence = "d";
  c.general_curve = "w2^2 - (w1-3)(w1-4)";
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run_pipeline(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(r.exit_code == 0, "run exit " + std::to_string(r.exit_code) + ": " + r.error);
  if (!o.pass) return;
  const json g = json::parse(r.report)["general_curve"];
  for (const json& cert : g["certificates"]) {
    if (cert["m"] != 2) continue;
    const std::int64_t count = cert["count"], b = cert["b_at_d"];
    o.require(count >= 2 * b, "count below 2 b_{d_2}");
    o.require(cert["cross_branch_excluded"] == true, "cross-branch exclusion failed");
    o.require(cert["transversal"] == true, "not transversal");
    o.detail << "m=2: count " << count << " >= 2*b_{d_2} = " << 2 * b << ", Bezout bound "
             << cert["bezout_bound"].get<std::int64_t>() << ", cross-branch excluded, ";
  }
  o.require(secs < 300, "runtime over 5 minutes");
  o.detail << secs << " s";
}

void homogenization(Outcome& o) {
  const json j = default_report();
  std::vector<int> degrees, d;
  for (const json& c : j["curves"]) {
    degrees.push_back(c["degree"]);
    d.push_back(c["d"]);
    o.require(c["round_trip_exact"] == true, "round trip of curve " + c["m"].dump());
  }
  o.require(degrees.size() == 4, "expected curves for m = 1..4");
  o.require(degrees == d, "degrees " + list(degrees) + " vs d_m " + list(d));
  if (o.pass) o.detail << "degrees " << list(degrees) << " = d_m, all round trips exact";
}

void determinism(Outcome& o) {
  const RunResult again = run_pipeline(RunConfig{});
  o.require(strip_timing(again.report) == strip_timing(default_run().report), "reports differ");
  RunConfig capped;
  capped.precision_max = 64;
  const RunResult r = run_pipeline(capped);
  o.require(r.exit_code == kExitPrecision, "64-bit cap exit " + std::to_string(r.exit_code));
  const json j = json::parse(r.report);
  for (const json& c : j["certificates"]) {
    if (c["status"] == "certified") {
      const std::vector<std::int64_t> expected{1, 9, 225};
      o.require(c["count"] == expected[c["m"].get<std::size_t>() - 1], "wrong count under the cap");
    }
  }
  if (o.pass) o.detail << "reports identical modulo timing; 64-bit cap exits 3 (" << r.error << ")";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"headline Bezout violation", headline},
      {"cascade inequality", cascade},
      {"tail bound", tail},
      {"epsilon independence", sweep},
      {"oracle equivalence", oracle_equivalence},
      {"Rouche soundness", rouche},
      {"embedding properties", embedding},
      {"general curve", general_curve},
      {"homogenization", homogenization},
      {"determinism and precision policy", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("criterion %2zu %s: %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
