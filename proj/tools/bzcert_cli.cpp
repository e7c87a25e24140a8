#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "bzcert/bzcert.h"
#include "json.hpp"

namespace {

void print_summary(const std::string& report) {
  const auto j = nlohmann::json::parse(report, nullptr, false);
  if (j.is_discarded()) return;
  for (const auto& c : j["certificates"]) {
    if (c.value("status", "") != "certified") {
      std::fprintf(stderr, "stage %d: FAILED\n", c["m"].get<int>());
      continue;
    }
    std::fprintf(stderr, "stage %d: %lld certified transversal intersections, bezout bound %lld, ratio %s\n",
                 c["m"].get<int>(), c["count"].get<long long>(), c["bezout_bound"].get<long long>(),
                 c["violation_ratio"].get<std::string>().c_str());
  }
  if (j["general_curve"].is_object()) {
    for (const auto& c : j["general_curve"]["certificates"]) {
      std::fprintf(stderr, "general curve stage %d: %lld intersections, bezout bound %lld\n", c["m"].get<int>(),
                   c["count"].get<long long>(), c["bezout_bound"].get<long long>());
    }
  }
  if (j["failure"].is_object()) {
    std::fprintf(stderr, "failure (%s): %s\n", j["failure"]["kind"].get<std::string>().c_str(),
                 j["failure"]["message"].get<std::string>().c_str());
  }
  std::fprintf(stderr, "verdict: %s\n", j["verdict"].get<std::string>().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified intersection counts for perturbed algebraic curves"};
  std::string sequence = "d^2", epsilon = "1e-3", lambda = "2", sweep, curve, report, samples;
  int stages = 4, resolution = 33, corrupt = 0;
  long precision = 0, precision_max = 0;
  app.add_option("--sequence", sequence, "closed form in d, or @file with a table")->capture_default_str();
  app.add_option("--stages", stages, "truncation depth M (>= 2)")->capture_default_str();
  app.add_option("--epsilon", epsilon, "perturbation size (> 0)")->capture_default_str();
  app.add_option("--epsilon-sweep", sweep, "comma-separated epsilons to recertify with");
  app.add_option("--lambda", lambda, "complex center, |lambda| > 1, e.g. 2 or 1.5+0.5i")->capture_default_str();
  app.add_option("--precision", precision, "starting precision in bits (default 128)");
  app.add_option("--precision-max", precision_max, "precision cap in bits (default 8192)");
  app.add_option("--general-curve", curve, "polynomial R(w1, w2) of a curve unramified over |w1| <= 1");
  app.add_option("--report", report, "JSON report path (default: stdout)");
  app.add_option("--samples", samples, "CSV sample table path");
  app.add_option("--resolution", resolution, "sample grid size")->capture_default_str();
  app.add_option("--corrupt-stage", corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return BZCERT_CONFIG_ERROR;
  }

  bzcert_config* cfg = nullptr;
  if (bzcert_config_new(&cfg) != BZCERT_OK) {
    std::fprintf(stderr, "error: %s\n", bzcert_last_error());
    return 1;
  }
  bzcert_config_set_sequence(cfg, sequence.c_str());
  bzcert_config_set_stages(cfg, stages);
  bzcert_config_set_epsilon(cfg, epsilon.c_str());
  bzcert_config_set_epsilon_sweep(cfg, sweep.c_str());
  bzcert_config_set_lambda(cfg, lambda.c_str());
  bzcert_config_set_general_curve(cfg, curve.c_str());
  bzcert_config_set_precision(cfg, precision);
  bzcert_config_set_precision_max(cfg, precision_max);
  bzcert_config_set_report_path(cfg, report == "-" ? "" : report.c_str());
  bzcert_config_set_samples_path(cfg, samples.c_str());
  bzcert_config_set_resolution(cfg, resolution);
  bzcert_config_set_corrupt_stage(cfg, corrupt);

  bzcert_run* run = nullptr;
  const bzcert_status st = bzcert_execute(cfg, &run);
  bzcert_config_free(cfg);
  if (st != BZCERT_OK) {
    std::fprintf(stderr, "error: %s\n", bzcert_last_error());
    return 1;
  }
  const std::string text = bzcert_run_report(run);
  if (report.empty() || report == "-") std::printf("%s\n", text.c_str());
  print_summary(text);
  const int code = bzcert_run_exit_code(run);
  bzcert_run_free(run);
  return code;
}
