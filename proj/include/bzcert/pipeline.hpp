#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "bzcert/certification.hpp"

namespace bzcert {

inline constexpr long kDefaultPrecisionStart = 128;
inline constexpr long kDefaultPrecisionMax = 8192;
inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
  std::string sequence = "d^2";
  int stages = 4;
  std::string epsilon = "1e-3";
  std::string lambda = "2";
  /// Comma-separated epsilons; empty disables the sweep.
  std::string epsilon_sweep;
  /// Polynomial R(w1, w2); empty disables the general-curve run.
  std::string general_curve;
  /// 0 selects the default.
  long precision = 0;
  long precision_max = 0;
  std::string report_path;
  std::string samples_path;
  int resolution = 33;
  /// Testing hook, see ConstructionOptions.
  int corrupt_stage = 0;
};

struct RunResult {
  int exit_code = 0;
  /// Pretty-printed JSON report (also written to report_path when set).
  std::string report;
  /// Empty on success.
  std::string error;
};

/// Exit codes of the pipeline.
enum ExitCode : int {
  kExitPass = 0,
  kExitCertification = 2,
  kExitPrecision = 3,
  kExitConfig = 4,
  kExitIo = 5,
};

/// Never throws; every failure is mapped to an exit code and recorded in the
/// report.
RunResult run_pipeline(const RunConfig& config);

/// Positive finite real, rounded to the nearest double.
double parse_epsilon(const std::string& text);
std::vector<double> parse_epsilon_list(const std::string& csv);
/// Complex constant such as "2", "1.5 - 0.5i" or "2 + 3*i", rounded to doubles.
std::complex<double> parse_lambda(const std::string& text);
/// (start, max) bits after defaulting; throws ConfigError when inconsistent.
std::pair<long, long> resolve_precision(long start, long max);

/// Writes the surface, curve-slice and intersection rows for one certificate.
void emit_samples(const ConstructionState& state, const IntersectionCertificate& cert, int resolution,
                  const std::string& path);

/// The report with its "timing" member removed (for determinism checks).
std::string strip_timing(const std::string& report);

}  // namespace bzcert
