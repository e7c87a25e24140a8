#include "bzcert/bzcert.h"

#include <memory>
#include <new>
#include <string>

#include "bzcert/pipeline.hpp"

struct bzcert_config {
  bzcert::RunConfig cfg;
};

struct bzcert_run {
  bzcert::RunResult result;
};

namespace {

thread_local std::string g_last_error;

bzcert_status invalid(const char* what) {
  g_last_error = what;
  return BZCERT_INVALID_ARGUMENT;
}

bzcert_status set_string(bzcert_config* cfg, const char* text, std::string bzcert::RunConfig::*field) {
  if (!cfg || !text) return invalid("null argument");
  try {
    cfg->cfg.*field = text;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BZCERT_INTERNAL_ERROR;
  }
  g_last_error.clear();
  return BZCERT_OK;
}

template <class T>
bzcert_status set_value(bzcert_config* cfg, T value, T bzcert::RunConfig::*field) {
  if (!cfg) return invalid("null config");
  cfg->cfg.*field = value;
  g_last_error.clear();
  return BZCERT_OK;
}

}  // namespace

extern "C" {

const char* bzcert_version(void) { return "1.0.0"; }

const char* bzcert_last_error(void) { return g_last_error.c_str(); }

bzcert_status bzcert_config_new(bzcert_config** out) {
  if (!out) return invalid("null output pointer");
  *out = new (std::nothrow) bzcert_config();
  if (!*out) {
    g_last_error = "out of memory";
    return BZCERT_INTERNAL_ERROR;
  }
  return BZCERT_OK;
}

void bzcert_config_free(bzcert_config* cfg) { delete cfg; }

bzcert_status bzcert_config_set_sequence(bzcert_config* cfg, const char* text) {
  return set_string(cfg, text, &bzcert::RunConfig::sequence);
}
bzcert_status bzcert_config_set_stages(bzcert_config* cfg, int stages) {
  return set_value(cfg, stages, &bzcert::RunConfig::stages);
}
bzcert_status bzcert_config_set_epsilon(bzcert_config* cfg, const char* text) {
  return set_string(cfg, text, &bzcert::RunConfig::epsilon);
}
bzcert_status bzcert_config_set_epsilon_sweep(bzcert_config* cfg, const char* csv) {
  return set_string(cfg, csv, &bzcert::RunConfig::epsilon_sweep);
}
bzcert_status bzcert_config_set_lambda(bzcert_config* cfg, const char* text) {
  return set_string(cfg, text, &bzcert::RunConfig::lambda);
}
bzcert_status bzcert_config_set_general_curve(bzcert_config* cfg, const char* text) {
  return set_string(cfg, text, &bzcert::RunConfig::general_curve);
}
bzcert_status bzcert_config_set_precision(bzcert_config* cfg, long bits) {
  return set_value(cfg, bits, &bzcert::RunConfig::precision);
}
bzcert_status bzcert_config_set_precision_max(bzcert_config* cfg, long bits) {
  return set_value(cfg, bits, &bzcert::RunConfig::precision_max);
}
bzcert_status bzcert_config_set_report_path(bzcert_config* cfg, const char* path) {
  return set_string(cfg, path, &bzcert::RunConfig::report_path);
}
bzcert_status bzcert_config_set_samples_path(bzcert_config* cfg, const char* path) {
  return set_string(cfg, path, &bzcert::RunConfig::samples_path);
}
bzcert_status bzcert_config_set_resolution(bzcert_config* cfg, int resolution) {
  return set_value(cfg, resolution, &bzcert::RunConfig::resolution);
}
bzcert_status bzcert_config_set_corrupt_stage(bzcert_config* cfg, int stage) {
  return set_value(cfg, stage, &bzcert::RunConfig::corrupt_stage);
}

bzcert_status bzcert_execute(const bzcert_config* cfg, bzcert_run** out) {
  if (!cfg || !out) return invalid("null argument");
  *out = nullptr;
  try {
    auto run = std::make_unique<bzcert_run>();
    run->result = bzcert::run_pipeline(cfg->cfg);
    g_last_error = run->result.error;
    *out = run.release();
    return BZCERT_OK;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BZCERT_INTERNAL_ERROR;
  }
}

void bzcert_run_free(bzcert_run* run) { delete run; }

int bzcert_run_exit_code(const bzcert_run* run) { return run ? run->result.exit_code : BZCERT_INVALID_ARGUMENT; }

const char* bzcert_run_report(const bzcert_run* run) { return run ? run->result.report.c_str() : ""; }

const char* bzcert_run_error(const bzcert_run* run) { return run ? run->result.error.c_str() : ""; }

}  // extern "C"
