#ifndef BZCERT_H
#define BZCERT_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BZCERT_API __declspec(dllexport)
#else
#define BZCERT_API __attribute__((visibility("default")))
#endif

typedef enum bzcert_status {
  BZCERT_OK = 0,
  BZCERT_CERTIFICATION_FAILURE = 2,
  BZCERT_PRECISION_EXHAUSTED = 3,
  BZCERT_CONFIG_ERROR = 4,
  BZCERT_IO_ERROR = 5,
  BZCERT_INVALID_ARGUMENT = 6,
  BZCERT_INTERNAL_ERROR = 7
} bzcert_status;

/* Opaque handles. */
typedef struct bzcert_config bzcert_config;
typedef struct bzcert_run bzcert_run;

BZCERT_API const char* bzcert_version(void);
/* Message of the last failing call on this thread ("" if none). */
BZCERT_API const char* bzcert_last_error(void);

/* A config starts with the default run (a_d = d^2, 4 stages, eps 1e-3, lambda 2). */
BZCERT_API bzcert_status bzcert_config_new(bzcert_config** out);
BZCERT_API void bzcert_config_free(bzcert_config* cfg);

/* Values are validated when the run starts; invalid values give exit code 4. */
BZCERT_API bzcert_status bzcert_config_set_sequence(bzcert_config* cfg, const char* text);
BZCERT_API bzcert_status bzcert_config_set_stages(bzcert_config* cfg, int stages);
BZCERT_API bzcert_status bzcert_config_set_epsilon(bzcert_config* cfg, const char* text);
BZCERT_API bzcert_status bzcert_config_set_epsilon_sweep(bzcert_config* cfg, const char* csv);
BZCERT_API bzcert_status bzcert_config_set_lambda(bzcert_config* cfg, const char* text);
BZCERT_API bzcert_status bzcert_config_set_general_curve(bzcert_config* cfg, const char* text);
/* 0 restores the default. */
BZCERT_API bzcert_status bzcert_config_set_precision(bzcert_config* cfg, long bits);
BZCERT_API bzcert_status bzcert_config_set_precision_max(bzcert_config* cfg, long bits);
BZCERT_API bzcert_status bzcert_config_set_report_path(bzcert_config* cfg, const char* path);
BZCERT_API bzcert_status bzcert_config_set_samples_path(bzcert_config* cfg, const char* path);
BZCERT_API bzcert_status bzcert_config_set_resolution(bzcert_config* cfg, int resolution);
/* Testing hook: inflates the scaling constant of the given stage (0 = off). */
BZCERT_API bzcert_status bzcert_config_set_corrupt_stage(bzcert_config* cfg, int stage);

/* Runs the pipeline. Returns BZCERT_OK when a run handle was produced, even
   if the run itself failed; inspect bzcert_run_exit_code for the outcome. */
BZCERT_API bzcert_status bzcert_execute(const bzcert_config* cfg, bzcert_run** out);
BZCERT_API void bzcert_run_free(bzcert_run* run);
/* 0 pass, 2 certification failure, 3 precision exhausted, 4 config, 5 I/O. */
BZCERT_API int bzcert_run_exit_code(const bzcert_run* run);
/* JSON report; owned by the run handle. */
BZCERT_API const char* bzcert_run_report(const bzcert_run* run);
/* Failure message; "" on success. */
BZCERT_API const char* bzcert_run_error(const bzcert_run* run);

#ifdef __cplusplus
}
#endif

#endif
