/* Exercises the shared library through its C interface only. */
#include <stdio.h>
#include <string.h>

#include "bzcert/bzcert.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static int run_code(bzcert_config* cfg, char* report_out, size_t cap) {
  bzcert_run* run = NULL;
  int code = -1;
  if (bzcert_execute(cfg, &run) != BZCERT_OK) return -1;
  code = bzcert_run_exit_code(run);
  if (report_out) {
    strncpy(report_out, bzcert_run_report(run), cap - 1);
    report_out[cap - 1] = '\0';
  }
  bzcert_run_free(run);
  return code;
}

int main(void) {
  bzcert_config* cfg = NULL;
  bzcert_run* run = NULL;
  static char report[1 << 16];

  EXPECT(strlen(bzcert_version()) > 0);
  EXPECT(bzcert_config_new(NULL) == BZCERT_INVALID_ARGUMENT);
  EXPECT(strlen(bzcert_last_error()) > 0);
  EXPECT(bzcert_config_set_stages(NULL, 3) == BZCERT_INVALID_ARGUMENT);
  EXPECT(bzcert_execute(NULL, &run) == BZCERT_INVALID_ARGUMENT);
  bzcert_config_free(NULL);
  bzcert_run_free(NULL);

  EXPECT(bzcert_config_new(&cfg) == BZCERT_OK);
  EXPECT(bzcert_config_set_sequence(cfg, NULL) == BZCERT_INVALID_ARGUMENT);
  EXPECT(bzcert_execute(cfg, NULL) == BZCERT_INVALID_ARGUMENT);

  EXPECT(bzcert_config_set_stages(cfg, 3) == BZCERT_OK);
  EXPECT(bzcert_config_set_sequence(cfg, "d^2") == BZCERT_OK);
  EXPECT(bzcert_config_set_epsilon(cfg, "1e-3") == BZCERT_OK);
  EXPECT(bzcert_config_set_lambda(cfg, "2") == BZCERT_OK);
  EXPECT(bzcert_execute(cfg, &run) == BZCERT_OK);
  if (run) {
    EXPECT(bzcert_run_exit_code(run) == 0);
    EXPECT(strcmp(bzcert_run_error(run), "") == 0);
    EXPECT(strstr(bzcert_run_report(run), "\"verdict\": \"PASS\"") != NULL);
    bzcert_run_free(run);
  }

  EXPECT(bzcert_config_set_corrupt_stage(cfg, 2) == BZCERT_OK);
  EXPECT(run_code(cfg, report, sizeof report) == 2);
  EXPECT(strstr(report, "certification_failure") != NULL);
  EXPECT(bzcert_config_set_corrupt_stage(cfg, 0) == BZCERT_OK);

  EXPECT(bzcert_config_set_stages(cfg, 1) == BZCERT_OK);
  EXPECT(run_code(cfg, NULL, 0) == 4);
  EXPECT(bzcert_config_set_stages(cfg, 3) == BZCERT_OK);

  EXPECT(bzcert_config_set_report_path(cfg, "/nonexistent/dir/r.json") == BZCERT_OK);
  EXPECT(run_code(cfg, NULL, 0) == 5);

  bzcert_config_free(cfg);
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
