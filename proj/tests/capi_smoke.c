/* Compiled as C: the public header must work without a C++ compiler. */
#include <stdio.h>
#include <string.h>

#include "growthlab/growthlab.h"

int main(void) {
  glab_report* report = NULL;
  if (glab_verify_suite("diagonal", "{\"seed\": 1}", &report) != GLAB_OK) {
    fprintf(stderr, "suite failed: %s\n", glab_last_error());
    return 1;
  }
  int status = glab_report_status(report);
  char* json = NULL;
  if (glab_report_json(report, &json) != GLAB_OK) return 1;
  if (strstr(json, "\"verdicts\"") == NULL) return 1;
  glab_string_free(json);
  glab_report_free(report);

  if (glab_verify_suite("bogus", NULL, &report) != GLAB_E_USAGE) return 1;
  printf("c-api-smoke: status %d\n", status);
  return status;
}
