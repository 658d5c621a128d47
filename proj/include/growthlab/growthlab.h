/*
 * C interface to the growthlab verification library.
 *
 * All functions returning int yield GLAB_OK (0) on success or a GLAB_E_*
 * code; glab_last_error() then carries a message for the calling thread.
 * Reports are opaque handles released with glab_report_free(); strings
 * produced by the library are released with glab_string_free().
 */
#ifndef GROWTHLAB_GROWTHLAB_H
#define GROWTHLAB_GROWTHLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct glab_report glab_report;

enum {
  GLAB_OK = 0,
  GLAB_E_PARSE = 1,   /* unreadable input / bad JSON */
  GLAB_E_SCHEMA = 2,  /* schema violation (path-localized message) */
  GLAB_E_USAGE = 3,   /* unknown suite, bad arguments */
  GLAB_E_GUARD = 4,   /* a search guard tripped */
  GLAB_E_INTERNAL = 5
};

const char* glab_version(void);
const char* glab_last_error(void);

/* options_json may be NULL or {"seed": n, "budget": n, "timing": bool}. */
int glab_run_scenario_json(const char* scenario_json, const char* options_json,
                           glab_report** out);
int glab_run_scenario_file(const char* path, const char* options_json,
                           glab_report** out);
int glab_verify_suite(const char* name, const char* options_json,
                      glab_report** out);

/* Schema / usage description as a JSON document. */
int glab_describe(char** out_json);

/* 0 every check passed, 1 some check failed, 2 unknown verdicts. */
int glab_report_status(const glab_report* report);
int glab_report_json(const glab_report* report, char** out);
int glab_report_table(const glab_report* report, char** out);
void glab_report_free(glab_report* report);
void glab_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* GROWTHLAB_GROWTHLAB_H */
