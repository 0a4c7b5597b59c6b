#ifndef CHAOSKIT_H
#define CHAOSKIT_H

/* C interface to the chaos-expansion toolkit.
 *
 * All objects are opaque handles created from JSON documents (the formats
 * are described in the README) and released with the matching _free call.
 * Every function returns a status code; on CK_OK the output parameters are
 * valid, otherwise ck_last_error() describes the failure for the calling
 * thread. Strings returned through char** are owned by the caller and must
 * be released with ck_string_free().
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ck_status {
    CK_OK = 0,
    CK_ERR_INVALID_ARGUMENT = 1, /* bad handle, bad value, violated invariant */
    CK_ERR_PARSE = 2,            /* malformed JSON input */
    CK_ERR_INTERNAL = 3          /* unexpected failure */
} ck_status;

typedef struct ck_chaos ck_chaos;   /* finite chaos expansion */
typedef struct ck_target ck_target; /* second-chaos target law */

const char* ck_version(void);
/* message for the most recent failure on this thread ("" if none) */
const char* ck_last_error(void);
void ck_string_free(char* s);

/* ---- construction / destruction ---- */
ck_status ck_chaos_parse(const char* json, ck_chaos** out);
ck_status ck_target_parse(const char* json, ck_target** out);
void ck_chaos_free(ck_chaos* f);
void ck_target_free(ck_target* x);

/* ---- scalar queries ---- */
ck_status ck_chaos_mean(const ck_chaos* f, double* out);
ck_status ck_chaos_variance(const ck_chaos* f, double* out);
ck_status ck_chaos_cumulant(const ck_chaos* f, int r, double* out);
ck_status ck_target_cumulant(const ck_target* x, int r, double* out);
ck_status ck_target_cf(const ck_target* x, double t, double* out_re, double* out_im);

/* embed a target law into a chaos expansion on `dim` coordinates */
ck_status ck_target_to_chaos(const ck_target* x, int dim, ck_chaos** out);
/* serialize back to JSON */
ck_status ck_chaos_to_json(const ck_chaos* f, char** out);
ck_status ck_target_to_json(const ck_target* x, char** out);

/* ---- batch runners (JSON in, JSON envelope out) ----
 * The envelope is {"exit_code": 0|2|3, "report": {...}, "csv": "..."}
 * with exit codes 0 = pass, 2 = fail, 3 = inconclusive. Input errors are
 * reported through the return status, not the envelope. */
ck_status ck_run_check(const char* runspec_json, char** out);
ck_status ck_run_canonicalize(const char* runspec_json, char** out);
ck_status ck_run_feasibility(const char* runspec_json, char** out);
ck_status ck_run_simulate(const char* runspec_json, char** out);
ck_status ck_run_selftest(const char* runspec_json, char** out);

#ifdef __cplusplus
}
#endif

#endif /* CHAOSKIT_H */
