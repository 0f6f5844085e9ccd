/*
 * diagfp C interface.
 *
 * Problems and reports are opaque handles owned by the caller and released
 * with the matching *_free function. Every fallible call returns a
 * diagfp_status; on failure diagfp_last_error() describes the cause (the
 * message is thread-local and valid until the next call on that thread).
 * Strings returned through char** out-parameters are released with
 * diagfp_string_free; strings returned directly are owned by their handle.
 */
#ifndef DIAGFP_H
#define DIAGFP_H

#include <stddef.h>

#if defined(DIAGFP_BUILDING)
#define DIAGFP_API __attribute__((visibility("default")))
#else
#define DIAGFP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum diagfp_status {
  DIAGFP_OK = 0,
  DIAGFP_ERR_USAGE = 1,
  DIAGFP_ERR_PARSE = 2,
  DIAGFP_ERR_UNSUPPORTED = 3,
  DIAGFP_ERR_CONVEXITY = 4,
  DIAGFP_ERR_STATE_BUDGET = 5,
  DIAGFP_ERR_INTERNAL = 6,
  DIAGFP_ERR_IO = 7,
  DIAGFP_ERR_NULL = 8
} diagfp_status;

typedef struct diagfp_problem diagfp_problem;
typedef struct diagfp_report diagfp_report;

typedef struct diagfp_options {
  const char* space;            /* "shs" | "mhs" | "sqhs"; circuits always use "shs" */
  const char* strategy;         /* "pls" | "pls-r" | "pfs" | "pfs-e" | "pfs-c" | "pfs-ec" */
  const char* solver;           /* "sat" | "explicit" (DES only) */
  unsigned steps_per_obs;       /* SAT steps per observed event */
  unsigned long iteration_cap;  /* strategy loop iterations before giving up */
  unsigned long state_budget;   /* visited states for the explicit solver and the oracle */
  int conflict_cache;           /* nonzero: reuse stored conflicts in pfs-c / pfs-ec */
  int verify;                   /* nonzero: diagnose also verifies its result */
} diagfp_options;

/* Defaults: shs, pfs-ec, sat, 7 steps, cap 10000, budget 5000000, cache on, no verify. */
DIAGFP_API void diagfp_options_init(diagfp_options* options);

DIAGFP_API const char* diagfp_version(void);
DIAGFP_API const char* diagfp_status_name(diagfp_status status);
DIAGFP_API const char* diagfp_last_error(void);
DIAGFP_API void diagfp_string_free(char* s);

/* Loading. Paths are read from disk; *_text variants take the contents. */
DIAGFP_API diagfp_status diagfp_problem_load_des(const char* model_path, const char* obs_path, diagfp_problem** out);
DIAGFP_API diagfp_status diagfp_problem_load_des_text(const char* model_text, const char* obs_text,
                                                      diagfp_problem** out);
DIAGFP_API diagfp_status diagfp_problem_load_circuit(const char* path, diagfp_problem** out);
DIAGFP_API diagfp_status diagfp_problem_load_circuit_text(const char* text, diagfp_problem** out);
DIAGFP_API void diagfp_problem_free(diagfp_problem* problem);

/* Runs the selected strategy. A report whose iteration cap was hit is still
 * returned with DIAGFP_OK; check diagfp_report_complete. */
DIAGFP_API diagfp_status diagfp_diagnose(const diagfp_problem* problem, const diagfp_options* options,
                                         diagfp_report** out);

/* Enumeration oracle (DES only). bound 0 selects the certified bound. */
DIAGFP_API diagfp_status diagfp_oracle(const diagfp_problem* problem, const diagfp_options* options,
                                       unsigned long bound, diagfp_report** out);

/* Checks that the given set (one canonical hypothesis per line, '#' comments)
 * is the minimal diagnosis. */
DIAGFP_API diagfp_status diagfp_verify(const diagfp_problem* problem, const diagfp_options* options,
                                       const char* candidates_text, diagfp_report** out);

/* DIMACS export of one test. question: "candidate" | "minimal" | "coverage";
 * hypotheses_text lists canonical hypotheses one per line (candidate and
 * minimal take exactly one). */
DIAGFP_API diagfp_status diagfp_encode(const diagfp_problem* problem, const diagfp_options* options,
                                       const char* question, const char* hypotheses_text, char** dimacs_out);

/* Seeded instance generation: components 1..4, states 2..5, faults 0..3, obs_len 0..5. */
DIAGFP_API diagfp_status diagfp_generate(unsigned long long seed, unsigned components, unsigned states,
                                         unsigned faults, unsigned obs_len, char** model_out, char** obs_out,
                                         char** sidecar_out);

/* Report accessors. */
DIAGFP_API int diagfp_report_complete(const diagfp_report* report);
/* 1 pass, 0 fail, -1 when no verification ran. */
DIAGFP_API int diagfp_report_verified(const diagfp_report* report);
DIAGFP_API size_t diagfp_report_candidate_count(const diagfp_report* report);
DIAGFP_API const char* diagfp_report_candidate(const diagfp_report* report, size_t index);
DIAGFP_API const char* diagfp_report_json(const diagfp_report* report);
DIAGFP_API const char* diagfp_report_text(const diagfp_report* report);
DIAGFP_API void diagfp_report_free(diagfp_report* report);

#ifdef __cplusplus
}
#endif

#endif /* DIAGFP_H */
