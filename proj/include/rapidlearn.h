/* C interface to the rapidlearn core. Every call returns an rl_status; on
 * failure rl_last_error() holds a message for the calling thread. Handles are
 * opaque and freed with the matching *_free function. */
#ifndef RAPIDLEARN_H
#define RAPIDLEARN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RL_API __declspec(dllexport)
#else
#define RL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match rapidlearn::ErrorCode. */
typedef enum rl_status {
  RL_OK = 0,
  RL_E_PARSE = 1,
  RL_E_VALIDATION = 2,
  RL_E_UNKNOWN_TYPE = 3,
  RL_E_UNSUPPORTED_CONSTRUCT = 4,
  RL_E_INAPPLICABLE_OPERATOR = 5,
  RL_E_NEGATIVE_FLUENT = 6,
  RL_E_PLANNER_TIMEOUT = 7,
  RL_E_PLACEMENT_OVERFLOW = 8,
  RL_E_EPISODE_OVER = 9,
  RL_E_NO_PATH = 10,
  RL_E_NO_TARGET = 11,
  RL_E_UNKNOWN_NOVELTY = 12,
  RL_E_PRECONDITION_UNMET = 13,
  RL_E_DIMENSION_MISMATCH = 14,
  RL_E_EMPTY_BIAS_SET = 15,
  RL_E_EMPTY_BUFFER = 16,
  RL_E_OPERATOR_NOT_IN_PLAN = 17,
  RL_E_PREFIX_EXECUTION_FAILED = 18,
  RL_E_NO_NOVEL_ENTITY = 19,
  RL_E_EMPTY_GROUP = 20,
  RL_E_DEGENERATE_VARIANCE = 21,
  RL_E_DISCOVERY_BUDGET_EXHAUSTED = 22,
  RL_E_EXECUTOR_MISMATCH = 23,
  RL_E_IO = 24,
  RL_E_INVALID_ARGUMENT = 25,
  RL_E_INVARIANT_VIOLATION = 26,
  RL_E_INTERNAL = 99
} rl_status;

RL_API const char* rl_status_name(rl_status status);
RL_API const char* rl_last_error(void);
RL_API const char* rl_version(void);

/* ---- planning ---------------------------------------------------------- */

typedef struct rl_task rl_task;
typedef struct rl_plan rl_plan;

/* novelty may be NULL; otherwise the domain is patched with its symbols. */
RL_API rl_status rl_task_load(const char* domain_path, const char* problem_path, const char* novelty, rl_task** out);
RL_API rl_status rl_task_parse(const char* domain_text, const char* problem_text, const char* novelty, rl_task** out);
RL_API size_t rl_task_operator_count(const rl_task* task);
RL_API void rl_task_free(rl_task* task);

/* *found is 1 for a plan, 0 when none exists. Budget exhaustion returns
 * RL_E_PLANNER_TIMEOUT. node_budget 0 selects the default. */
RL_API rl_status rl_plan_search(const rl_task* task, size_t node_budget, rl_plan** out, int* found);
RL_API size_t rl_plan_length(const rl_plan* plan);
RL_API const char* rl_plan_step(const rl_plan* plan, size_t index);
RL_API size_t rl_plan_expanded(const rl_plan* plan);
/* 1 when the plan is valid for the task. */
RL_API rl_status rl_plan_validate(const rl_task* task, const rl_plan* plan, int* valid);
RL_API void rl_plan_free(rl_plan* plan);

/* ---- novelties --------------------------------------------------------- */

RL_API size_t rl_novelty_count(void);
RL_API const char* rl_novelty_id(size_t index);
RL_API const char* rl_novelty_description(size_t index);

/* ---- experiments ------------------------------------------------------- */

typedef struct rl_run_options {
  const char* scenario;   /* novelty id, or "none" */
  const char* strategy;   /* "kge-ucb", "kge-uab" or "eg" */
  const uint64_t* seeds;
  size_t seed_count;
  const char* out_dir;    /* NULL: keep no logs or executors */
  int workers;            /* <= 0 selects 1 */
  int eval_episodes;      /* <= 0 selects 100 */
  int eval_budget;        /* <= 0 selects 300 */
  uint64_t max_timesteps; /* 0: no cap beyond the episode budget */
  uint64_t max_episodes;  /* 0: default */
  const char* optimizer;  /* NULL: default */
  double learning_rate;   /* <= 0: default */
} rl_run_options;

RL_API void rl_run_options_init(rl_run_options* options);

typedef struct rl_results rl_results;

typedef struct rl_record {
  const char* scenario;
  const char* strategy;
  uint64_t seed;
  uint64_t time_to_adapt;
  int converged;
  double post_novelty_success;
  const char* discoveries; /* ';'-separated operator names */
  double wall_clock;
  const char* error;       /* empty when the run completed */
} rl_record;

RL_API rl_status rl_run(const rl_run_options* options, rl_results** out);
RL_API size_t rl_results_count(const rl_results* results);
/* Strings stay valid until the results are freed. */
RL_API rl_status rl_results_get(const rl_results* results, size_t index, rl_record* out);
RL_API rl_status rl_results_write(const rl_results* results, const char* path);
RL_API rl_status rl_results_read(const char* path, rl_results** out);
/* Appends all records of src to dst. */
RL_API rl_status rl_results_append(rl_results* dst, const rl_results* src);
RL_API rl_results* rl_results_new(void);
RL_API void rl_results_free(rl_results* results);

/* ---- statistics -------------------------------------------------------- */

typedef struct rl_group {
  const char* scenario;
  const char* strategy;
  size_t runs;
  size_t converged;
  /* Time-to-adapt over converged runs only; tta_sd is 0 when fewer than two. */
  double tta_mean, tta_sd;
  double success_mean, success_sd;
} rl_group;

typedef struct rl_stats rl_stats;

RL_API rl_status rl_stats_compute(const rl_results* results, rl_stats** out);
RL_API size_t rl_stats_group_count(const rl_stats* stats);
RL_API rl_status rl_stats_group(const rl_stats* stats, size_t index, rl_group* out);
RL_API void rl_stats_free(rl_stats* stats);

RL_API rl_status rl_welch_ttest(const double* a, size_t na, const double* b, size_t nb, double* t, double* df,
                                double* p);

RL_API rl_status rl_curve_emit(const char* in_dir, const char* out_file, uint64_t bin);

/* ---- executors --------------------------------------------------------- */

/* Loads the executor files, registers them for their scenario (taken from
 * the files unless scenario is non-NULL) and reports the success fraction
 * of plan execution over fresh episodes. */
RL_API rl_status rl_executor_eval(const char* const* paths, size_t count, const char* scenario, int episodes,
                                  int budget, uint64_t seed, double* success);

#ifdef __cplusplus
}
#endif

#endif
