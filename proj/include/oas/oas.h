/*
 * oas - bisimulation-based attention abstractions and online attention
 * switching for Markov decision processes.
 *
 * C interface to the shared library. All objects are opaque handles created
 * and destroyed through these functions; every fallible call returns an
 * oas_status and leaves a human-readable message retrievable through
 * oas_last_error() on failure. Handles are not thread-safe individually, but
 * distinct handles may be used from distinct threads.
 */
#ifndef OAS_OAS_H
#define OAS_OAS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OAS_API __declspec(dllexport)
#else
#define OAS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum oas_status {
    OAS_OK = 0,
    OAS_ERR_INVALID_ARGUMENT = 1,
    OAS_ERR_VALIDATION = 2,
    OAS_ERR_PARSE = 3,
    OAS_ERR_IO = 4,
    OAS_ERR_RUNTIME = 5,
} oas_status;

OAS_API const char* oas_version(void);

/* Message for the most recent failing call on this thread. Valid until the
 * next failing call; never NULL. */
OAS_API const char* oas_last_error(void);

/* Frees strings returned through char** out-parameters. */
OAS_API void oas_string_free(char* s);

/* ---------------------------------------------------------------- MDPs -- */

typedef struct oas_mdp oas_mdp;

/* transitions: n_actions blocks of n_states*n_states row-major doubles,
 * entry (s, s') of block a = P(s'|s,a). rewards: n_states*n_actions doubles,
 * entry (s, a) = R(s,a). The data is validated (row sums within 1e-9, all
 * entries in [0,1], rewards finite) and rows are renormalized exactly once. */
OAS_API oas_status oas_mdp_create(int32_t n_states, int32_t n_actions,
                                  const double* transitions, const double* rewards,
                                  oas_mdp** out);

/* Loads the JSON MDP format documented in the README. */
OAS_API oas_status oas_mdp_load_json(const char* path, oas_mdp** out);

OAS_API void oas_mdp_free(oas_mdp* mdp);

OAS_API int32_t oas_mdp_num_states(const oas_mdp* mdp);
OAS_API int32_t oas_mdp_num_actions(const oas_mdp* mdp);
OAS_API oas_status oas_mdp_transition_row(const oas_mdp* mdp, int32_t state, int32_t action,
                                          double* row_out /* n_states */);
OAS_API oas_status oas_mdp_reward(const oas_mdp* mdp, int32_t state, int32_t action,
                                  double* reward_out);

/* Draws a successor of (state, action); the stream is any uint64 seed plus a
 * caller-maintained draw counter if reproducibility across calls matters.
 * Prefer oas_rng handles below for sequences. */
typedef struct oas_rng oas_rng;
OAS_API oas_status oas_rng_create(uint64_t seed, oas_rng** out);
OAS_API void oas_rng_free(oas_rng* rng);
OAS_API oas_status oas_mdp_sample_transition(const oas_mdp* mdp, int32_t state, int32_t action,
                                             oas_rng* rng, int32_t* next_state_out);

/* ------------------------------------------------------- bisimulation -- */

/* Coarsest bisimulation partition. block_of must hold n_states int32s; it
 * receives the dense block id of every state. */
OAS_API oas_status oas_mdp_coarsest_partition(const oas_mdp* mdp, int32_t* block_of,
                                              int32_t* n_blocks_out);

typedef struct oas_abstraction oas_abstraction;

/* Builds the quotient MDP for a partition (must be a bisimulation of mdp;
 * rejected with OAS_ERR_VALIDATION naming a violating state pair if not). */
OAS_API oas_status oas_abstraction_build(const oas_mdp* mdp, const int32_t* block_of,
                                         int32_t catalog_index, oas_abstraction** out);
OAS_API void oas_abstraction_free(oas_abstraction* ab);

OAS_API int32_t oas_abstraction_num_blocks(const oas_abstraction* ab);
OAS_API oas_status oas_abstraction_map_state(const oas_abstraction* ab, int32_t state,
                                             int32_t* block_out);
/* Borrowed pointer, valid for the abstraction's lifetime. */
OAS_API const oas_mdp* oas_abstraction_quotient(const oas_abstraction* ab);

/* -------------------------------------------------------------- filter -- */

typedef struct oas_filter oas_filter;

/* transition: n*n row-major doubles, entry (i, j) = p(i at t | j at t-1);
 * columns must sum to 1. prior: n doubles or NULL for uniform. */
OAS_API oas_status oas_filter_create(int32_t n, const double* prior, const double* transition,
                                     double epsilon, oas_filter** out);
OAS_API void oas_filter_free(oas_filter* filter);

/* Fills a diagonal stay-probability transition model into out (n*n). */
OAS_API oas_status oas_stay_matrix(int32_t n, double stay_prob, double* out);

/* One filter step from a per-abstraction likelihood vector (n doubles). */
OAS_API oas_status oas_filter_step(oas_filter* filter, const double* likelihoods,
                                   int32_t* ml_out);

/* Epsilon-smoothed indicator likelihoods for a catalog of abstractions given
 * an observed reward and observed state. likelihoods_out: n doubles. */
OAS_API oas_status oas_detect_discrete(const oas_abstraction* const* abstractions, int32_t n,
                                       double reward, int32_t observed_state, double epsilon,
                                       double* likelihoods_out);

OAS_API oas_status oas_filter_belief(const oas_filter* filter, double* probs_out);
OAS_API int32_t oas_filter_size(const oas_filter* filter);

/* --------------------------------------------------- experiment suites -- */

typedef struct oas_config oas_config;

/* Parses and validates an experiment config (or run manifest) JSON file. */
OAS_API oas_status oas_config_load(const char* path, oas_config** out);
OAS_API void oas_config_free(oas_config* config);

/* Resolved config as canonical JSON. Free with oas_string_free. */
OAS_API oas_status oas_config_json(const oas_config* config, char** json_out);

typedef struct oas_run_options {
    const char* out_dir;   /* NULL keeps the config value */
    const char* seeds_csv; /* e.g. "0,1,2"; NULL keeps the config value */
    int32_t traces;        /* -1 keep, 0 off, 1 on */
    int32_t parallel;      /* worker threads, >= 1 */
} oas_run_options;

/* Runs the suite and writes metrics.csv, optional traces, and the run
 * manifest. metrics_path_out (optional) receives the metrics file path. */
OAS_API oas_status oas_run_suite(const oas_config* config, const oas_run_options* options,
                                 char** metrics_path_out);

/* Partition + quotient report for an MDP JSON file, as JSON. */
OAS_API oas_status oas_quotient_report_json(const char* mdp_path, char** json_out);

/* Metrics recomputed from a trace CSV written by oas_run_suite, as JSON. */
OAS_API oas_status oas_trace_stats_json(const char* trace_path, char** json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OAS_OAS_H */
