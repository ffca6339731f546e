/* C interface to the qosnet scheduling library.
 *
 * All objects are opaque; every function that can fail returns a qn_status
 * and leaves a human-readable message in qn_last_error() (thread-local,
 * valid until the next library call on the same thread). Strings returned
 * through char** are heap-allocated and must be released with
 * qn_string_free().
 */
#ifndef QOSNET_H
#define QOSNET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qn_status {
    QN_OK = 0,
    QN_ERROR_INVALID_ARGUMENT = 1,
    QN_ERROR_PARSE = 2,
    QN_ERROR_IO = 3,
    QN_ERROR_RUNTIME = 4
} qn_status;

typedef enum qn_verdict {
    QN_VERDICT_STABLE = 0,
    QN_VERDICT_UNSTABLE = 1,
    QN_VERDICT_INCONCLUSIVE = 2
} qn_verdict;

typedef struct qn_config qn_config;
typedef struct qn_result qn_result;

const char* qn_version(void);
const char* qn_last_error(void);

/* Configuration lifecycle. parse/load validate fully; every error message
 * names the offending key. */
qn_status qn_config_parse(const char* json_text, qn_config** out);
qn_status qn_config_load(const char* path, qn_config** out);
qn_status qn_config_serialize(const qn_config* config, char** out_json);

/* Targeted overrides, matching the CLI flags. */
qn_status qn_config_set_seed(qn_config* config, uint64_t seed);
qn_status qn_config_set_policy(qn_config* config, const char* name);
qn_status qn_config_set_exact_sums(qn_config* config, int exact);
qn_status qn_config_set_sweep_seeds(qn_config* config, const uint64_t* seeds, size_t count);

void qn_config_free(qn_config* config);
void qn_string_free(char* text);

/* Runs the configured experiment. */
qn_status qn_run(const qn_config* config, qn_result** out);

qn_status qn_result_slots_csv(const qn_result* result, char** out_csv);
qn_status qn_result_summary_csv(const qn_result* result, char** out_csv);

/* Scalar accessors; a null result yields NaN / QN_VERDICT_INCONCLUSIVE / -1. */
double qn_result_avg_total_queue(const qn_result* result);
qn_verdict qn_result_verdict(const qn_result* result);
int64_t qn_result_delivered(const qn_result* result);

/* Per-flow summaries, keyed by the flow's destination node. */
qn_status qn_result_flow_mean_delay(const qn_result* result, int flow_id, double* out);
qn_status qn_result_flow_violation(const qn_result* result, int flow_id, double* out);

void qn_result_free(qn_result* result);

/* Grid experiments and the analytic table, rendered directly to CSV. */
qn_status qn_sweep_csv(const qn_config* config, char** out_csv);
qn_status qn_bounds_csv(const qn_config* config, char** out_csv);

/* Analytic helpers. */
qn_status qn_required_samples(double delta, double epsilon, int64_t* out);
qn_status qn_beta1_bound(int nodes, double queue_cap, double alpha3, double beta3,
                         double epsilon, double* out);
qn_status qn_beta2_bound(double beta, double sigma, double* out);
qn_status qn_rho_bound(double alpha1, double alpha2, double beta1, double beta2, double* out);

#ifdef __cplusplus
}
#endif

#endif /* QOSNET_H */
