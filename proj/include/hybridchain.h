/* HybridChain consensus simulator: C API.
 *
 * All entry points return hc_status; on failure hc_last_error() holds a
 * thread-local message. Strings returned through char** are heap-allocated
 * and released with hc_string_free(); strings returned as const char* are
 * borrowed from the owning handle.
 */
#ifndef HYBRIDCHAIN_H
#define HYBRIDCHAIN_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hc_status {
    HC_OK = 0,
    HC_ERROR_CONFIG = 1,    /* bad configuration or user input */
    HC_ERROR_INVARIANT = 2, /* internal invariant violation */
    HC_ERROR_ARGUMENT = 3   /* null handle / bad argument */
} hc_status;

typedef struct hc_config hc_config;
typedef struct hc_result hc_result;

const char* hc_last_error(void);
void hc_string_free(char* s);

/* --- configuration ----------------------------------------------------- */

hc_status hc_config_from_file(const char* path, hc_config** out);
hc_status hc_config_from_text(const char* text, hc_config** out);
hc_status hc_config_preset(const char* name, hc_config** out); /* "desk" | "paper" */
hc_status hc_config_set_seed(hc_config* cfg, uint64_t seed);
hc_status hc_config_set_output_dir(hc_config* cfg, const char* dir);
hc_status hc_config_dump(const hc_config* cfg, char** out_text);
const char* hc_config_output_dir(const hc_config* cfg);
void hc_config_free(hc_config* cfg);

/* --- simulation -------------------------------------------------------- */

/* Bootstrap training + workload generation + epochs to exhaustion/cutoff. */
hc_status hc_run(const hc_config* cfg, hc_result** out);

/* Bootstrap classifier only: heldout accuracy and an exportable weight
 * record (plain numeric line; feed back via bootstrap.weights_file). */
hc_status hc_train(const hc_config* cfg, double* heldout_accuracy, char** weights_record);

/* Sweep spec (JSON) -> aggregated CSV, one row per axis point. */
hc_status hc_sweep_file(const char* spec_path, char** csv_out);
hc_status hc_sweep_text(const char* spec_text, char** csv_out);

/* Re-derive the metrics CSV from an existing event log file. */
hc_status hc_report(const char* events_path, char** metrics_csv_out);

/* --- run results -------------------------------------------------------- */

int64_t hc_result_decided(const hc_result* r);
int64_t hc_result_backlog(const hc_result* r);
double hc_result_sim_minutes(const hc_result* r);
double hc_result_throughput(const hc_result* r);   /* decided per simulated minute */
double hc_result_accuracy(const hc_result* r);     /* over decided transactions */
double hc_result_latency_p50_ms(const hc_result* r);
double hc_result_latency_p90_ms(const hc_result* r);
double hc_result_latency_p99_ms(const hc_result* r);
double hc_result_latency_max_ms(const hc_result* r);
int64_t hc_result_latency_violations(const hc_result* r);
double hc_result_bootstrap_accuracy(const hc_result* r);
const char* hc_result_events_jsonl(const hc_result* r);
const char* hc_result_metrics_csv(const hc_result* r);
const char* hc_result_metrics_json(const hc_result* r);
const char* hc_result_workload_jsonl(const hc_result* r);
const char* hc_result_reliability_jsonl(const hc_result* r); /* "" unless traced */
const char* hc_result_beliefs_jsonl(const hc_result* r);     /* "" unless traced */
const char* hc_result_warning(const hc_result* r); /* "" when clean */
void hc_result_free(hc_result* r);

#ifdef __cplusplus
}
#endif

#endif /* HYBRIDCHAIN_H */
