#include "hybridchain.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "core/config.hpp"
#include "core/error.hpp"
#include "core/runner.hpp"

using namespace hybridchain;

struct hc_config {
    RunConfig cfg;
};

struct hc_result {
    RunResult res;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
hc_status guarded(Fn&& fn) {
    try {
        fn();
        return HC_OK;
    } catch (const ConfigError& e) {
        g_last_error = e.what();
        return HC_ERROR_CONFIG;
    } catch (const LookupError& e) {
        g_last_error = e.what();
        return HC_ERROR_CONFIG;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HC_ERROR_INVARIANT;
    }
}

}  // namespace

extern "C" {

const char* hc_last_error(void) { return g_last_error.c_str(); }

void hc_string_free(char* s) { std::free(s); }

hc_status hc_config_from_file(const char* path, hc_config** out) {
    if (!path || !out) return HC_ERROR_ARGUMENT;
    return guarded([&] { *out = new hc_config{load_config_file(path)}; });
}

hc_status hc_config_from_text(const char* text, hc_config** out) {
    if (!text || !out) return HC_ERROR_ARGUMENT;
    return guarded([&] { *out = new hc_config{load_config_text(text)}; });
}

hc_status hc_config_preset(const char* name, hc_config** out) {
    if (!name || !out) return HC_ERROR_ARGUMENT;
    return guarded([&] { *out = new hc_config{preset_config(name)}; });
}

hc_status hc_config_set_seed(hc_config* cfg, uint64_t seed) {
    if (!cfg) return HC_ERROR_ARGUMENT;
    cfg->cfg.seed = seed;
    return HC_OK;
}

hc_status hc_config_set_output_dir(hc_config* cfg, const char* dir) {
    if (!cfg || !dir) return HC_ERROR_ARGUMENT;
    cfg->cfg.output_dir = dir;
    return HC_OK;
}

hc_status hc_config_dump(const hc_config* cfg, char** out_text) {
    if (!cfg || !out_text) return HC_ERROR_ARGUMENT;
    return guarded([&] { *out_text = dup_string(dump_config(cfg->cfg)); });
}

const char* hc_config_output_dir(const hc_config* cfg) {
    return cfg ? cfg->cfg.output_dir.c_str() : "";
}

void hc_config_free(hc_config* cfg) { delete cfg; }

hc_status hc_run(const hc_config* cfg, hc_result** out) {
    if (!cfg || !out) return HC_ERROR_ARGUMENT;
    return guarded([&] { *out = new hc_result{run_simulation(cfg->cfg)}; });
}

hc_status hc_train(const hc_config* cfg, double* heldout_accuracy, char** weights_record) {
    if (!cfg) return HC_ERROR_ARGUMENT;
    return guarded([&] {
        BootstrapResult b = bootstrap_classifier(cfg->cfg);
        if (heldout_accuracy) *heldout_accuracy = b.heldout_accuracy;
        if (weights_record) *weights_record = dup_string(b.weights.to_record());
    });
}

hc_status hc_sweep_file(const char* spec_path, char** csv_out) {
    if (!spec_path || !csv_out) return HC_ERROR_ARGUMENT;
    return guarded([&] {
        SweepSpec spec = load_sweep_file(spec_path);
        *csv_out = dup_string(sweep_csv(spec.axis, run_sweep(spec)));
    });
}

hc_status hc_sweep_text(const char* spec_text, char** csv_out) {
    if (!spec_text || !csv_out) return HC_ERROR_ARGUMENT;
    return guarded([&] {
        SweepSpec spec = load_sweep_text(spec_text);
        *csv_out = dup_string(sweep_csv(spec.axis, run_sweep(spec)));
    });
}

hc_status hc_report(const char* events_path, char** metrics_csv_out) {
    if (!events_path || !metrics_csv_out) return HC_ERROR_ARGUMENT;
    return guarded([&] {
        std::ifstream in(events_path);
        if (!in) throw ConfigError(std::string("report: cannot open ") + events_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        *metrics_csv_out = dup_string(metrics_csv(compute_metrics(parse_events(ss.str()))));
    });
}

int64_t hc_result_decided(const hc_result* r) { return r ? r->res.metrics.decided : 0; }
int64_t hc_result_backlog(const hc_result* r) { return r ? r->res.metrics.backlog : 0; }
double hc_result_sim_minutes(const hc_result* r) { return r ? r->res.metrics.sim_minutes : 0.0; }
double hc_result_throughput(const hc_result* r) { return r ? r->res.metrics.throughput_per_min : 0.0; }
double hc_result_accuracy(const hc_result* r) { return r ? r->res.metrics.accuracy : 0.0; }
double hc_result_latency_p50_ms(const hc_result* r) { return r ? r->res.metrics.latency.p50 : 0.0; }
double hc_result_latency_p90_ms(const hc_result* r) { return r ? r->res.metrics.latency.p90 : 0.0; }
double hc_result_latency_p99_ms(const hc_result* r) { return r ? r->res.metrics.latency.p99 : 0.0; }
double hc_result_latency_max_ms(const hc_result* r) { return r ? r->res.metrics.latency.max : 0.0; }
int64_t hc_result_latency_violations(const hc_result* r) {
    return r ? r->res.metrics.latency_bound_violations : 0;
}
double hc_result_bootstrap_accuracy(const hc_result* r) {
    return r ? r->res.bootstrap_heldout_accuracy : 0.0;
}
const char* hc_result_events_jsonl(const hc_result* r) { return r ? r->res.events_jsonl.c_str() : ""; }
const char* hc_result_metrics_csv(const hc_result* r) {
    return r ? r->res.metrics_csv_text.c_str() : "";
}
const char* hc_result_metrics_json(const hc_result* r) {
    return r ? r->res.metrics_json_text.c_str() : "";
}
const char* hc_result_workload_jsonl(const hc_result* r) {
    return r ? r->res.workload_jsonl.c_str() : "";
}
const char* hc_result_reliability_jsonl(const hc_result* r) {
    return r ? r->res.reliability_jsonl.c_str() : "";
}
const char* hc_result_beliefs_jsonl(const hc_result* r) {
    return r ? r->res.beliefs_jsonl.c_str() : "";
}
const char* hc_result_warning(const hc_result* r) { return r ? r->res.warning.c_str() : ""; }

void hc_result_free(hc_result* r) { delete r; }

}  // extern "C"
