#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "metrics.hpp"

namespace hybridchain {

struct BootstrapResult {
    WeightVector weights;
    double heldout_accuracy = 0.0;
    double gradient_check_max_rel_error = 0.0;
};

// Ground-truth-labeled bootstrap fit shared by all validators: training_size
// examples (exactly half valid), heldout evaluation, and a finite-difference
// gradient check at a random point.
BootstrapResult bootstrap_classifier(const RunConfig& cfg);

struct RunResult {
    RunMetrics metrics;
    std::string events_jsonl;
    std::string metrics_csv_text;
    std::string metrics_json_text;
    std::string workload_jsonl;
    std::string reliability_jsonl;  // per-epoch trajectories, when traced
    std::string beliefs_jsonl;      // per-round belief rows, when traced
    double bootstrap_heldout_accuracy = 0.0;
    std::string warning;  // non-fatal validation note (e.g. tau*M > f)
};

// Full simulation in memory: bootstrap training, lazy workload generation,
// epochs until exhaustion/cutoff, event log, metrics.
RunResult run_simulation(const RunConfig& cfg);

struct SweepRow {
    double value = 0.0;
    int seed_count = 0;
    double throughput_mean = 0.0;
    double throughput_std = 0.0;
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;
    // quantiles over the pooled latency samples of all repeats
    QuantileTable latency;
    double backlog_mean = 0.0;
};

// Independent seeds per repeat (base seed + repeat index), points run
// concurrently. An invariant violation aborts the sweep naming the seed.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows);

}  // namespace hybridchain
