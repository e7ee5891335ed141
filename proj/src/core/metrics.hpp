#pragma once

#include <string>
#include <vector>

#include "eventlog.hpp"

namespace hybridchain {

struct QuantileTable {
    double p50 = 0.0;
    double p90 = 0.0;
    double p99 = 0.0;
    double max = 0.0;
};

struct RunMetrics {
    long decided = 0;
    long backlog = 0;
    double sim_minutes = 0.0;
    double throughput_per_min = 0.0;  // decided / sim_minutes
    double accuracy = 0.0;            // over decided transactions only
    std::vector<double> latency_samples;
    QuantileTable latency;
    long latency_bound_violations = 0;  // latency > queue wait + |W|*round + settlement tick
};

// Nearest-rank order statistics (no interpolation).
QuantileTable latency_cdf(std::vector<double> samples);

RunMetrics compute_metrics(const EventLog& log);

// Single-run CSV: one header line + one row.
std::string metrics_csv(const RunMetrics& m);

// The same summary as a JSON object (without the raw samples).
std::string metrics_json(const RunMetrics& m);

// Stable decimal formatting shared by every CSV writer.
std::string fmt_double(double v);

}  // namespace hybridchain
