#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace hybridchain {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

QuantileTable latency_cdf(std::vector<double> samples) {
    if (samples.empty()) throw LookupError("metrics: empty latency sample set");
    std::sort(samples.begin(), samples.end());
    auto rank = [&](double p) {
        std::size_t r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(samples.size())));
        if (r == 0) r = 1;
        return samples[r - 1];
    };
    QuantileTable q;
    q.p50 = rank(0.50);
    q.p90 = rank(0.90);
    q.p99 = rank(0.99);
    q.max = samples.back();
    return q;
}

RunMetrics compute_metrics(const EventLog& log) {
    RunMetrics m;
    m.decided = static_cast<long>(log.decisions.size());
    m.backlog = log.end.backlog;
    if (m.decided != log.end.decided)
        throw LookupError("metrics: decision count disagrees with end record");

    long correct = 0;
    m.latency_samples.reserve(log.decisions.size());
    for (const DecisionEvent& d : log.decisions) {
        if (d.final_valid == d.truth_valid) ++correct;
        const double latency = d.decide_ms - d.submit_ms;
        m.latency_samples.push_back(latency);
        const double queue_wait = d.epoch_start_ms - d.submit_ms;
        const double bound = queue_wait + d.witness_count * log.meta.round_time_ms +
                             log.meta.link_latency_ms;
        if (latency > bound + 1e-6) ++m.latency_bound_violations;
    }
    if (m.decided > 0) m.accuracy = static_cast<double>(correct) / static_cast<double>(m.decided);

    m.sim_minutes = log.end.clock_ms / 60000.0;
    if (m.sim_minutes > 0.0) m.throughput_per_min = static_cast<double>(m.decided) / m.sim_minutes;
    if (!m.latency_samples.empty()) m.latency = latency_cdf(m.latency_samples);
    return m;
}

std::string metrics_json(const RunMetrics& m) {
    nlohmann::json j{{"decided", m.decided},
                     {"backlog", m.backlog},
                     {"sim_minutes", m.sim_minutes},
                     {"throughput_per_min", m.throughput_per_min},
                     {"accuracy", m.accuracy},
                     {"latency_ms", nlohmann::json{{"p50", m.latency.p50},
                                                   {"p90", m.latency.p90},
                                                   {"p99", m.latency.p99},
                                                   {"max", m.latency.max}}},
                     {"latency_bound_violations", m.latency_bound_violations}};
    return j.dump(2) + "\n";
}

std::string metrics_csv(const RunMetrics& m) {
    std::ostringstream os;
    os << "decided,backlog,sim_minutes,throughput_per_min,accuracy,p50_ms,p90_ms,p99_ms,max_ms,"
          "latency_bound_violations\n";
    os << m.decided << ',' << m.backlog << ',' << fmt_double(m.sim_minutes) << ','
       << fmt_double(m.throughput_per_min) << ',' << fmt_double(m.accuracy) << ','
       << fmt_double(m.latency.p50) << ',' << fmt_double(m.latency.p90) << ','
       << fmt_double(m.latency.p99) << ',' << fmt_double(m.latency.max) << ','
       << m.latency_bound_violations << '\n';
    return os.str();
}

}  // namespace hybridchain
