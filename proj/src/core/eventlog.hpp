#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "types.hpp"

namespace hybridchain {

// Line-delimited event records emitted by a run and consumed by the metrics
// module. The stream layout is: one meta line, then decision/attack lines in
// emission order, then one end line.

struct MetaEvent {
    int M = 0;
    int f = 0;
    int lambda = 0;
    double round_time_ms = 0.0;
    double link_latency_ms = 0.0;
    std::uint64_t seed = 0;
    double cutoff_ms = 0.0;  // 0 = ran to exhaustion
    double tau = 0.0;
    std::string behavior;
};

struct DecisionEvent {
    TxId tx = 0;
    long epoch = 0;
    int round = 0;
    int accepts = 0;
    int rejects = 0;
    bool forced = false;
    bool split_fallback = false;
    bool final_valid = false;
    bool truth_valid = false;
    bool replay = false;
    int witness_count = 0;
    double submit_ms = 0.0;
    double epoch_start_ms = 0.0;
    double decide_ms = 0.0;
};

struct AttackEvent {
    std::string kind;
    TxId original = 0;
    TxId clone = 0;
    double ms = 0.0;
};

struct EndEvent {
    double clock_ms = 0.0;
    long decided = 0;
    long backlog = 0;
};

struct EventLog {
    MetaEvent meta;
    std::vector<DecisionEvent> decisions;
    std::vector<AttackEvent> attacks;
    EndEvent end;
};

std::string to_jsonl(const EventLog& log);

// Throws LookupError with the offending line number on malformed input.
EventLog parse_events(const std::string& jsonl);

}  // namespace hybridchain
