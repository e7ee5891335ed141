#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "consensus.hpp"
#include "simnet.hpp"
#include "workload.hpp"

namespace hybridchain {

struct BootstrapConfig {
    int training_size = 10000;  // ground-truth labeled, half valid
    int heldout_size = 5000;
    std::string weights_file;  // non-empty: load instead of training
};

struct TraceConfig {
    bool reliability = false;  // per-epoch reliability trajectories
    bool beliefs = false;      // per-round (psi, p, decision) rows
};

struct RunConfig {
    WorkloadConfig workload;
    NetConfig net;
    AdversaryConfig adversary;
    ProtocolParams protocol;
    BootstrapConfig bootstrap;
    TraceConfig trace;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
};

// Parse/serialize the JSON config. Unknown keys are rejected; every module
// invariant is re-checked on load. dump(load(x)) is canonical and load(dump(c))
// round-trips exactly.
RunConfig load_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string dump_config(const RunConfig& cfg);

// Built-in parameter sets: "desk" (M=60, gamma=600) and "paper" (M=1000,
// gamma=6000).
RunConfig preset_config(const std::string& name);

// Full invariant check; throws ConfigError. Returns a human-readable warning
// (e.g. tau*M > f) or an empty string.
std::string validate_config(const RunConfig& cfg);

struct SweepSpec {
    std::string axis;  // tau | gamma | M
    std::vector<double> points;
    int repeats = 1;
    RunConfig base;
};

SweepSpec load_sweep_text(const std::string& text);
SweepSpec load_sweep_file(const std::string& path);

// The base config with one axis value applied.
RunConfig apply_axis(const RunConfig& base, const std::string& axis, double value);

}  // namespace hybridchain
