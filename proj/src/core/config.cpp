#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace hybridchain {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::vector<std::string>& known, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const std::string& k : known) ok = ok || it.key() == k;
        if (!ok) throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
}

std::string behavior_name(AdversaryBehavior b) {
    switch (b) {
        case AdversaryBehavior::Invert: return "invert";
        case AdversaryBehavior::Withhold: return "withhold";
        case AdversaryBehavior::ReplayInjector: return "replay-injector";
    }
    return "invert";
}

AdversaryBehavior parse_behavior(const std::string& s) {
    if (s == "invert") return AdversaryBehavior::Invert;
    if (s == "withhold") return AdversaryBehavior::Withhold;
    if (s == "replay-injector") return AdversaryBehavior::ReplayInjector;
    throw ConfigError("config: unknown adversary behavior '" + s + "'");
}

}  // namespace

RunConfig load_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig cfg;
    try {
        reject_unknown(j, {"workload", "net", "adversary", "protocol", "bootstrap", "trace", "seed",
                           "output_dir"},
                       "top level");
        if (j.contains("workload")) {
            const json& w = j["workload"];
            reject_unknown(w, {"gamma", "n_users", "invalid_fraction", "duration_minutes", "genesis",
                               "max_minutes"},
                           "workload");
            cfg.workload.gamma = w.value("gamma", cfg.workload.gamma);
            cfg.workload.n_users = w.value("n_users", cfg.workload.n_users);
            cfg.workload.invalid_fraction = w.value("invalid_fraction", cfg.workload.invalid_fraction);
            cfg.workload.duration_minutes = w.value("duration_minutes", cfg.workload.duration_minutes);
            cfg.workload.genesis = w.value("genesis", cfg.workload.genesis);
            cfg.workload.max_minutes = w.value("max_minutes", cfg.workload.max_minutes);
        }
        if (j.contains("net")) {
            const json& n = j["net"];
            reject_unknown(n, {"link_latency_ms", "round_time_ms", "bandwidth_note"}, "net");
            cfg.net.link_latency_ms = n.value("link_latency_ms", cfg.net.link_latency_ms);
            cfg.net.round_time_ms = n.value("round_time_ms", cfg.net.round_time_ms);
            cfg.net.bandwidth_note = n.value("bandwidth_note", cfg.net.bandwidth_note);
        }
        if (j.contains("adversary")) {
            const json& a = j["adversary"];
            reject_unknown(a, {"tau", "behavior", "random_beliefs", "replay_count", "target_validators",
                               "target_transactions"},
                           "adversary");
            cfg.adversary.tau = a.value("tau", cfg.adversary.tau);
            cfg.adversary.behavior = parse_behavior(a.value("behavior", std::string("invert")));
            cfg.adversary.random_beliefs = a.value("random_beliefs", false);
            cfg.adversary.replay_count = a.value("replay_count", 0);
            if (a.contains("target_validators"))
                cfg.adversary.target_validators = a["target_validators"].get<std::vector<ValidatorId>>();
            if (a.contains("target_transactions"))
                cfg.adversary.target_transactions = a["target_transactions"].get<std::vector<TxId>>();
        }
        if (j.contains("protocol")) {
            const json& p = j["protocol"];
            reject_unknown(p, {"M", "f", "mu1", "mu2", "zeta1", "zeta2", "cadence", "eq5_literal_xor",
                               "forced_tie"},
                           "protocol");
            cfg.protocol.M = p.value("M", cfg.protocol.M);
            cfg.protocol.f = p.value("f", cfg.protocol.f);
            cfg.protocol.mu1 = p.value("mu1", cfg.protocol.mu1);
            cfg.protocol.mu2 = p.value("mu2", cfg.protocol.mu2);
            cfg.protocol.zeta1 = p.value("zeta1", cfg.protocol.zeta1);
            cfg.protocol.zeta2 = p.value("zeta2", cfg.protocol.zeta2);
            cfg.protocol.cadence = p.value("cadence", cfg.protocol.cadence);
            cfg.protocol.eq5_literal_xor = p.value("eq5_literal_xor", false);
            const std::string tie = p.value("forced_tie", std::string("reject"));
            if (tie != "reject") throw ConfigError("config: forced_tie supports only 'reject'");
        }
        if (j.contains("bootstrap")) {
            const json& b = j["bootstrap"];
            reject_unknown(b, {"training_size", "heldout_size", "weights_file"}, "bootstrap");
            cfg.bootstrap.training_size = b.value("training_size", cfg.bootstrap.training_size);
            cfg.bootstrap.heldout_size = b.value("heldout_size", cfg.bootstrap.heldout_size);
            cfg.bootstrap.weights_file = b.value("weights_file", std::string());
        }
        if (j.contains("trace")) {
            const json& t = j["trace"];
            reject_unknown(t, {"reliability", "beliefs"}, "trace");
            cfg.trace.reliability = t.value("reliability", false);
            cfg.trace.beliefs = t.value("beliefs", false);
        }
        cfg.seed = j.value("seed", cfg.seed);
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str());
}

std::string dump_config(const RunConfig& cfg) {
    json j;
    j["workload"] = {{"gamma", cfg.workload.gamma},
                     {"n_users", cfg.workload.n_users},
                     {"invalid_fraction", cfg.workload.invalid_fraction},
                     {"duration_minutes", cfg.workload.duration_minutes},
                     {"genesis", cfg.workload.genesis},
                     {"max_minutes", cfg.workload.max_minutes}};
    j["net"] = {{"link_latency_ms", cfg.net.link_latency_ms},
                {"round_time_ms", cfg.net.round_time_ms},
                {"bandwidth_note", cfg.net.bandwidth_note}};
    j["adversary"] = {{"tau", cfg.adversary.tau},
                      {"behavior", behavior_name(cfg.adversary.behavior)},
                      {"random_beliefs", cfg.adversary.random_beliefs},
                      {"replay_count", cfg.adversary.replay_count},
                      {"target_validators", cfg.adversary.target_validators},
                      {"target_transactions", cfg.adversary.target_transactions}};
    j["protocol"] = {{"M", cfg.protocol.M},
                     {"f", cfg.protocol.f},
                     {"mu1", cfg.protocol.mu1},
                     {"mu2", cfg.protocol.mu2},
                     {"zeta1", cfg.protocol.zeta1},
                     {"zeta2", cfg.protocol.zeta2},
                     {"cadence", cfg.protocol.cadence},
                     {"eq5_literal_xor", cfg.protocol.eq5_literal_xor},
                     {"forced_tie", "reject"}};
    j["bootstrap"] = {{"training_size", cfg.bootstrap.training_size},
                      {"heldout_size", cfg.bootstrap.heldout_size},
                      {"weights_file", cfg.bootstrap.weights_file}};
    j["trace"] = {{"reliability", cfg.trace.reliability}, {"beliefs", cfg.trace.beliefs}};
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

std::string validate_config(const RunConfig& cfg) {
    const WorkloadConfig& w = cfg.workload;
    if (!(w.gamma > 0.0)) throw ConfigError("config: workload.gamma must be > 0");
    if (w.n_users < 1) throw ConfigError("config: workload.n_users must be >= 1");
    if (w.invalid_fraction < 0.0 || w.invalid_fraction > 1.0)
        throw ConfigError("config: workload.invalid_fraction must be in [0,1]");
    if (w.duration_minutes < 0.0) throw ConfigError("config: workload.duration_minutes must be >= 0");
    if (w.genesis < 1) throw ConfigError("config: workload.genesis must be >= 1");
    if (w.max_minutes < 0.0) throw ConfigError("config: workload.max_minutes must be >= 0");

    const ProtocolParams& p = cfg.protocol;
    if (p.M < 1) throw ConfigError("config: protocol.M must be >= 1");
    if (p.f < 0) throw ConfigError("config: protocol.f must be >= 0");
    if (p.f > p.M / 2 - 1)
        throw ConfigError("config: protocol.f exceeds the Byzantine bound floor(M/2)-1");
    if (!(p.mu2 >= 0.0 && p.mu2 < p.mu1)) throw ConfigError("config: require 0 <= mu2 < mu1");
    if (!(p.zeta1 > 0.0 && p.zeta1 < 1.0)) throw ConfigError("config: zeta1 must be in (0,1)");
    if (!(p.zeta2 > 0.0 && p.zeta2 < 1.0)) throw ConfigError("config: zeta2 must be in (0,1)");
    if (p.cadence < 1) throw ConfigError("config: protocol.cadence must be >= 1");

    const NetConfig& n = cfg.net;
    if (!(n.link_latency_ms > 0.0) || !(n.round_time_ms > 0.0))
        throw ConfigError("config: net timings must be > 0");
    if (!(n.link_latency_ms < n.round_time_ms))
        throw ConfigError("config: link_latency_ms must be < round_time_ms");

    const AdversaryConfig& a = cfg.adversary;
    if (a.tau < 0.0 || a.tau > 1.0) throw ConfigError("config: adversary.tau must be in [0,1]");
    if (a.replay_count < 0) throw ConfigError("config: adversary.replay_count must be >= 0");
    if (a.replay_count > 0 && a.behavior != AdversaryBehavior::ReplayInjector)
        throw ConfigError("config: replay_count requires behavior 'replay-injector'");

    if (cfg.bootstrap.weights_file.empty()) {
        if (cfg.bootstrap.training_size < 2)
            throw ConfigError("config: bootstrap.training_size must be >= 2");
    }
    if (cfg.bootstrap.heldout_size < 1) throw ConfigError("config: bootstrap.heldout_size must be >= 1");

    if (a.behavior != AdversaryBehavior::ReplayInjector && a.tau * p.M > static_cast<double>(p.f) + 1e-9) {
        std::ostringstream warn;
        warn << "warning: tau*M = " << a.tau * p.M << " exceeds f = " << p.f
             << "; resilience claims do not apply (stress run)";
        return warn.str();
    }
    return {};
}

RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    if (name == "desk") {
        cfg.workload = {600.0, 25, 0.5, 2.0, 100, 0.0};
        cfg.protocol.M = 60;
        cfg.protocol.f = 4;
    } else if (name == "paper") {
        cfg.workload = {6000.0, 100, 0.5, 5.0, 200, 0.0};
        cfg.protocol.M = 1000;
        cfg.protocol.f = 45;
    } else {
        throw ConfigError("config: unknown preset '" + name + "' (use desk or paper)");
    }
    return cfg;
}

SweepSpec load_sweep_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sweep: ") + e.what());
    }
    SweepSpec spec;
    try {
        reject_unknown(j, {"axis", "points", "repeats", "base"}, "sweep");
        spec.axis = j.at("axis").get<std::string>();
        spec.points = j.at("points").get<std::vector<double>>();
        spec.repeats = j.value("repeats", 1);
        spec.base = j.contains("base") ? load_config_text(j["base"].dump()) : RunConfig{};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sweep: ") + e.what());
    }
    if (spec.axis != "tau" && spec.axis != "gamma" && spec.axis != "M")
        throw ConfigError("sweep: axis must be one of tau, gamma, M");
    if (spec.points.empty()) throw ConfigError("sweep: points must be non-empty");
    if (spec.repeats < 1) throw ConfigError("sweep: repeats must be >= 1");
    return spec;
}

SweepSpec load_sweep_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("sweep: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_sweep_text(ss.str());
}

RunConfig apply_axis(const RunConfig& base, const std::string& axis, double value) {
    RunConfig cfg = base;
    if (axis == "tau")
        cfg.adversary.tau = value;
    else if (axis == "gamma")
        cfg.workload.gamma = value;
    else if (axis == "M")
        cfg.protocol.M = static_cast<int>(std::llround(value));
    else
        throw ConfigError("sweep: axis must be one of tau, gamma, M");
    return cfg;
}

}  // namespace hybridchain
