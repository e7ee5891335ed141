#include "eventlog.hpp"

#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace hybridchain {

using nlohmann::json;

namespace {

json meta_json(const MetaEvent& m) {
    return json{{"type", "meta"},     {"M", m.M},
                {"f", m.f},           {"lambda", m.lambda},
                {"round_ms", m.round_time_ms}, {"link_ms", m.link_latency_ms},
                {"seed", m.seed},     {"cutoff_ms", m.cutoff_ms},
                {"tau", m.tau},       {"behavior", m.behavior}};
}

json decision_json(const DecisionEvent& d) {
    return json{{"type", "decision"},
                {"tx", d.tx},
                {"epoch", d.epoch},
                {"round", d.round},
                {"accepts", d.accepts},
                {"rejects", d.rejects},
                {"forced", d.forced ? 1 : 0},
                {"split", d.split_fallback ? 1 : 0},
                {"final", d.final_valid ? 1 : 0},
                {"truth", d.truth_valid ? 1 : 0},
                {"replay", d.replay ? 1 : 0},
                {"w", d.witness_count},
                {"submit_ms", d.submit_ms},
                {"epoch_start_ms", d.epoch_start_ms},
                {"decide_ms", d.decide_ms}};
}

}  // namespace

std::string to_jsonl(const EventLog& log) {
    std::ostringstream os;
    os << meta_json(log.meta).dump() << '\n';
    std::size_t ai = 0;
    // attacks are stamped; interleave by time before the decisions that follow them
    for (const DecisionEvent& d : log.decisions) {
        while (ai < log.attacks.size() && log.attacks[ai].ms <= d.decide_ms) {
            const AttackEvent& a = log.attacks[ai++];
            os << json{{"type", "attack"}, {"kind", a.kind}, {"original", a.original},
                       {"clone", a.clone}, {"ms", a.ms}}
                      .dump()
               << '\n';
        }
        os << decision_json(d).dump() << '\n';
    }
    for (; ai < log.attacks.size(); ++ai) {
        const AttackEvent& a = log.attacks[ai];
        os << json{{"type", "attack"}, {"kind", a.kind}, {"original", a.original},
                   {"clone", a.clone}, {"ms", a.ms}}
                  .dump()
           << '\n';
    }
    os << json{{"type", "end"},
               {"clock_ms", log.end.clock_ms},
               {"decided", log.end.decided},
               {"backlog", log.end.backlog}}
              .dump()
       << '\n';
    return os.str();
}

EventLog parse_events(const std::string& jsonl) {
    EventLog log;
    std::istringstream is(jsonl);
    std::string line;
    long line_no = 0;
    bool saw_meta = false;
    bool saw_end = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw LookupError("event log: parse error at line " + std::to_string(line_no) + ": " +
                              e.what());
        }
        try {
            const std::string type = j.at("type").get<std::string>();
            if (type == "meta") {
                log.meta.M = j.at("M").get<int>();
                log.meta.f = j.at("f").get<int>();
                log.meta.lambda = j.at("lambda").get<int>();
                log.meta.round_time_ms = j.at("round_ms").get<double>();
                log.meta.link_latency_ms = j.at("link_ms").get<double>();
                log.meta.seed = j.at("seed").get<std::uint64_t>();
                log.meta.cutoff_ms = j.at("cutoff_ms").get<double>();
                log.meta.tau = j.at("tau").get<double>();
                log.meta.behavior = j.at("behavior").get<std::string>();
                saw_meta = true;
            } else if (type == "decision") {
                DecisionEvent d;
                d.tx = j.at("tx").get<TxId>();
                d.epoch = j.at("epoch").get<long>();
                d.round = j.at("round").get<int>();
                d.accepts = j.at("accepts").get<int>();
                d.rejects = j.at("rejects").get<int>();
                d.forced = j.at("forced").get<int>() != 0;
                d.split_fallback = j.at("split").get<int>() != 0;
                d.final_valid = j.at("final").get<int>() != 0;
                d.truth_valid = j.at("truth").get<int>() != 0;
                d.replay = j.at("replay").get<int>() != 0;
                d.witness_count = j.at("w").get<int>();
                d.submit_ms = j.at("submit_ms").get<double>();
                d.epoch_start_ms = j.at("epoch_start_ms").get<double>();
                d.decide_ms = j.at("decide_ms").get<double>();
                log.decisions.push_back(d);
            } else if (type == "attack") {
                AttackEvent a;
                a.kind = j.at("kind").get<std::string>();
                a.original = j.at("original").get<TxId>();
                a.clone = j.at("clone").get<TxId>();
                a.ms = j.at("ms").get<double>();
                log.attacks.push_back(a);
            } else if (type == "end") {
                log.end.clock_ms = j.at("clock_ms").get<double>();
                log.end.decided = j.at("decided").get<long>();
                log.end.backlog = j.at("backlog").get<long>();
                saw_end = true;
            } else {
                throw LookupError("event log: unknown record type at line " + std::to_string(line_no));
            }
        } catch (const json::exception& e) {
            throw LookupError("event log: bad record at line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!saw_meta) throw LookupError("event log: missing meta record");
    if (!saw_end) throw LookupError("event log: missing end record");
    return log;
}

}  // namespace hybridchain
