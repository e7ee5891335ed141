#pragma once

#include <string>
#include <vector>

#include "ledger.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace hybridchain {

struct NetConfig {
    double link_latency_ms = 100.0;
    double round_time_ms = 500.0;
    // Bandwidth is informational only: rounds are timeout-bounded and every
    // message fits the round budget.
    std::string bandwidth_note = "20 Mbps, non-binding";
};

enum class AdversaryBehavior { Invert, Withhold, ReplayInjector };

struct AdversaryConfig {
    double tau = 0.0;  // dishonest validator fraction
    AdversaryBehavior behavior = AdversaryBehavior::Invert;
    bool random_beliefs = false;  // uniform-random broadcast beliefs instead of extremes
    int replay_count = 0;
    std::vector<ValidatorId> target_validators;  // empty = every dishonest validator
    std::vector<TxId> target_transactions;       // empty = every transaction
};

enum class MsgKind : std::uint8_t { Perception = 0, Belief = 1, Vote = 2 };

struct Message {
    MsgKind kind = MsgKind::Perception;
    ValidatorId sender = 0;
    TxId subject = 0;
    TxId witness = 0;           // perception payload
    std::uint8_t verdict = 1;   // perception payload
    double belief = 0.0;        // belief payload
    Decision vote = Decision::Undecided;  // vote payload
    SimTimeMs send_time = 0.0;
    SimTimeMs deliver_time = 0.0;
    long seq = 0;  // assignment order within the batch
};

// Monotone simulated clock owned by the round coordinator.
struct SimClock {
    SimTimeMs now = 0.0;
    void advance(double ms) { now += ms; }
};

// Stamps each message with the constant link latency and returns the batch in
// deterministic (send_time, sender, seq) order. Always within the round budget.
std::vector<Message> deliver(std::vector<Message> batch, const NetConfig& cfg, const SimClock& clock);

// Inverted verdict for a dishonest custodian: lies about every pair.
Perception adversary_perceive(const Ledger& ledger, ValidatorId validator, TxId ell, TxId j, int round);

// Worst-case vote and broadcast belief for a dishonest community member:
// votes against ground truth and pushes the gossiped belief to the admissible
// extreme (or a uniform draw when random_beliefs is set).
std::pair<Decision, double> adversary_vote_and_belief(bool truth_valid, const AdversaryConfig& cfg,
                                                      Rng& rng);

// Drops every message whose sender is a (targeted) dishonest validator.
std::vector<Message> withhold_filter(std::vector<Message> messages, const AdversaryConfig& cfg,
                                     const std::vector<std::uint8_t>& dishonest);

// Clone of a confirmed transaction with fresh id/submit time and conflict
// bits recomputed against the spent set (all ones by construction).
Transaction replay_inject(const Ledger& ledger, TxId confirmed_id, SimTimeMs now);

}  // namespace hybridchain
