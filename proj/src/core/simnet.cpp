#include "simnet.hpp"

#include <algorithm>

namespace hybridchain {

std::vector<Message> deliver(std::vector<Message> batch, const NetConfig& cfg, const SimClock& clock) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
        batch[i].send_time = clock.now;
        batch[i].deliver_time = clock.now + cfg.link_latency_ms;
        batch[i].seq = static_cast<long>(i);
    }
    std::stable_sort(batch.begin(), batch.end(), [](const Message& a, const Message& b) {
        if (a.send_time != b.send_time) return a.send_time < b.send_time;
        if (a.sender != b.sender) return a.sender < b.sender;
        return a.seq < b.seq;
    });
    return batch;
}

Perception adversary_perceive(const Ledger& ledger, ValidatorId validator, TxId ell, TxId j, int round) {
    Perception p = ledger.honest_perceive(validator, ell, j, round);
    p.verdict = static_cast<std::uint8_t>(1 - p.verdict);
    return p;
}

std::pair<Decision, double> adversary_vote_and_belief(bool truth_valid, const AdversaryConfig& cfg,
                                                      Rng& rng) {
    const Decision vote = truth_valid ? Decision::Reject : Decision::Accept;
    double belief = truth_valid ? 0.0 : 1.0;
    if (cfg.random_beliefs) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        belief = u(rng);
    }
    return {vote, belief};
}

namespace {

bool targeted(const std::vector<ValidatorId>& targets, ValidatorId v) {
    return targets.empty() || std::find(targets.begin(), targets.end(), v) != targets.end();
}

bool targeted_tx(const std::vector<TxId>& targets, TxId t) {
    return targets.empty() || std::find(targets.begin(), targets.end(), t) != targets.end();
}

}  // namespace

std::vector<Message> withhold_filter(std::vector<Message> messages, const AdversaryConfig& cfg,
                                     const std::vector<std::uint8_t>& dishonest) {
    if (cfg.behavior != AdversaryBehavior::Withhold) return messages;
    std::erase_if(messages, [&](const Message& m) {
        return m.sender >= 0 && m.sender < static_cast<ValidatorId>(dishonest.size()) &&
               dishonest[static_cast<std::size_t>(m.sender)] &&
               targeted(cfg.target_validators, m.sender) && targeted_tx(cfg.target_transactions, m.subject);
    });
    return messages;
}

Transaction replay_inject(const Ledger& ledger, TxId confirmed_id, SimTimeMs now) {
    if (!ledger.is_confirmed(confirmed_id))
        throw LookupError("replay: target " + std::to_string(confirmed_id) + " is not confirmed");
    const Transaction& orig = ledger.tx(confirmed_id);
    Transaction clone = orig;
    clone.id = ledger.next_id();
    clone.submit_time = now;
    clone.genesis = false;
    clone.replay = true;
    for (std::size_t i = 0; i < clone.witness_ids.size(); ++i)
        clone.conflict_bits[i] = ledger.is_spent(clone.witness_ids[i]) ? 1 : 0;
    bool any = false;
    for (std::uint8_t b : clone.conflict_bits) any = any || b;
    clone.truth_valid = !any;
    return clone;
}

}  // namespace hybridchain
