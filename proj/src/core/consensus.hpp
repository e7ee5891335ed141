#pragma once

#include <optional>
#include <vector>

#include "belief.hpp"
#include "classifier.hpp"
#include "ledger.hpp"
#include "reliability.hpp"
#include "rng.hpp"
#include "simnet.hpp"
#include "workload.hpp"

namespace hybridchain {

struct ProtocolParams {
    int M = 60;
    int f = 4;
    double mu1 = 1.0;
    double mu2 = 0.5;
    double zeta1 = 0.98;
    double zeta2 = 0.9;
    int cadence = 20;  // retrain every N epochs
    bool eq5_literal_xor = false;

    int community_floor() const { return 2 * f + 2; }
    int lambda() const { return M / community_floor(); }
};

struct ValidatorState {
    ValidatorId index = 0;
    bool honest = true;
    double reliability = 0.5;  // rho^m
    WeightVector weights;
    std::vector<TrainingExample> retrain_window;  // decided txs whose community included this validator
    std::vector<SentPerception> sent_this_epoch;  // Q_k(n), delivered perceptions only
};

struct MemberState {
    ValidatorId id = 0;
    BeliefState belief;
    double eta1 = 0.75;
    double eta2 = 0.25;
    bool voted = false;
};

// Per-transaction processing state for one epoch slot.
struct TxProcessing {
    TxId tx = 0;
    std::vector<ValidatorId> members;  // community V_l; becomes the custodian set on confirm
    std::vector<MemberState> states;   // parallel to members
    bool active = true;
    Decision final_decision = Decision::Undecided;
    int decided_round = 0;
    bool forced = false;
    bool split_fallback = false;
    int accepts = 0;
    int rejects = 0;
};

struct EpochPlan {
    long epoch_index = 0;
    std::vector<TxId> batch;  // X(n), FIFO order
    int lambda_full = 0;      // floor(M / (2f+2))
    int f = 0;
    int max_rounds = 0;       // R_n = max |W| over the batch
    std::vector<TxProcessing> txs;
    // permutations[validator][slot]: that validator's private shuffle of the
    // slot transaction's witness list
    std::vector<std::vector<std::vector<TxId>>> permutations;
    SimTimeMs start_ms = 0.0;

    bool any_active() const {
        for (const TxProcessing& t : txs)
            if (t.active) return true;
        return false;
    }
};

struct ConsensusOutcome {
    TxId tx = 0;
    bool final_valid = false;  // V_l
    int deciding_round = 0;
    int accepts = 0;
    int rejects = 0;
    bool decided_by_force = false;
    bool split_fallback = false;
    long epoch_index = 0;
    int witness_count = 0;
    bool truth_valid = false;
    bool replay = false;
    SimTimeMs epoch_start = 0.0;
    SimTimeMs decide_time = 0.0;
    SimTimeMs submit_time = 0.0;
};

// One (round, validator, transaction) belief sample for debugging dumps.
struct BeliefTraceRow {
    TxId tx = 0;
    int round = 0;
    ValidatorId validator = 0;
    double psi = 0.0;
    double p = 0.0;
    Decision decision = Decision::Undecided;
};

// Runs the per-epoch protocol: community assignment, the four-stage rounds,
// forced decisions, commits, and end-of-epoch settlement (reliabilities,
// retraining cadence). Owns no transactions or validators; mutates the shared
// ledger/validator/user state it is given.
class ConsensusEngine {
public:
    ConsensusEngine(const ProtocolParams& params, const NetConfig& net, const AdversaryConfig& adversary,
                    Ledger& ledger, std::vector<ValidatorState>& validators,
                    std::vector<UserProfile>& users, std::uint64_t seed);

    // Random grouping into min(lambda, |batch|) communities plus fresh private
    // permutations for every validator and batch transaction.
    EpochPlan assign_communities(const std::vector<TxId>& batch, long epoch_index, SimTimeMs start_ms);

    // One protocol round (Stages 1-4). Decided transactions are committed and
    // appended to `decided`.
    void run_round(EpochPlan& plan, SimClock& clock, int round, std::vector<ConsensusOutcome>& decided);

    // assign + rounds (with early exit) + settlement + retraining cadence +
    // the settlement clock tick.
    std::vector<ConsensusOutcome> run_epoch(const std::vector<TxId>& batch, SimClock& clock,
                                            long epoch_index);

    // Strict-majority rule over decided votes; nothing if neither side clears
    // floor(size/2)+1.
    static std::optional<bool> collective_decision(int accepts, int rejects, int community_size);
    static std::optional<bool> collective_decision(const std::vector<Decision>& votes, int community_size);

    const PairVerdictBook& epoch_book() const { return book_; }
    const std::vector<std::uint8_t>& dishonest_flags() const { return dishonest_; }

    // When set, Stage-2 belief states are appended here every round.
    void set_belief_trace(std::vector<BeliefTraceRow>* sink) { trace_ = sink; }

private:
    ProtocolParams params_;
    NetConfig net_;
    AdversaryConfig adversary_;
    Ledger& ledger_;
    std::vector<ValidatorState>& validators_;
    std::vector<UserProfile>& users_;
    std::uint64_t seed_;
    Rng adversary_rng_;
    PairVerdictBook book_;
    std::vector<std::uint8_t> dishonest_;
    std::vector<BeliefTraceRow>* trace_ = nullptr;

    bool is_dishonest(ValidatorId v) const { return dishonest_[static_cast<std::size_t>(v)] != 0; }
    void finalize(EpochPlan& plan, TxProcessing& slot, bool value, int round, bool forced, bool fallback,
                  std::vector<ConsensusOutcome>& decided);
    void settle_epoch(const EpochPlan& plan);
};

}  // namespace hybridchain
