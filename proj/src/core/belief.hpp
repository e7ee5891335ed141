#pragma once

#include <optional>
#include <vector>

#include "types.hpp"

namespace hybridchain {

struct BeliefState {
    double psi = 0.5;  // intermediate belief, in [0,1]
    double p = 0.5;    // actual belief, in [0,1]; monotone non-increasing
    Decision decision = Decision::Undecided;
    bool hard_zero = false;  // latched once a self-custodied conflict is seen
    std::optional<int> round_of_decision;
};

struct PerceptionEvidence {
    std::uint8_t verdict = 1;         // 0 = conflict
    double source_reliability = 0.5;  // sender's tracked rho^m
};

// All perceptions one validator received about one transaction in one round.
struct PerceptionBatch {
    std::vector<PerceptionEvidence> entries;
    TxId subject = 0;
    int round = 0;
};

struct ReceivedBelief {
    ValidatorId source = 0;
    double p_prev = 0.0;
};

struct TrimSet {
    std::vector<ReceivedBelief> received;
    int f = 0;
};

// Prior probability that an invalid transaction conflicts with one given
// witness: 2^(w-1) / (2^w - 1).
double beta_conflict_prior(int witness_size);

// Bayesian posterior of validity given the round's perception batch.
// Computed in log space; the empty batch is the identity and psi_prev in
// {0,1} is absorbing.
double update_intermediate(double psi_prev, const PerceptionBatch& batch, double beta_val);

// Trimmed-min rule: sort received beliefs, drop the f highest and f lowest
// (ties broken by source index), then take the min over survivors, the own
// previous belief, and the current intermediate belief. Requires at least
// 2f+1 received values.
double update_actual(double own_p_prev, const TrimSet& trims, double psi_now);

// Self-custodied conflict pins the actual belief to zero permanently; the
// validator keeps relaying and voting.
void apply_hard_zero(BeliefState& state, std::optional<std::uint8_t> own_verdict);

// accept if p >= eta1, reject if p <= eta2 (boundaries inclusive), else undecided.
Decision local_decision(double p, double eta1, double eta2);

// Distance-to-threshold rule for the final round; exact tie rejects.
Decision forced_decision(double p, double eta1, double eta2);

}  // namespace hybridchain
