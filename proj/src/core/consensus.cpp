#include "consensus.hpp"

#include <algorithm>
#include <map>

#include "error.hpp"

namespace hybridchain {

ConsensusEngine::ConsensusEngine(const ProtocolParams& params, const NetConfig& net,
                                 const AdversaryConfig& adversary, Ledger& ledger,
                                 std::vector<ValidatorState>& validators, std::vector<UserProfile>& users,
                                 std::uint64_t seed)
    : params_(params),
      net_(net),
      adversary_(adversary),
      ledger_(ledger),
      validators_(validators),
      users_(users),
      seed_(seed),
      adversary_rng_(make_rng(seed, stream::adversary, 1)) {
    dishonest_.assign(validators_.size(), 0);
    for (const ValidatorState& v : validators_)
        if (!v.honest) dishonest_[static_cast<std::size_t>(v.index)] = 1;
}

std::optional<bool> ConsensusEngine::collective_decision(int accepts, int rejects, int community_size) {
    const int need = community_size / 2 + 1;  // strict majority of the full community
    if (accepts >= need) return true;
    if (rejects >= need) return false;
    return std::nullopt;
}

std::optional<bool> ConsensusEngine::collective_decision(const std::vector<Decision>& votes,
                                                         int community_size) {
    int acc = 0, rej = 0;
    for (Decision v : votes) {
        if (v == Decision::Accept) ++acc;
        if (v == Decision::Reject) ++rej;
    }
    return collective_decision(acc, rej, community_size);
}

EpochPlan ConsensusEngine::assign_communities(const std::vector<TxId>& batch, long epoch_index,
                                              SimTimeMs start_ms) {
    const int M = params_.M;
    const int floor_size = params_.community_floor();
    if (M < floor_size) throw ConfigError("consensus: M must be at least 2f+2");
    const int lambda = params_.lambda();
    if (static_cast<int>(batch.size()) > lambda)
        throw InvariantError("consensus: batch exceeds lambda");

    EpochPlan plan;
    plan.epoch_index = epoch_index;
    plan.batch = batch;
    plan.lambda_full = lambda;
    plan.f = params_.f;
    plan.start_ms = start_ms;

    Rng rng = make_rng(seed_, stream::assignment, static_cast<std::uint64_t>(epoch_index));

    std::vector<ValidatorId> order(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);

    const int communities = static_cast<int>(batch.size());
    plan.txs.resize(batch.size());
    if (communities > 0) {
        // Full batches deal every validator round-robin (sizes differ by at
        // most one); partial batches use the full-batch community size and
        // leave the remainder idle for the epoch.
        int dealt = M;
        if (communities < lambda) dealt = communities * (M / lambda);
        for (int i = 0; i < dealt; ++i)
            plan.txs[static_cast<std::size_t>(i % communities)].members.push_back(order[static_cast<std::size_t>(i)]);
    }

    for (std::size_t s = 0; s < batch.size(); ++s) {
        TxProcessing& slot = plan.txs[s];
        slot.tx = batch[s];
        const Transaction& tx = ledger_.tx(batch[s]);
        plan.max_rounds = std::max(plan.max_rounds, static_cast<int>(tx.witness_count()));
        std::sort(slot.members.begin(), slot.members.end());
        const double rho_user = users_[static_cast<std::size_t>(tx.submitter)].reliability;
        slot.states.resize(slot.members.size());
        for (std::size_t m = 0; m < slot.members.size(); ++m) {
            MemberState& st = slot.states[m];
            st.id = slot.members[m];
            st.belief.psi = rho_user;
            st.belief.p = rho_user;
            auto [e1, e2] = thresholds(tx.attributes, validators_[static_cast<std::size_t>(st.id)].weights,
                                       {params_.mu1, params_.mu2});
            st.eta1 = e1;
            st.eta2 = e2;
        }
    }

    // Every validator draws a fresh private permutation of every batch
    // transaction's witness list (idle validators included: they still carry
    // the Stage-1 perception duty).
    plan.permutations.assign(static_cast<std::size_t>(M), {});
    for (int k = 0; k < M; ++k) {
        auto& per_tx = plan.permutations[static_cast<std::size_t>(k)];
        per_tx.resize(batch.size());
        for (std::size_t s = 0; s < batch.size(); ++s) {
            per_tx[s] = ledger_.tx(batch[s]).witness_ids;
            std::shuffle(per_tx[s].begin(), per_tx[s].end(), rng);
        }
    }
    return plan;
}

void ConsensusEngine::finalize(EpochPlan& plan, TxProcessing& slot, bool value, int round, bool forced,
                               bool fallback, std::vector<ConsensusOutcome>& decided) {
    slot.active = false;
    slot.final_decision = value ? Decision::Accept : Decision::Reject;
    slot.decided_round = round;
    slot.forced = forced;
    slot.split_fallback = fallback;

    const Transaction& tx = ledger_.tx(slot.tx);
    if (value)
        ledger_.confirm(slot.tx, slot.members);
    else
        ledger_.reject(slot.tx);

    ConsensusOutcome out;
    out.tx = slot.tx;
    out.final_valid = value;
    out.deciding_round = round;
    out.accepts = slot.accepts;
    out.rejects = slot.rejects;
    out.decided_by_force = forced;
    out.split_fallback = fallback;
    out.epoch_index = plan.epoch_index;
    out.witness_count = static_cast<int>(tx.witness_count());
    out.truth_valid = tx.truth_valid;
    out.replay = tx.replay;
    out.epoch_start = plan.start_ms;
    out.decide_time = plan.start_ms + static_cast<double>(round) * net_.round_time_ms;
    out.submit_time = tx.submit_time;
    decided.push_back(out);
}

void ConsensusEngine::run_round(EpochPlan& plan, SimClock& clock, int round,
                                std::vector<ConsensusOutcome>& decided) {
    if (round < 1 || round > plan.max_rounds)
        throw InvariantError("consensus: round out of range");
    const int M = params_.M;

    // Stage 1, step 1: every validator checks the round-th witness of its own
    // permutation for every batch transaction still within witness range and
    // sends its perception to that transaction's community.
    std::vector<Message> msgs;
    for (int k = 0; k < M; ++k) {
        for (std::size_t s = 0; s < plan.batch.size(); ++s) {
            const auto& perm = plan.permutations[static_cast<std::size_t>(k)][s];
            if (static_cast<std::size_t>(round) > perm.size()) continue;
            const TxId j = perm[static_cast<std::size_t>(round - 1)];
            if (!ledger_.is_custodian(k, j)) continue;
            Perception p = is_dishonest(k) && adversary_.behavior == AdversaryBehavior::Invert
                               ? adversary_perceive(ledger_, k, plan.batch[s], j, round)
                               : ledger_.honest_perceive(k, plan.batch[s], j, round);
            Message m;
            m.kind = MsgKind::Perception;
            m.sender = k;
            m.subject = p.subject;
            m.witness = p.witness;
            m.verdict = p.verdict;
            msgs.push_back(m);
        }
    }

    // Stage 1 tick also carries the previous round's actual beliefs within
    // each still-active community (decided communities only relay perceptions).
    for (TxProcessing& slot : plan.txs) {
        if (!slot.active) continue;
        const Transaction& tx = ledger_.tx(slot.tx);
        for (MemberState& st : slot.states) {
            Message m;
            m.kind = MsgKind::Belief;
            m.sender = st.id;
            m.subject = slot.tx;
            if (is_dishonest(st.id)) {
                auto [vote, belief] = adversary_vote_and_belief(tx.truth_valid, adversary_, adversary_rng_);
                (void)vote;
                m.belief = belief;
            } else {
                m.belief = st.belief.p;
            }
            msgs.push_back(m);
        }
    }

    msgs = withhold_filter(std::move(msgs), adversary_, dishonest_);
    std::vector<Message> arrived = deliver(std::move(msgs), net_, clock);

    // Stage 1, step 2: register what actually reached the network. Delivered
    // perceptions feed both the receivers and the end-of-epoch verdict book.
    std::map<TxId, std::vector<std::pair<ValidatorId, std::uint8_t>>> perceptions_by_tx;
    std::map<TxId, std::vector<ReceivedBelief>> beliefs_by_tx;
    std::map<TxId, std::vector<std::pair<ValidatorId, TxId>>> seen_pairs;
    for (const Message& m : arrived) {
        if (m.kind == MsgKind::Perception) {
            auto& seen = seen_pairs[m.subject];
            if (std::find(seen.begin(), seen.end(), std::make_pair(m.sender, m.witness)) != seen.end())
                continue;  // same-source duplicate
            seen.emplace_back(m.sender, m.witness);
            perceptions_by_tx[m.subject].push_back({m.sender, m.verdict});
            Perception rec;
            rec.source_validator = m.sender;
            rec.subject = m.subject;
            rec.witness = m.witness;
            rec.verdict = m.verdict;
            rec.round = round;
            book_.record(rec);
            validators_[static_cast<std::size_t>(m.sender)].sent_this_epoch.push_back(
                {m.subject, m.witness, m.verdict});
        } else if (m.kind == MsgKind::Belief) {
            beliefs_by_tx[m.subject].push_back({m.sender, m.belief});
        }
    }

    // Stage 2: belief updates and local decisions, per active community.
    std::vector<Message> votes;
    for (std::size_t s = 0; s < plan.txs.size(); ++s) {
        TxProcessing& slot = plan.txs[s];
        if (!slot.active) continue;
        const Transaction& tx = ledger_.tx(slot.tx);
        const int w = static_cast<int>(tx.witness_count());
        const double beta_val = beta_conflict_prior(w);
        const auto& tx_perceptions = perceptions_by_tx[slot.tx];
        const auto& tx_beliefs = beliefs_by_tx[slot.tx];

        for (MemberState& st : slot.states) {
            if (is_dishonest(st.id)) continue;               // no honest processing
            if (st.belief.decision != Decision::Undecided) continue;  // decisions are immutable

            PerceptionBatch batch;
            batch.subject = slot.tx;
            batch.round = round;
            for (const auto& [sender, verdict] : tx_perceptions) {
                if (sender == st.id) continue;  // own verdict enters via the self-custody rule
                batch.entries.push_back(
                    {verdict, validators_[static_cast<std::size_t>(sender)].reliability});
            }
            st.belief.psi = update_intermediate(st.belief.psi, batch, beta_val);

            if (round <= w) {
                const TxId j = plan.permutations[static_cast<std::size_t>(st.id)][s]
                                                [static_cast<std::size_t>(round - 1)];
                if (ledger_.is_custodian(st.id, j)) {
                    const std::uint8_t own =
                        static_cast<std::uint8_t>(1 - ledger_.ground_truth_conflict(slot.tx, j));
                    apply_hard_zero(st.belief, own);
                }
            }

            if (st.belief.hard_zero) {
                st.belief.p = 0.0;
            } else {
                TrimSet trims;
                for (const ReceivedBelief& b : tx_beliefs)
                    if (b.source != st.id) trims.received.push_back(b);
                if (trims.received.empty()) {
                    st.belief.p = std::min(st.belief.p, st.belief.psi);
                } else {
                    // Withheld gossip can leave fewer than 2f+1 peers; trim as
                    // much as the received count allows.
                    trims.f = std::min(params_.f, (static_cast<int>(trims.received.size()) - 1) / 2);
                    st.belief.p = update_actual(st.belief.p, trims, st.belief.psi);
                }
            }

            const Decision d = local_decision(st.belief.p, st.eta1, st.eta2);
            if (d != Decision::Undecided) {
                st.belief.decision = d;
                st.belief.round_of_decision = round;
            }
            if (trace_)
                trace_->push_back({slot.tx, round, st.id, st.belief.psi, st.belief.p,
                                   st.belief.decision});
        }

        // Stage 3, step 1: newly decided members send their votes; dishonest
        // members inject their (inverted) votes in the first round.
        for (MemberState& st : slot.states) {
            Decision vote = Decision::Undecided;
            if (is_dishonest(st.id)) {
                if (round == 1) vote = tx.truth_valid ? Decision::Reject : Decision::Accept;
            } else if (st.belief.decision != Decision::Undecided && !st.voted) {
                vote = st.belief.decision;
            }
            if (vote == Decision::Undecided) continue;
            st.voted = true;
            Message m;
            m.kind = MsgKind::Vote;
            m.sender = st.id;
            m.subject = slot.tx;
            m.vote = vote;
            votes.push_back(m);
        }
    }

    votes = withhold_filter(std::move(votes), adversary_, dishonest_);
    std::vector<Message> vote_arrivals = deliver(std::move(votes), net_, clock);
    for (const Message& m : vote_arrivals) {
        for (TxProcessing& slot : plan.txs) {
            if (slot.tx != m.subject) continue;
            if (m.vote == Decision::Accept) ++slot.accepts;
            if (m.vote == Decision::Reject) ++slot.rejects;
        }
    }

    // Stage 3, step 3 and Stage 4: majority check, forced decisions at
    // r = |W_l|, commit and broadcast.
    for (TxProcessing& slot : plan.txs) {
        if (!slot.active) continue;
        const Transaction& tx = ledger_.tx(slot.tx);
        const int size = static_cast<int>(slot.members.size());

        auto maybe = collective_decision(slot.accepts, slot.rejects, size);
        if (maybe.has_value()) {
            finalize(plan, slot, *maybe, round, false, false, decided);
            continue;
        }
        if (round == static_cast<int>(tx.witness_count())) {
            std::vector<Message> forced_votes;
            for (MemberState& st : slot.states) {
                if (is_dishonest(st.id)) continue;
                if (st.belief.decision != Decision::Undecided) continue;
                const Decision d = forced_decision(st.belief.p, st.eta1, st.eta2);
                st.belief.decision = d;
                st.belief.round_of_decision = round;
                if (!st.voted) {
                    st.voted = true;
                    Message m;
                    m.kind = MsgKind::Vote;
                    m.sender = st.id;
                    m.subject = slot.tx;
                    m.vote = d;
                    forced_votes.push_back(m);
                }
            }
            forced_votes = withhold_filter(std::move(forced_votes), adversary_, dishonest_);
            for (const Message& m : deliver(std::move(forced_votes), net_, clock)) {
                if (m.vote == Decision::Accept) ++slot.accepts;
                if (m.vote == Decision::Reject) ++slot.rejects;
            }
            auto final = collective_decision(slot.accepts, slot.rejects, size);
            if (final.has_value())
                finalize(plan, slot, *final, round, true, false, decided);
            else
                finalize(plan, slot, false, round, true, true, decided);  // fail-safe split
        }
    }

    clock.advance(net_.round_time_ms);
}

void ConsensusEngine::settle_epoch(const EpochPlan& plan) {
    ReliabilityParams rel{params_.zeta1, params_.zeta2, params_.eq5_literal_xor};

    for (ValidatorState& v : validators_) {
        v.reliability = update_validator_reliability(v.reliability, v.sent_this_epoch, book_, rel);
        v.sent_this_epoch.clear();
    }

    std::map<UserId, std::vector<std::uint8_t>> per_user;
    for (const TxProcessing& slot : plan.txs) {
        const Transaction& tx = ledger_.tx(slot.tx);
        per_user[tx.submitter].push_back(slot.final_decision == Decision::Accept ? 1 : 0);
    }
    for (const auto& [user, outcomes] : per_user) {
        UserProfile& u = users_[static_cast<std::size_t>(user)];
        u.reliability = update_user_reliability(u.reliability, outcomes, rel);
    }

    for (const TxProcessing& slot : plan.txs) {
        const Transaction& tx = ledger_.tx(slot.tx);
        TrainingExample ex{tx.attributes, slot.final_decision == Decision::Accept ? std::uint8_t{1}
                                                                                  : std::uint8_t{0}};
        for (ValidatorId m : slot.members)
            validators_[static_cast<std::size_t>(m)].retrain_window.push_back(ex);
    }

    book_ = PairVerdictBook{};
}

std::vector<ConsensusOutcome> ConsensusEngine::run_epoch(const std::vector<TxId>& batch, SimClock& clock,
                                                         long epoch_index) {
    std::vector<ConsensusOutcome> decided;
    if (!batch.empty()) {
        EpochPlan plan = assign_communities(batch, epoch_index, clock.now);
        for (int r = 1; r <= plan.max_rounds && plan.any_active(); ++r)
            run_round(plan, clock, r, decided);
        for (const TxProcessing& slot : plan.txs)
            if (slot.active)
                throw InvariantError("consensus: transaction " + std::to_string(slot.tx) +
                                     " undecided after its witness rounds");
        settle_epoch(plan);
    }

    if (params_.cadence >= 1 && epoch_index > 0 && epoch_index % params_.cadence == 0) {
        TrainOptions opt;
        opt.iterations = 300;
        for (ValidatorState& v : validators_) {
            auto next = retrain_epoch_hook(v.retrain_window, epoch_index, params_.cadence, opt);
            if (next.has_value()) v.weights = *next;
            v.retrain_window.clear();
        }
    }

    clock.advance(net_.link_latency_ms);  // settlement tick
    return decided;
}

}  // namespace hybridchain
