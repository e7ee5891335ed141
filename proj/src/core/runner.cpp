#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "error.hpp"

namespace hybridchain {

namespace {

std::vector<TrainingExample> labeled_examples(int count, Rng& rng) {
    std::vector<TrainingExample> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const bool valid = i % 2 == 0;  // exactly half valid
        out.push_back({sample_attributes(valid, rng), valid ? std::uint8_t{1} : std::uint8_t{0}});
    }
    return out;
}

double heldout_accuracy(const WeightVector& y, const std::vector<TrainingExample>& heldout) {
    long correct = 0;
    for (const TrainingExample& e : heldout) {
        const bool predicted = score(e.attributes, y) >= 0.5;
        if (predicted == (e.label != 0)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(heldout.size());
}

double gradient_check(const std::vector<TrainingExample>& examples, const WeightVector& at,
                      double ridge) {
    const auto analytic = gradient(examples, at, ridge);
    const double h = 1e-6;
    double max_rel = 0.0;
    for (int i = 0; i < 6; ++i) {
        WeightVector lo = at;
        WeightVector hi = at;
        if (i < 5) {
            lo.weights[static_cast<std::size_t>(i)] -= h;
            hi.weights[static_cast<std::size_t>(i)] += h;
        } else {
            lo.bias -= h;
            hi.bias += h;
        }
        const double numeric = (loss(examples, hi, ridge) - loss(examples, lo, ridge)) / (2.0 * h);
        const double denom = std::max({std::abs(numeric), std::abs(analytic[static_cast<std::size_t>(i)]), 1e-8});
        max_rel = std::max(max_rel, std::abs(numeric - analytic[static_cast<std::size_t>(i)]) / denom);
    }
    return max_rel;
}

}  // namespace

BootstrapResult bootstrap_classifier(const RunConfig& cfg) {
    BootstrapResult result;
    Rng rng = make_rng(cfg.seed, stream::bootstrap);

    if (!cfg.bootstrap.weights_file.empty()) {
        std::ifstream in(cfg.bootstrap.weights_file);
        if (!in) throw ConfigError("bootstrap: cannot open weights file " + cfg.bootstrap.weights_file);
        std::string line;
        std::getline(in, line);
        result.weights = WeightVector::from_record(line);
        auto heldout = labeled_examples(cfg.bootstrap.heldout_size, rng);
        result.heldout_accuracy = heldout_accuracy(result.weights, heldout);
        return result;
    }

    auto training = labeled_examples(cfg.bootstrap.training_size, rng);
    auto heldout = labeled_examples(cfg.bootstrap.heldout_size, rng);
    auto fitted = train(training, TrainOptions{});
    if (!fitted.has_value())
        throw ConfigError("bootstrap: training set is degenerate (one class only)");
    result.weights = *fitted;
    result.heldout_accuracy = heldout_accuracy(result.weights, heldout);

    WeightVector probe = result.weights;
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    for (double& w : probe.weights) w += jitter(rng);
    probe.bias += jitter(rng);
    result.gradient_check_max_rel_error = gradient_check(training, probe, TrainOptions{}.ridge);
    return result;
}

RunResult run_simulation(const RunConfig& cfg) {
    RunResult result;
    result.warning = validate_config(cfg);

    const BootstrapResult boot = bootstrap_classifier(cfg);
    result.bootstrap_heldout_accuracy = boot.heldout_accuracy;

    // Immutable-by-stream setup: genesis, users, arrival schedule.
    Ledger ledger;
    Rng genesis_rng = make_rng(cfg.seed, stream::genesis);
    for (Transaction& g : make_genesis(cfg.workload, genesis_rng)) ledger.append(std::move(g));

    // Genesis state is replicated like a genesis block: every validator
    // stores it and can serve perceptions against it.
    const int M = cfg.protocol.M;
    std::vector<ValidatorId> all_validators(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) all_validators[static_cast<std::size_t>(i)] = i;
    for (TxId g = 0; g < static_cast<TxId>(cfg.workload.genesis); ++g)
        ledger.confirm(g, all_validators);

    Rng user_rng = make_rng(cfg.seed, stream::users);
    std::vector<UserProfile> users = init_users(cfg.workload, user_rng);

    std::vector<ValidatorState> validators(static_cast<std::size_t>(M));
    std::uniform_real_distribution<double> rel(0.3, 0.8);
    for (int i = 0; i < M; ++i) {
        validators[static_cast<std::size_t>(i)].index = i;
        validators[static_cast<std::size_t>(i)].reliability = rel(user_rng);
        validators[static_cast<std::size_t>(i)].weights = boot.weights;
    }
    Rng adv_rng = make_rng(cfg.seed, stream::adversary);
    const int dishonest_count =
        cfg.adversary.behavior == AdversaryBehavior::ReplayInjector
            ? 0
            : static_cast<int>(std::llround(cfg.adversary.tau * M));
    {
        std::vector<ValidatorId> shuffled = all_validators;
        std::shuffle(shuffled.begin(), shuffled.end(), adv_rng);
        for (int i = 0; i < dishonest_count && i < M; ++i)
            validators[static_cast<std::size_t>(shuffled[static_cast<std::size_t>(i)])].honest = false;
    }

    Rng schedule_rng = make_rng(cfg.seed, stream::schedule);
    const std::vector<Arrival> schedule = arrival_schedule(cfg.workload, users, schedule_rng);

    ConsensusEngine engine(cfg.protocol, cfg.net, cfg.adversary, ledger, validators, users, cfg.seed);
    std::vector<BeliefTraceRow> belief_rows;
    if (cfg.trace.beliefs) engine.set_belief_trace(&belief_rows);
    std::ostringstream reliability_trace;

    EventLog log;
    log.meta.M = M;
    log.meta.f = cfg.protocol.f;
    log.meta.lambda = cfg.protocol.lambda();
    log.meta.round_time_ms = cfg.net.round_time_ms;
    log.meta.link_latency_ms = cfg.net.link_latency_ms;
    log.meta.seed = cfg.seed;
    log.meta.cutoff_ms = cfg.workload.max_minutes * 60000.0;
    log.meta.tau = cfg.adversary.tau;
    log.meta.behavior = cfg.adversary.behavior == AdversaryBehavior::Invert     ? "invert"
                        : cfg.adversary.behavior == AdversaryBehavior::Withhold ? "withhold"
                                                                                : "replay-injector";

    SimClock clock;
    std::deque<TxId> queue;
    std::size_t next_arrival = 0;
    long epoch_index = 0;
    int replays_injected = 0;
    const double cutoff_ms = log.meta.cutoff_ms;
    const int lambda = cfg.protocol.lambda();

    auto materialize = [&] {
        while (next_arrival < schedule.size() && schedule[next_arrival].submit_time <= clock.now) {
            const Arrival& a = schedule[next_arrival];
            Rng tx_rng = make_rng(cfg.seed, stream::transaction, next_arrival);
            UserProfile& user = users[static_cast<std::size_t>(a.user)];
            Transaction tx = generate_transaction(a.valid, user, ledger.confirmed_ids(), ledger, users,
                                                  tx_rng, epoch_index);
            tx.id = ledger.next_id();
            tx.submit_time = a.submit_time;
            queue.push_back(tx.id);
            ledger.append(std::move(tx));
            ++next_arrival;
        }
    };

    auto replayable = [&]() -> std::vector<TxId> {
        std::vector<TxId> out;
        for (TxId id : ledger.confirmed_ids())
            if (!ledger.tx(id).genesis) out.push_back(id);
        return out;
    };

    while (true) {
        materialize();
        std::vector<TxId> replay_pool;
        bool can_replay = cfg.adversary.behavior == AdversaryBehavior::ReplayInjector &&
                          replays_injected < cfg.adversary.replay_count;
        if (can_replay) {
            replay_pool = replayable();
            can_replay = !replay_pool.empty();
        }
        if (queue.empty() && !can_replay) {
            if (next_arrival >= schedule.size()) break;
            clock.now = std::max(clock.now, schedule[next_arrival].submit_time);
            continue;
        }
        if (cutoff_ms > 0.0 && clock.now >= cutoff_ms) break;

        if (can_replay) {
            std::uniform_int_distribution<std::size_t> pick(0, replay_pool.size() - 1);
            const TxId target = replay_pool[pick(adv_rng)];
            Transaction clone = replay_inject(ledger, target, clock.now);
            const TxId clone_id = clone.id;
            queue.push_back(clone_id);
            ledger.append(std::move(clone));
            log.attacks.push_back({"replay", target, clone_id, clock.now});
            ++replays_injected;
        }

        ++epoch_index;
        std::vector<TxId> batch;
        while (!queue.empty() && static_cast<int>(batch.size()) < lambda) {
            batch.push_back(queue.front());
            queue.pop_front();
        }
        for (const ConsensusOutcome& o : engine.run_epoch(batch, clock, epoch_index)) {
            DecisionEvent d;
            d.tx = o.tx;
            d.epoch = o.epoch_index;
            d.round = o.deciding_round;
            d.accepts = o.accepts;
            d.rejects = o.rejects;
            d.forced = o.decided_by_force;
            d.split_fallback = o.split_fallback;
            d.final_valid = o.final_valid;
            d.truth_valid = o.truth_valid;
            d.replay = o.replay;
            d.witness_count = o.witness_count;
            d.submit_ms = o.submit_time;
            d.epoch_start_ms = o.epoch_start;
            d.decide_ms = o.decide_time;
            log.decisions.push_back(d);
        }
        if (cfg.trace.reliability) {
            nlohmann::json row;
            row["epoch"] = epoch_index;
            nlohmann::json vrho = nlohmann::json::array();
            for (const ValidatorState& v : validators) vrho.push_back(v.reliability);
            nlohmann::json urho = nlohmann::json::array();
            for (const UserProfile& u : users) urho.push_back(u.reliability);
            row["validators"] = std::move(vrho);
            row["users"] = std::move(urho);
            reliability_trace << row.dump() << '\n';
        }
    }

    log.end.clock_ms = clock.now;
    log.end.decided = static_cast<long>(log.decisions.size());
    log.end.backlog = static_cast<long>(queue.size()) +
                      static_cast<long>(schedule.size() - next_arrival);

    result.events_jsonl = to_jsonl(log);
    result.metrics = compute_metrics(parse_events(result.events_jsonl));
    result.metrics_csv_text = metrics_csv(result.metrics);
    result.metrics_json_text = metrics_json(result.metrics);
    std::ostringstream wl;
    ledger.dump(wl);
    result.workload_jsonl = wl.str();
    result.reliability_jsonl = reliability_trace.str();
    if (cfg.trace.beliefs) {
        std::ostringstream bt;
        for (const BeliefTraceRow& row : belief_rows) {
            nlohmann::json j{{"tx", row.tx},        {"round", row.round}, {"validator", row.validator},
                             {"psi", row.psi},      {"p", row.p},
                             {"decision", row.decision == Decision::Accept   ? "accept"
                                          : row.decision == Decision::Reject ? "reject"
                                                                             : "undecided"}};
            bt << j.dump() << '\n';
        }
        result.beliefs_jsonl = bt.str();
    }
    return result;
}

namespace {

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
    mean = 0.0;
    sd = 0.0;
    if (xs.empty()) return;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

SweepRow sweep_point(const SweepSpec& spec, double value) {
    SweepRow row;
    row.value = value;
    row.seed_count = spec.repeats;
    std::vector<double> throughputs, accuracies, backlogs, pooled;
    for (int rep = 0; rep < spec.repeats; ++rep) {
        RunConfig cfg = apply_axis(spec.base, spec.axis, value);
        cfg.seed = spec.base.seed + static_cast<std::uint64_t>(rep);
        try {
            RunResult r = run_simulation(cfg);
            throughputs.push_back(r.metrics.throughput_per_min);
            accuracies.push_back(r.metrics.accuracy);
            backlogs.push_back(static_cast<double>(r.metrics.backlog));
            pooled.insert(pooled.end(), r.metrics.latency_samples.begin(),
                          r.metrics.latency_samples.end());
        } catch (const InvariantError& e) {
            throw InvariantError("sweep aborted at " + spec.axis + "=" + fmt_double(value) + " seed=" +
                                 std::to_string(cfg.seed) + ": " + e.what());
        }
    }
    mean_std(throughputs, row.throughput_mean, row.throughput_std);
    mean_std(accuracies, row.accuracy_mean, row.accuracy_std);
    double bl_sd = 0.0;
    mean_std(backlogs, row.backlog_mean, bl_sd);
    if (!pooled.empty()) row.latency = latency_cdf(pooled);
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    // Surface per-point validation warnings (e.g. tau*M > f stress points)
    // before launching the workers.
    for (double value : spec.points) {
        const std::string warning = validate_config(apply_axis(spec.base, spec.axis, value));
        if (!warning.empty())
            std::cerr << "sweep " << spec.axis << "=" << fmt_double(value) << ": " << warning << "\n";
    }

    // Points are independent runs; farm them out and join in order.
    std::vector<std::future<SweepRow>> futures;
    futures.reserve(spec.points.size());
    for (double value : spec.points)
        futures.push_back(std::async(std::launch::async, [&spec, value] { return sweep_point(spec, value); }));
    std::vector<SweepRow> rows;
    rows.reserve(spec.points.size());
    for (auto& f : futures) rows.push_back(f.get());
    return rows;
}

std::string sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "axis,value,seed_count,throughput_mean,throughput_std,accuracy_mean,accuracy_std,p50_ms,"
          "p90_ms,p99_ms,max_ms,backlog\n";
    for (const SweepRow& r : rows) {
        os << axis << ',' << fmt_double(r.value) << ',' << r.seed_count << ','
           << fmt_double(r.throughput_mean) << ',' << fmt_double(r.throughput_std) << ','
           << fmt_double(r.accuracy_mean) << ',' << fmt_double(r.accuracy_std) << ','
           << fmt_double(r.latency.p50) << ',' << fmt_double(r.latency.p90) << ','
           << fmt_double(r.latency.p99) << ',' << fmt_double(r.latency.max) << ','
           << fmt_double(r.backlog_mean) << '\n';
    }
    return os.str();
}

}  // namespace hybridchain
