// Acceptance suite: one criterion per function, one pass/fail line each.
// Usage: acceptance [N]   (N in 1..10; no argument runs all criteria)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/belief.hpp"
#include "core/classifier.hpp"
#include "core/config.hpp"
#include "core/error.hpp"
#include "core/reliability.hpp"
#include "core/ledger.hpp"
#include "core/runner.hpp"
#include "core/workload.hpp"

using namespace hybridchain;

namespace {

struct Criterion {
    int id;
    const char* name;
    bool (*fn)();
};

bool g_current_ok = true;
std::string g_detail;

void fail_detail(const std::string& why) {
    g_current_ok = false;
    if (!g_detail.empty()) g_detail += "; ";
    g_detail += why;
}

void note(const std::string& what) {
    if (!g_detail.empty()) g_detail += "; ";
    g_detail += what;
}

std::string fmt(double v, int prec = 4) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

RunConfig base_config(int M, int f, double tau, double gamma, double duration, std::uint64_t seed) {
    RunConfig cfg;
    cfg.workload.gamma = gamma;
    cfg.workload.n_users = 25;
    cfg.workload.invalid_fraction = 0.5;
    cfg.workload.duration_minutes = duration;
    cfg.workload.genesis = 100;
    cfg.protocol.M = M;
    cfg.protocol.f = f;
    cfg.adversary.tau = tau;
    cfg.seed = seed;
    return cfg;
}

RunResult checked_run(const RunConfig& cfg) {
    RunResult r = run_simulation(cfg);
    if (r.metrics.latency_bound_violations != 0)
        fail_detail("latency bound violated " + std::to_string(r.metrics.latency_bound_violations) +
                    " times (seed " + std::to_string(cfg.seed) + ")");
    return r;
}

// ---------------------------------------------------------------------------
// 1. Honest-network correctness: M=60, f=4, tau=0, 2000 transactions, 50%
//    invalid; accuracy >= 99.5%, wall runtime < 60 s.
bool criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = base_config(60, 4, 0.0, 600.0, 2000.0 / 600.0, 1);
    RunResult r = checked_run(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    note("accuracy " + fmt(r.metrics.accuracy) + " over " + std::to_string(r.metrics.decided) +
         " decided, runtime " + fmt(secs, 1) + " s");
    if (r.metrics.decided != 2000) fail_detail("expected 2000 decided transactions");
    if (r.metrics.accuracy < 0.995) fail_detail("accuracy below 0.995");
    if (secs >= 60.0) fail_detail("runtime exceeded 60 s");
    return g_current_ok;
}

// ---------------------------------------------------------------------------
// 2. Byzantine stability: M=100, tau in {10,20,30,40}%, f = tau*M, 3000
//    transactions, 5 seeds each; mean accuracy >= 95% per tau and the spread
//    of the means is at most 3 percentage points.
bool criterion2() {
    const double taus[] = {0.10, 0.20, 0.30, 0.40};
    std::vector<double> means;
    for (double tau : taus) {
        const int f = static_cast<int>(std::llround(tau * 100.0));
        double sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            RunConfig cfg = base_config(100, f, tau, 600.0, 5.0, seed);
            RunResult r = checked_run(cfg);
            if (r.metrics.decided != 3000) fail_detail("expected 3000 decided transactions");
            sum += r.metrics.accuracy;
        }
        const double mean = sum / 5.0;
        means.push_back(mean);
        note("tau=" + fmt(tau, 2) + " mean accuracy " + fmt(mean));
        if (mean < 0.95) fail_detail("mean accuracy below 0.95 at tau=" + fmt(tau, 2));
    }
    const double spread = *std::max_element(means.begin(), means.end()) -
                          *std::min_element(means.begin(), means.end());
    note("spread " + fmt(spread * 100.0, 2) + " pp");
    if (spread > 0.03) fail_detail("accuracy spread across tau exceeds 3 percentage points");
    return g_current_ok;
}

// ---------------------------------------------------------------------------
// 3. Throughput flatness under load: M=100, tau=20%, f=20, gamma sweep over
//    {600..3000}/min with a fixed 3-simulated-minute window, 3 seeds;
//    throughput varies <= 10% and max latency grows < 2x across the sweep.
bool criterion3() {
    const double gammas[] = {600.0, 1200.0, 1800.0, 2400.0, 3000.0};
    std::vector<double> thr, maxlat;
    for (double gamma : gammas) {
        double t_sum = 0.0, l_sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            RunConfig cfg = base_config(100, 20, 0.20, gamma, 3.0, seed);
            cfg.workload.max_minutes = 3.0;
            RunResult r = checked_run(cfg);
            if (r.metrics.decided <= 0) fail_detail("no decided transactions in the window");
            t_sum += r.metrics.throughput_per_min;
            l_sum += r.metrics.latency.max;
        }
        thr.push_back(t_sum / 3.0);
        maxlat.push_back(l_sum / 3.0);
    }
    const double thr_min = *std::min_element(thr.begin(), thr.end());
    const double thr_max = *std::max_element(thr.begin(), thr.end());
    const double variation = (thr_max - thr_min) / thr_min;
    const double lat_ratio = maxlat.back() / maxlat.front();
    note("throughput variation " + fmt(variation * 100.0, 2) + "%, max-latency ratio " +
         fmt(lat_ratio, 3));
    if (variation > 0.10) fail_detail("throughput varies more than 10% across the sweep");
    if (lat_ratio >= 2.0) fail_detail("max latency grew 2x or more from lowest to highest gamma");
    return g_current_ok;
}

// ---------------------------------------------------------------------------
// 4. Per-transaction latency bound: latency <= queue wait + |W|*round_time +
//    one settlement tick, asserted from the event log with zero violations.
bool criterion4() {
    long checked = 0;
    auto run_and_audit = [&](RunConfig cfg) {
        RunResult r = checked_run(cfg);
        checked += r.metrics.decided;
        // lower bound as well: no decision can beat a single round
        const EventLog log = parse_events(r.events_jsonl);
        for (const DecisionEvent& d : log.decisions)
            if (d.decide_ms - d.submit_ms < log.meta.round_time_ms - 1e-9) {
                fail_detail("a decision beat the one-round lower bound");
                break;
            }
    };
    run_and_audit(base_config(60, 4, 0.0, 600.0, 2.0, 1));
    run_and_audit(base_config(100, 20, 0.20, 1200.0, 1.0, 2));
    {
        RunConfig cfg = base_config(60, 4, 4.0 / 60.0, 600.0, 1.0, 3);
        cfg.adversary.behavior = AdversaryBehavior::Withhold;
        run_and_audit(cfg);
    }
    note(std::to_string(checked) + " transactions within bounds across honest/invert/withhold runs");
    if (checked <= 0) fail_detail("no transactions checked");
    return g_current_ok;
}

// ---------------------------------------------------------------------------
// 5. Withholding resilience: paired same-seed runs, M=60, f=4, tau*M = 4
//    withholding adversaries versus none; final decisions identical on 100%
//    of transactions.
bool criterion5() {
    RunConfig honest = base_config(60, 4, 0.0, 600.0, 1000.0 / 600.0, 11);
    RunConfig withheld = honest;
    withheld.adversary.tau = 4.0 / 60.0;
    withheld.adversary.behavior = AdversaryBehavior::Withhold;

    RunResult a = checked_run(honest);
    RunResult b = checked_run(withheld);

    const EventLog la = parse_events(a.events_jsonl);
    const EventLog lb = parse_events(b.events_jsonl);
    if (la.decisions.size() != 1000 || lb.decisions.size() != 1000)
        fail_detail("expected 1000 decisions per run");

    std::map<TxId, bool> da, db;
    for (const DecisionEvent& d : la.decisions) da[d.tx] = d.final_valid;
    for (const DecisionEvent& d : lb.decisions) db[d.tx] = d.final_valid;
    if (da.size() != db.size()) fail_detail("paired runs decided different transaction sets");
    long same = 0;
    for (const auto& [tx, v] : da) {
        auto it = db.find(tx);
        if (it != db.end() && it->second == v) ++same;
    }
    note(std::to_string(same) + "/" + std::to_string(da.size()) + " decisions identical");
    if (same != static_cast<long>(da.size())) fail_detail("final decisions diverged");

    // The submission schedule is pairing-invariant: same ids, submitters,
    // validity, and times. (Witness draws may drift when withheld votes move
    // a deciding round and with it the epoch clock.)
    std::istringstream wa(a.workload_jsonl), wb(b.workload_jsonl);
    std::string la_line, lb_line;
    bool schedule_same = true;
    while (std::getline(wa, la_line) && std::getline(wb, lb_line)) {
        const Transaction ta = Ledger::from_record(la_line);
        const Transaction tb = Ledger::from_record(lb_line);
        schedule_same = schedule_same && ta.id == tb.id && ta.submitter == tb.submitter &&
                        ta.truth_valid == tb.truth_valid && ta.submit_time == tb.submit_time;
    }
    if (!schedule_same) fail_detail("paired submission schedules diverged");
    return g_current_ok;
}

// ---------------------------------------------------------------------------
// 6. Replay resistance: 100 replayed confirmed transactions injected into an
//    honest M=60 run are rejected, all of them.
bool criterion6() {
    RunConfig cfg = base_config(60, 4, 0.0, 600.0, 2.0, 3);
    cfg.adversary.behavior = AdversaryBehavior::ReplayInjector;
    cfg.adversary.replay_count = 100;
    RunResult r = checked_run(cfg);

    const EventLog log = parse_events(r.events_jsonl);
    long injected = static_cast<long>(log.attacks.size());
    long decided = 0, rejected = 0;
    for (const DecisionEvent& d : log.decisions) {
        if (!d.replay) continue;
        ++decided;
        if (!d.final_valid) ++rejected;
    }
    note(std::to_string(injected) + " injected, " + std::to_string(rejected) + "/" +
         std::to_string(decided) + " rejected");
    if (injected != 100) fail_detail("expected 100 replay injections");
    if (decided != 100) fail_detail("expected all 100 replays decided");
    if (rejected != decided) fail_detail("a replayed transaction was confirmed");
    return g_current_ok;
}

// ---------------------------------------------------------------------------
// 7. Classifier sanity: bootstrap training on 10000 examples, heldout 5000,
//    accuracy >= 90%; analytic gradient vs central differences over 100
//    random points, max relative error < 1e-4.
bool criterion7() {
    Rng rng = make_rng(1, stream::bootstrap);
    std::vector<TrainingExample> training, heldout;
    for (int i = 0; i < 10000; ++i)
        training.push_back({sample_attributes(i % 2 == 0, rng),
                            static_cast<std::uint8_t>(i % 2 == 0 ? 1 : 0)});
    for (int i = 0; i < 5000; ++i)
        heldout.push_back({sample_attributes(i % 2 == 0, rng),
                           static_cast<std::uint8_t>(i % 2 == 0 ? 1 : 0)});

    auto fitted = train(training, TrainOptions{});
    if (!fitted.has_value()) {
        fail_detail("training declined a two-class set");
        return false;
    }
    long correct = 0;
    for (const TrainingExample& e : heldout)
        if ((score(e.attributes, *fitted) >= 0.5) == (e.label != 0)) ++correct;
    const double acc = static_cast<double>(correct) / static_cast<double>(heldout.size());
    note("heldout accuracy " + fmt(acc));
    if (acc < 0.90) fail_detail("heldout accuracy below 0.90");

    const double ridge = TrainOptions{}.ridge;
    const double h = 1e-6;
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    double worst = 0.0;
    for (int pt = 0; pt < 100; ++pt) {
        WeightVector y = *fitted;
        for (double& w : y.weights) w += jitter(rng);
        y.bias += jitter(rng);
        const auto g = gradient(training, y, ridge);
        for (int i = 0; i < 6; ++i) {
            WeightVector lo = y, hi = y;
            if (i < 5) {
                lo.weights[static_cast<std::size_t>(i)] -= h;
                hi.weights[static_cast<std::size_t>(i)] += h;
            } else {
                lo.bias -= h;
                hi.bias += h;
            }
            const double numeric = (loss(training, hi, ridge) - loss(training, lo, ridge)) / (2.0 * h);
            const double denom =
                std::max({std::abs(numeric), std::abs(g[static_cast<std::size_t>(i)]), 1e-8});
            worst = std::max(worst, std::abs(numeric - g[static_cast<std::size_t>(i)]) / denom);
        }
    }
    note("gradient max rel error " + fmt(worst, 8));
    if (!(worst < 1e-4)) fail_detail("gradient check exceeded 1e-4");
    return g_current_ok;
}

// ---------------------------------------------------------------------------
// 8. Belief-engine oracle equivalence: Bayesian update vs a direct-product
//    oracle (1e-12, 1000 cases), trimmed-min vs a sort oracle (exact, 1e4
//    cases), beta(w) vs direct evaluation (exact, w = 1..20).
bool criterion8() {
    std::mt19937_64 rng(20240918);
    std::uniform_real_distribution<double> upsi(0.001, 0.999);
    std::uniform_real_distribution<double> urho(0.05, 0.95);
    std::uniform_real_distribution<double> up(0.0, 1.0);
    std::uniform_int_distribution<int> usize(1, 25);
    std::uniform_int_distribution<int> uverdict(0, 1);
    std::uniform_int_distribution<int> uw(1, 12);

    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        PerceptionBatch batch;
        const int n = usize(rng);
        for (int k = 0; k < n; ++k)
            batch.entries.push_back({static_cast<std::uint8_t>(uverdict(rng)), urho(rng)});
        const double beta_val = beta_conflict_prior(uw(rng));
        const double psi_prev = upsi(rng);

        double l_valid = 1.0, l_invalid = 1.0;
        for (const PerceptionEvidence& e : batch.entries) {
            const double rho = e.source_reliability;
            l_valid *= e.verdict ? rho : 1.0 - rho;
            l_invalid *= e.verdict ? (1.0 - beta_val) * rho + beta_val * (1.0 - rho)
                                   : beta_val * rho + (1.0 - beta_val) * (1.0 - rho);
        }
        const double direct = l_valid * psi_prev / (l_valid * psi_prev + l_invalid * (1.0 - psi_prev));
        worst = std::max(worst, std::abs(update_intermediate(psi_prev, batch, beta_val) - direct));
    }
    note("bayes max |diff| " + fmt(worst, 15));
    if (!(worst <= 1e-12)) fail_detail("log-space update drifted past 1e-12 from the oracle");

    long mismatches = 0;
    std::uniform_int_distribution<int> uf(0, 3);
    for (int i = 0; i < 10000; ++i) {
        TrimSet t;
        t.f = uf(rng);
        std::uniform_int_distribution<int> un(2 * t.f + 1, 2 * t.f + 9);
        const int n = un(rng);
        for (int k = 0; k < n; ++k) t.received.push_back({k, up(rng)});
        const double own = up(rng);
        const double psi = up(rng);

        std::vector<ReceivedBelief> sorted = t.received;
        std::sort(sorted.begin(), sorted.end(), [](const ReceivedBelief& a, const ReceivedBelief& b) {
            return a.p_prev != b.p_prev ? a.p_prev < b.p_prev : a.source < b.source;
        });
        double expect = std::min(own, psi);
        for (std::size_t k = static_cast<std::size_t>(t.f); k + static_cast<std::size_t>(t.f) < sorted.size(); ++k)
            expect = std::min(expect, sorted[k].p_prev);
        if (update_actual(own, t, psi) != expect) ++mismatches;
    }
    note("trimmed-min mismatches " + std::to_string(mismatches) + "/10000");
    if (mismatches != 0) fail_detail("trimmed-min disagreed with the sort oracle");

    bool beta_exact = true;
    for (int w = 1; w <= 20; ++w) {
        const double direct =
            static_cast<double>(1ULL << (w - 1)) / static_cast<double>((1ULL << w) - 1ULL);
        beta_exact = beta_exact && beta_conflict_prior(w) == direct;
    }
    note(std::string("beta(1..20) ") + (beta_exact ? "exact" : "MISMATCH"));
    if (!beta_exact) fail_detail("beta deviates from direct evaluation");
    return g_current_ok;
}

// ---------------------------------------------------------------------------
// 9. Reliability convergence: |rho(n) - 1| = zeta1^n |rho(0) - 1| to within
//    1e-12 over 200 synthetic epochs for an always-agreeing validator, plus
//    the user-side analogue with zeta2.
bool criterion9() {
    ReliabilityParams params;
    PairVerdictBook book;
    for (ValidatorId v = 0; v < 3; ++v) {
        Perception p;
        p.source_validator = v;
        p.subject = 1;
        p.witness = 0;
        p.verdict = 1;
        book.record(p);
    }
    const std::vector<SentPerception> agreeing{{1, 0, 1}};

    double worst_v = 0.0;
    const double rho0 = 0.41;
    double rho = rho0;
    for (int n = 1; n <= 200; ++n) {
        rho = update_validator_reliability(rho, agreeing, book, params);
        worst_v = std::max(worst_v,
                           std::abs((1.0 - rho) - std::pow(params.zeta1, n) * (1.0 - rho0)));
    }
    note("validator max |gap error| " + fmt(worst_v, 15));
    if (!(worst_v <= 1e-12)) fail_detail("validator convergence drifted past 1e-12");

    double worst_u = 0.0;
    const double rho0_u = 0.73;
    double rho_u = rho0_u;
    for (int n = 1; n <= 200; ++n) {
        rho_u = update_user_reliability(rho_u, {1}, params);
        worst_u = std::max(worst_u,
                           std::abs((1.0 - rho_u) - std::pow(params.zeta2, n) * (1.0 - rho0_u)));
    }
    note("user max |gap error| " + fmt(worst_u, 15));
    if (!(worst_u <= 1e-12)) fail_detail("user convergence drifted past 1e-12");
    return g_current_ok;
}

// ---------------------------------------------------------------------------
// 10. Determinism: any config + seed run twice yields byte-identical event
//     logs and metrics CSVs.
bool criterion10() {
    RunConfig cfg = base_config(60, 4, 0.2, 600.0, 1.0, 21);
    cfg.protocol.f = 12;  // tau*M = 12 dishonest, within the bound
    RunResult a = checked_run(cfg);
    RunResult b = checked_run(cfg);
    const bool events_same = a.events_jsonl == b.events_jsonl;
    const bool metrics_same = a.metrics_csv_text == b.metrics_csv_text;
    const bool workload_same = a.workload_jsonl == b.workload_jsonl;
    note(std::string("events ") + (events_same ? "identical" : "DIFFER") + ", metrics " +
         (metrics_same ? "identical" : "DIFFER") + ", workload " +
         (workload_same ? "identical" : "DIFFER"));
    if (!events_same || !metrics_same || !workload_same) fail_detail("same-seed runs diverged");

    RunConfig other = cfg;
    other.seed = 22;
    if (checked_run(other).events_jsonl == a.events_jsonl)
        fail_detail("different seeds produced identical logs");
    return g_current_ok;
}

const Criterion kCriteria[] = {
    {1, "honest-network correctness", criterion1},
    {2, "byzantine stability", criterion2},
    {3, "throughput flatness under load", criterion3},
    {4, "per-transaction latency bound", criterion4},
    {5, "withholding resilience", criterion5},
    {6, "replay resistance", criterion6},
    {7, "classifier sanity", criterion7},
    {8, "belief-engine oracle equivalence", criterion8},
    {9, "reliability convergence", criterion9},
    {10, "determinism", criterion10},
};

bool run_criterion(const Criterion& c) {
    g_current_ok = true;
    g_detail.clear();
    bool ok = false;
    try {
        ok = c.fn();
    } catch (const std::exception& e) {
        fail_detail(std::string("exception: ") + e.what());
        ok = false;
    }
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                g_detail.c_str());
    std::fflush(stdout);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > 10) {
            std::fprintf(stderr, "usage: %s [1..10]\n", argv[0]);
            return 2;
        }
    }
    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        if (!run_criterion(c)) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
