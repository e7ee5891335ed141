#include "workload.hpp"

#include <algorithm>
#include <cmath>

namespace hybridchain {

namespace {

constexpr double kA3Cap = 50.0;

double truncated(Rng& rng, auto make_dist, double lo_excl, double hi_incl) {
    auto dist = make_dist();
    for (int i = 0; i < 100000; ++i) {
        double x = dist(rng);
        if (x > lo_excl && x <= hi_incl) return x;
    }
    throw InvariantError("workload: truncated sampler failed to accept");
}

int truncated_poisson_ge1(Rng& rng, double mean) {
    std::poisson_distribution<int> dist(mean);
    for (int i = 0; i < 100000; ++i) {
        int x = dist(rng);
        if (x >= 1) return x;
    }
    throw InvariantError("workload: truncated poisson failed to accept");
}

}  // namespace

AttributeVector sample_attributes(bool valid, Rng& rng) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    AttributeVector a;
    if (valid) {
        a.a1 = truncated(rng, [] { return std::gamma_distribution<double>(3.0, 1.0); }, 0.0, 10.0);
        a.a2 = truncated(rng, [] { return std::normal_distribution<double>(0.5, 0.15); }, 0.0, inf);
        a.a3 = std::floor(truncated(rng, [] { return std::exponential_distribution<double>(1.0 / 10.0); },
                                    0.0, kA3Cap));
        a.a4 = 1.0 / truncated_poisson_ge1(rng, 1.5);
        a.a5 = truncated(rng, [] { return std::normal_distribution<double>(0.7, 0.1); }, 0.0, 1.0);
    } else {
        a.a1 = truncated(rng, [] { return std::gamma_distribution<double>(17.5, 0.5); }, 0.0, 10.0);
        a.a2 = truncated(rng, [] { return std::normal_distribution<double>(0.25, 0.075); }, 0.0, inf);
        a.a3 = std::floor(truncated(rng, [] { return std::exponential_distribution<double>(1.0 / 5.0); },
                                    0.0, kA3Cap));
        a.a4 = 1.0 / truncated_poisson_ge1(rng, 2.5);
        a.a5 = truncated(rng, [] { return std::normal_distribution<double>(0.4, 0.1); }, 0.0, 1.0);
    }
    return a;
}

std::vector<UserProfile> init_users(const WorkloadConfig& cfg, Rng& rng) {
    std::vector<UserProfile> users(static_cast<std::size_t>(cfg.n_users));
    std::uniform_real_distribution<double> rel(0.3, 0.8);
    for (int i = 0; i < cfg.n_users; ++i) {
        users[static_cast<std::size_t>(i)].user_id = i;
        users[static_cast<std::size_t>(i)].reliability = rel(rng);
    }
    int bad = static_cast<int>(std::llround(cfg.invalid_fraction * cfg.n_users));
    bad = std::clamp(bad, 0, cfg.n_users);
    std::vector<int> order(static_cast<std::size_t>(cfg.n_users));
    for (int i = 0; i < cfg.n_users; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < bad; ++i) users[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])].misbehaving = true;
    return users;
}

std::vector<Arrival> arrival_schedule(const WorkloadConfig& cfg, const std::vector<UserProfile>& users,
                                      Rng& rng) {
    const long total = std::llround(cfg.gamma * cfg.duration_minutes);
    const double spacing_ms = 60000.0 / cfg.gamma;

    std::vector<UserId> honest_pool;
    std::vector<UserId> bad_pool;
    for (const UserProfile& u : users) (u.misbehaving ? bad_pool : honest_pool).push_back(u.user_id);
    std::vector<UserId> all_pool(users.size());
    for (std::size_t i = 0; i < users.size(); ++i) all_pool[i] = users[i].user_id;

    std::bernoulli_distribution is_valid(1.0 - cfg.invalid_fraction);
    std::vector<Arrival> out;
    out.reserve(static_cast<std::size_t>(total));
    for (long i = 0; i < total; ++i) {
        Arrival a;
        a.submit_time = static_cast<double>(i) * spacing_ms;
        a.valid = is_valid(rng);
        const std::vector<UserId>& pool = a.valid ? (honest_pool.empty() ? all_pool : honest_pool)
                                                  : (bad_pool.empty() ? all_pool : bad_pool);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        a.user = pool[pick(rng)];
        out.push_back(a);
    }
    return out;
}

std::vector<Transaction> make_genesis(const WorkloadConfig& cfg, Rng& rng) {
    std::vector<Transaction> out;
    out.reserve(static_cast<std::size_t>(cfg.genesis));
    std::uniform_int_distribution<UserId> owner(0, cfg.n_users - 1);
    for (int i = 0; i < cfg.genesis; ++i) {
        Transaction tx;
        tx.id = i;
        tx.genesis = true;
        tx.submitter = owner(rng);
        tx.attributes = sample_attributes(true, rng);
        tx.value = 1.0 / tx.attributes.a1;
        tx.fee = tx.attributes.a2;
        tx.truth_valid = true;
        tx.submit_time = 0.0;
        out.push_back(std::move(tx));
    }
    return out;
}

Transaction generate_transaction(bool valid, UserProfile& user, const std::vector<TxId>& confirmed_pool,
                                 const Ledger& ledger, const std::vector<UserProfile>& users, Rng& rng,
                                 long epoch_index) {
    if (confirmed_pool.empty()) throw InvariantError("workload: empty confirmed pool");

    Transaction tx;
    tx.submitter = user.user_id;
    tx.truth_valid = valid;
    tx.attributes = sample_attributes(valid, rng);
    if (!user.last_submit_epoch.has_value()) tx.attributes.a3 = kA3Cap;  // no prior submission
    user.last_submit_epoch = epoch_index;

    std::size_t w = static_cast<std::size_t>(
        std::max<long>(1, std::llround(1.0 / tx.attributes.a4)));
    w = std::min(w, confirmed_pool.size());
    tx.attributes.a4 = 1.0 / static_cast<double>(w);

    // Uniform draw without replacement from the pool.
    std::vector<std::size_t> chosen;
    chosen.reserve(w);
    std::uniform_int_distribution<std::size_t> pick(0, confirmed_pool.size() - 1);
    while (chosen.size() < w) {
        std::size_t idx = pick(rng);
        if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
    }
    std::sort(chosen.begin(), chosen.end());
    tx.witness_ids.reserve(w);
    for (std::size_t idx : chosen) tx.witness_ids.push_back(confirmed_pool[idx]);

    tx.conflict_bits.assign(w, 0);
    if (!valid) {
        if (w > 62) throw InvariantError("workload: witness set too large for subset draw");
        std::uniform_int_distribution<std::uint64_t> mask(1, (std::uint64_t{1} << w) - 1);
        std::uint64_t m = mask(rng);
        for (std::size_t i = 0; i < w; ++i) tx.conflict_bits[i] = (m >> i) & 1u;
    }

    // a5: value-weighted average reliability of the witness owners.
    double total_value = 0.0;
    double weighted = 0.0;
    for (TxId wid : tx.witness_ids) {
        const Transaction& wt = ledger.tx(wid);
        total_value += wt.value;
        weighted += wt.value * users[static_cast<std::size_t>(wt.submitter)].reliability;
    }
    if (total_value > 0.0) tx.attributes.a5 = std::clamp(weighted / total_value, 1e-12, 1.0);

    tx.value = 1.0 / tx.attributes.a1;
    tx.fee = tx.attributes.a2;
    return tx;
}

}  // namespace hybridchain
