#pragma once

#include <optional>
#include <vector>

#include "ledger.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace hybridchain {

struct WorkloadConfig {
    double gamma = 600.0;           // transactions per simulated minute
    int n_users = 100;
    double invalid_fraction = 0.5;
    double duration_minutes = 1.0;  // arrival window
    int genesis = 100;              // pre-confirmed ledger entries seeding the pool
    double max_minutes = 0.0;       // simulation cutoff; 0 = run to exhaustion
};

struct UserProfile {
    UserId user_id = 0;
    double reliability = 0.5;                 // rho^u, in [0,1]
    std::optional<long> last_submit_epoch;    // none until the first submission
    bool misbehaving = false;                 // submits the invalid traffic
};

struct Arrival {
    SimTimeMs submit_time = 0.0;
    bool valid = true;
    UserId user = 0;
};

// Draws a1..a5 from the valid/invalid generation distributions, each
// rejection-sampled into its range; a3 floored to an integer, a4 set to the
// inverse of the drawn witness-set size.
AttributeVector sample_attributes(bool valid, Rng& rng);

// Deterministic-rate arrivals: exactly gamma per minute, evenly spaced.
// Validity is Bernoulli(1 - invalid_fraction); valid arrivals come from the
// honest user pool, invalid ones from the misbehaving pool.
std::vector<Arrival> arrival_schedule(const WorkloadConfig& cfg, const std::vector<UserProfile>& users,
                                      Rng& rng);

// Reliabilities uniform in [0.3, 0.8]; round(invalid_fraction * N) users are
// designated misbehaving (they originate the invalid traffic).
std::vector<UserProfile> init_users(const WorkloadConfig& cfg, Rng& rng);

// Pre-confirmed witness pool: ids 0..genesis-1, no witnesses, valid.
std::vector<Transaction> make_genesis(const WorkloadConfig& cfg, Rng& rng);

// Builds one transaction: witness count from a4 (shrunk to the pool if
// needed), witnesses drawn uniformly without replacement from the confirmed
// pool, a uniformly random non-empty conflict subset when invalid, and a5
// recomputed as the value-weighted average of the witness owners' current
// reliabilities. id and submit_time are left for the caller.
Transaction generate_transaction(bool valid, UserProfile& user, const std::vector<TxId>& confirmed_pool,
                                 const Ledger& ledger, const std::vector<UserProfile>& users, Rng& rng,
                                 long epoch_index);

}  // namespace hybridchain
