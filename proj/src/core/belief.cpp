#include "belief.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace hybridchain {

double beta_conflict_prior(int witness_size) {
    if (witness_size < 1) throw LookupError("belief: witness size must be >= 1");
    return std::ldexp(1.0, witness_size - 1) / (std::ldexp(1.0, witness_size) - 1.0);
}

double update_intermediate(double psi_prev, const PerceptionBatch& batch, double beta_val) {
    if (batch.entries.empty()) return psi_prev;
    if (psi_prev <= 0.0) return 0.0;  // absorbing endpoints
    if (psi_prev >= 1.0) return 1.0;

    double log_valid = 0.0;
    double log_invalid = 0.0;
    bool zero_valid = false;
    bool zero_invalid = false;
    for (const PerceptionEvidence& e : batch.entries) {
        const double rho = e.source_reliability;
        const double fv = e.verdict ? rho : 1.0 - rho;
        const double fi = e.verdict ? (1.0 - beta_val) * rho + beta_val * (1.0 - rho)
                                    : beta_val * rho + (1.0 - beta_val) * (1.0 - rho);
        if (fv <= 0.0) zero_valid = true; else log_valid += std::log(fv);
        if (fi <= 0.0) zero_invalid = true; else log_invalid += std::log(fi);
    }
    if (zero_valid && zero_invalid) return psi_prev;  // contradictory certain evidence
    if (zero_valid) return 0.0;
    if (zero_invalid) return 1.0;

    const double log_odds = std::log(psi_prev) - std::log1p(-psi_prev) + (log_valid - log_invalid);
    if (log_odds >= 0.0) return 1.0 / (1.0 + std::exp(-log_odds));
    const double e = std::exp(log_odds);
    return e / (1.0 + e);
}

double update_actual(double own_p_prev, const TrimSet& trims, double psi_now) {
    const int f = trims.f;
    if (f < 0) throw LookupError("belief: negative trim parameter");
    if (static_cast<int>(trims.received.size()) < 2 * f + 1)
        throw InvariantError("belief: fewer than 2f+1 received beliefs");

    std::vector<ReceivedBelief> sorted = trims.received;
    std::sort(sorted.begin(), sorted.end(), [](const ReceivedBelief& a, const ReceivedBelief& b) {
        if (a.p_prev != b.p_prev) return a.p_prev < b.p_prev;
        return a.source < b.source;
    });

    double m = psi_now;
    for (std::size_t i = static_cast<std::size_t>(f); i + static_cast<std::size_t>(f) < sorted.size(); ++i)
        m = std::min(m, sorted[i].p_prev);
    return std::min(m, own_p_prev);
}

void apply_hard_zero(BeliefState& state, std::optional<std::uint8_t> own_verdict) {
    if (own_verdict.has_value() && *own_verdict == 0) {
        state.p = 0.0;
        state.hard_zero = true;
    }
}

Decision local_decision(double p, double eta1, double eta2) {
    if (p >= eta1) return Decision::Accept;
    if (p <= eta2) return Decision::Reject;
    return Decision::Undecided;
}

Decision forced_decision(double p, double eta1, double eta2) {
    return (eta1 - p < p - eta2) ? Decision::Accept : Decision::Reject;
}

}  // namespace hybridchain
