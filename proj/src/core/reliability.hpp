#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "types.hpp"

namespace hybridchain {

struct ReliabilityParams {
    double zeta1 = 0.98;  // validator forgetting factor
    double zeta2 = 0.9;   // user forgetting factor
    bool literal_xor = false;  // score disagreement instead of agreement
};

// Strict-majority verdict; exact tie yields nothing and the pair is excluded
// from settlement.
std::optional<std::uint8_t> majority_perception(const std::vector<std::uint8_t>& verdicts);

// Epoch-scoped book of every delivered perception, keyed by (subject, witness).
class PairVerdictBook {
public:
    void record(const Perception& p);
    std::optional<std::uint8_t> majority(TxId subject, TxId witness) const;
    std::size_t pair_count() const { return votes_.size(); }

private:
    std::map<std::pair<TxId, TxId>, std::vector<std::uint8_t>> votes_;
};

struct SentPerception {
    TxId subject = 0;
    TxId witness = 0;
    std::uint8_t verdict = 1;
};

// rho <- zeta1*rho + (1-zeta1)*(fraction of this validator's settled pairs
// whose verdict matches the majority). Pairs without a strict majority do not
// settle; a validator with nothing settled keeps rho unchanged.
double update_validator_reliability(double rho_prev, const std::vector<SentPerception>& sent,
                                    const PairVerdictBook& book, const ReliabilityParams& params);

// rho <- zeta2*rho + (1-zeta2)*mean(V) over the user's transactions decided
// this epoch; unchanged if the user submitted nothing.
double update_user_reliability(double rho_prev, const std::vector<std::uint8_t>& outcomes,
                               const ReliabilityParams& params);

}  // namespace hybridchain
