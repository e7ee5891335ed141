#include "reliability.hpp"

namespace hybridchain {

std::optional<std::uint8_t> majority_perception(const std::vector<std::uint8_t>& verdicts) {
    std::size_t ones = 0;
    for (std::uint8_t v : verdicts) ones += v ? 1 : 0;
    const std::size_t zeros = verdicts.size() - ones;
    if (ones > zeros) return std::uint8_t{1};
    if (zeros > ones) return std::uint8_t{0};
    return std::nullopt;
}

void PairVerdictBook::record(const Perception& p) {
    votes_[{p.subject, p.witness}].push_back(p.verdict);
}

std::optional<std::uint8_t> PairVerdictBook::majority(TxId subject, TxId witness) const {
    auto it = votes_.find({subject, witness});
    if (it == votes_.end()) return std::nullopt;
    return majority_perception(it->second);
}

double update_validator_reliability(double rho_prev, const std::vector<SentPerception>& sent,
                                    const PairVerdictBook& book, const ReliabilityParams& params) {
    long settled = 0;
    long scored = 0;
    for (const SentPerception& s : sent) {
        auto maj = book.majority(s.subject, s.witness);
        if (!maj.has_value()) continue;
        ++settled;
        const bool agree = *maj == s.verdict;
        if (params.literal_xor ? !agree : agree) ++scored;
    }
    if (settled == 0) return rho_prev;
    const double frac = static_cast<double>(scored) / static_cast<double>(settled);
    return params.zeta1 * rho_prev + (1.0 - params.zeta1) * frac;
}

double update_user_reliability(double rho_prev, const std::vector<std::uint8_t>& outcomes,
                               const ReliabilityParams& params) {
    if (outcomes.empty()) return rho_prev;
    double sum = 0.0;
    for (std::uint8_t v : outcomes) sum += v ? 1.0 : 0.0;
    const double mean = sum / static_cast<double>(outcomes.size());
    return params.zeta2 * rho_prev + (1.0 - params.zeta2) * mean;
}

}  // namespace hybridchain
