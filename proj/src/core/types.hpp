#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace hybridchain {

using TxId = std::int64_t;
using ValidatorId = int;
using UserId = int;
using SimTimeMs = double;

// Attribute vector a[1..5]: inverse transferred value, fee, elapsed rounds
// since the submitter's previous transaction, inverse witness-set size,
// weighted-average sender reliability.
struct AttributeVector {
    double a1 = 0.0;  // (0, 10]
    double a2 = 0.0;  // > 0
    double a3 = 0.0;  // integer-valued, {0..50}
    double a4 = 0.0;  // 1/|W|, (0, 1]
    double a5 = 0.0;  // (0, 1]

    std::array<double, 5> as_array() const { return {a1, a2, a3, a4, a5}; }
};

struct Transaction {
    TxId id = 0;
    UserId submitter = 0;
    std::vector<TxId> witness_ids;            // each < id; empty only for genesis entries
    AttributeVector attributes;
    bool truth_valid = true;                  // truth_valid == !(any conflict bit)
    std::vector<std::uint8_t> conflict_bits;  // one per witness, 1 = conflict
    double value = 0.0;
    double fee = 0.0;
    SimTimeMs submit_time = 0.0;
    bool genesis = false;
    bool replay = false;                      // injected by the replay adversary

    std::size_t witness_count() const { return witness_ids.size(); }
};

// One validator's binary verdict about one (subject, witness) pair.
// verdict 0 = conflict, 1 = no conflict.
struct Perception {
    ValidatorId source_validator = 0;
    TxId subject = 0;
    TxId witness = 0;
    std::uint8_t verdict = 1;
    int round = 0;
};

enum class Decision : std::uint8_t { Undecided = 0, Accept = 1, Reject = 2 };

}  // namespace hybridchain
