#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "error.hpp"
#include "types.hpp"

namespace hybridchain {

// Append-only transaction store with UTXO-style pairwise conflict ground
// truth. Read-only within a round; confirmations happen at round boundaries
// on the coordinator.
class Ledger {
public:
    // Appends a transaction; its id must equal the next dense index.
    // Enforces the structural invariants (backward witnesses, bit/witness
    // arity, truth_valid consistency).
    void append(Transaction tx);

    const Transaction& tx(TxId id) const;
    TxId next_id() const { return static_cast<TxId>(txs_.size()); }
    std::size_t size() const { return txs_.size(); }

    bool is_confirmed(TxId id) const;
    bool is_rejected(TxId id) const;
    bool is_settled(TxId id) const { return is_confirmed(id) || is_rejected(id); }

    // Marks a transaction confirmed and records the validator set that stores
    // it from now on. Consumes its witnesses (spent set).
    void confirm(TxId id, std::vector<ValidatorId> custodians);
    void reject(TxId id);

    // Validators that store the transaction (its confirming community, or the
    // seeded set for genesis entries).
    const std::vector<ValidatorId>& custodians(TxId id) const;
    bool is_custodian(ValidatorId v, TxId id) const;

    // Ground-truth conflict bit of (ell, j); j must be a witness of ell.
    std::uint8_t ground_truth_conflict(TxId ell, TxId j) const;

    // Honest per-pair verdict: 0 iff the pair conflicts. The validator must
    // store witness j (callers filter custody first).
    Perception honest_perceive(ValidatorId validator, TxId ell, TxId j, int round) const;

    // Ids of all witnesses consumed by confirmed transactions.
    std::vector<TxId> spent_set() const;
    bool is_spent(TxId id) const;

    // Ascending ids of confirmed transactions (the spendable pool).
    const std::vector<TxId>& confirmed_ids() const { return confirmed_sorted_; }

    // One JSON record per line: id, submitter, witnesses, attributes, truth
    // bit, conflict bits, value/fee, times. Used to replay identical
    // workloads across runs.
    static std::string to_record(const Transaction& tx);
    static Transaction from_record(const std::string& line);
    void dump(std::ostream& os) const;

private:
    std::vector<Transaction> txs_;
    std::vector<std::uint8_t> confirmed_;
    std::vector<std::uint8_t> rejected_;
    std::vector<std::uint8_t> spent_;
    std::vector<std::vector<ValidatorId>> custodians_;
    std::vector<TxId> confirmed_sorted_;

    void check_id(TxId id) const;
};

}  // namespace hybridchain
