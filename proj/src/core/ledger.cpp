#include "ledger.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

namespace hybridchain {

using nlohmann::json;

void Ledger::append(Transaction tx) {
    if (tx.id != next_id())
        throw InvariantError("ledger: non-contiguous transaction id " + std::to_string(tx.id));
    if (!tx.genesis && tx.witness_ids.empty())
        throw InvariantError("ledger: empty witness set for tx " + std::to_string(tx.id));
    if (tx.witness_ids.size() != tx.conflict_bits.size())
        throw InvariantError("ledger: witness/conflict arity mismatch for tx " + std::to_string(tx.id));
    bool any_conflict = false;
    for (std::size_t i = 0; i < tx.witness_ids.size(); ++i) {
        if (tx.witness_ids[i] < 0 || tx.witness_ids[i] >= tx.id)
            throw InvariantError("ledger: forward or self witness reference in tx " + std::to_string(tx.id));
        any_conflict = any_conflict || tx.conflict_bits[i] != 0;
    }
    if (tx.truth_valid == any_conflict)
        throw InvariantError("ledger: truth_valid inconsistent with conflict bits in tx " +
                             std::to_string(tx.id));
    txs_.push_back(std::move(tx));
    confirmed_.push_back(0);
    rejected_.push_back(0);
    spent_.push_back(0);
    custodians_.emplace_back();
}

void Ledger::check_id(TxId id) const {
    if (id < 0 || id >= next_id())
        throw LookupError("ledger: unknown transaction id " + std::to_string(id));
}

const Transaction& Ledger::tx(TxId id) const {
    check_id(id);
    return txs_[static_cast<std::size_t>(id)];
}

bool Ledger::is_confirmed(TxId id) const {
    check_id(id);
    return confirmed_[static_cast<std::size_t>(id)] != 0;
}

bool Ledger::is_rejected(TxId id) const {
    check_id(id);
    return rejected_[static_cast<std::size_t>(id)] != 0;
}

void Ledger::confirm(TxId id, std::vector<ValidatorId> custodians) {
    check_id(id);
    if (is_settled(id)) throw InvariantError("ledger: double settlement of tx " + std::to_string(id));
    confirmed_[static_cast<std::size_t>(id)] = 1;
    confirmed_sorted_.insert(std::lower_bound(confirmed_sorted_.begin(), confirmed_sorted_.end(), id), id);
    std::sort(custodians.begin(), custodians.end());
    custodians_[static_cast<std::size_t>(id)] = std::move(custodians);
    for (TxId w : txs_[static_cast<std::size_t>(id)].witness_ids) spent_[static_cast<std::size_t>(w)] = 1;
}

void Ledger::reject(TxId id) {
    check_id(id);
    if (is_settled(id)) throw InvariantError("ledger: double settlement of tx " + std::to_string(id));
    rejected_[static_cast<std::size_t>(id)] = 1;
}

const std::vector<ValidatorId>& Ledger::custodians(TxId id) const {
    check_id(id);
    return custodians_[static_cast<std::size_t>(id)];
}

bool Ledger::is_custodian(ValidatorId v, TxId id) const {
    const auto& c = custodians(id);
    return std::binary_search(c.begin(), c.end(), v);
}

std::uint8_t Ledger::ground_truth_conflict(TxId ell, TxId j) const {
    const Transaction& t = tx(ell);
    for (std::size_t i = 0; i < t.witness_ids.size(); ++i)
        if (t.witness_ids[i] == j) return t.conflict_bits[i];
    throw LookupError("ledger: tx " + std::to_string(j) + " is not a witness of " + std::to_string(ell));
}

Perception Ledger::honest_perceive(ValidatorId validator, TxId ell, TxId j, int round) const {
    if (!is_custodian(validator, j))
        throw LookupError("ledger: validator " + std::to_string(validator) + " does not store witness " +
                          std::to_string(j));
    Perception p;
    p.source_validator = validator;
    p.subject = ell;
    p.witness = j;
    p.verdict = static_cast<std::uint8_t>(1 - ground_truth_conflict(ell, j));
    p.round = round;
    return p;
}

std::vector<TxId> Ledger::spent_set() const {
    std::vector<TxId> out;
    for (TxId id = 0; id < next_id(); ++id)
        if (spent_[static_cast<std::size_t>(id)]) out.push_back(id);
    return out;
}

bool Ledger::is_spent(TxId id) const {
    check_id(id);
    return spent_[static_cast<std::size_t>(id)] != 0;
}

std::string Ledger::to_record(const Transaction& tx) {
    json j;
    j["id"] = tx.id;
    j["user"] = tx.submitter;
    j["witnesses"] = tx.witness_ids;
    j["attrs"] = tx.attributes.as_array();
    j["truth"] = tx.truth_valid ? 1 : 0;
    j["conflicts"] = tx.conflict_bits;
    j["value"] = tx.value;
    j["fee"] = tx.fee;
    j["submit_ms"] = tx.submit_time;
    if (tx.genesis) j["genesis"] = 1;
    if (tx.replay) j["replay"] = 1;
    return j.dump();
}

Transaction Ledger::from_record(const std::string& line) {
    json j = json::parse(line);
    Transaction tx;
    tx.id = j.at("id").get<TxId>();
    tx.submitter = j.at("user").get<UserId>();
    tx.witness_ids = j.at("witnesses").get<std::vector<TxId>>();
    auto a = j.at("attrs").get<std::array<double, 5>>();
    tx.attributes = {a[0], a[1], a[2], a[3], a[4]};
    tx.truth_valid = j.at("truth").get<int>() != 0;
    tx.conflict_bits = j.at("conflicts").get<std::vector<std::uint8_t>>();
    tx.value = j.at("value").get<double>();
    tx.fee = j.at("fee").get<double>();
    tx.submit_time = j.at("submit_ms").get<double>();
    tx.genesis = j.value("genesis", 0) != 0;
    tx.replay = j.value("replay", 0) != 0;
    return tx;
}

void Ledger::dump(std::ostream& os) const {
    for (const Transaction& t : txs_) os << to_record(t) << '\n';
}

}  // namespace hybridchain
