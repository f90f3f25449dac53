#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bv/booth.hpp"
#include "bv/group.hpp"

namespace bv {

enum class DepositStatus { Escrowed, Refundable, Forfeit, Refunded };

std::string deposit_status_name(DepositStatus s);

struct DepositRecord {
    std::string voter;
    long long amount = 0;
    DepositStatus status = DepositStatus::Escrowed;
};

struct BoothDescriptor {
    std::string booth_id;
    std::vector<std::string> members;
    GroupParams params;
};

// Registry and aggregator: enrollment, group assignment, booth directory,
// deposit ledger, final tally. Single writer; queries are read-only.
struct MainState {
    std::string election_id;
    std::string authority;
    int k = 0;

    std::vector<std::string> enrolled;  // submission order
    bool enrollment_closed = false;
    int group_size = 0;
    std::string assignment_seed;
    std::map<std::string, std::string> assignment;  // address -> booth_id
    std::map<std::string, BoothDescriptor> booths;
    std::set<std::string> voided_booths;
    std::map<std::string, Tally> booth_tallies;
    std::optional<Tally> final_tally;
    std::map<std::string, DepositRecord> deposits;

    nlohmann::json to_json() const;
    static MainState from_json(const nlohmann::json& j);
};

MainState make_main(std::string election_id, std::string authority, int k);

struct EnrollOutcome {
    int accepted = 0;
    std::vector<std::string> rejected;  // duplicates, reported individually
};

TxResult enroll_batch(MainState& st, const std::string& caller,
                      const std::vector<std::string>& addresses,
                      EnrollOutcome* outcome = nullptr, Meter* meter = nullptr);

// Deterministic seeded shuffle, chunked into groups of group_size. An
// undersized remainder (< 3) is topped up by pulling one member each from
// preceding groups that can spare one. Creates one booth per group with
// per-booth parameters of `bits` bits.
TxResult assign_groups(MainState& st, const std::string& caller, int group_size,
                       const std::string& seed, int bits, Meter* meter = nullptr);

// Throws std::out_of_range on an unknown booth.
bool is_eligible(const MainState& st, const std::string& booth_id, const std::string& addr);

TxResult record_deposit(MainState& st, const std::string& voter, long long amount);

TxResult submit_booth_tally(MainState& st, const std::string& booth_id, const Tally& tally,
                            Meter* meter = nullptr);

TxResult mark_booth_voided(MainState& st, const std::string& booth_id);

// Componentwise sum of booth tallies reported so far.
Tally partial_tally(const MainState& st);

TxResult settle_deposits(MainState& st, const std::string& booth_id,
                         const std::vector<std::string>& correct_voters,
                         const std::vector<std::string>& forfeiting_voters,
                         Meter* meter = nullptr);

}  // namespace bv
