#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bv/group.hpp"
#include "bv/zkp.hpp"

namespace bv {

enum class Phase { SignUp, PreVoting, Voting, FaultRecovery, Tally, Closed };

std::string phase_name(Phase p);
Phase phase_from_name(const std::string& s);

enum class TxCode {
    Ok,
    WrongPhase,
    NotEligible,
    Duplicate,
    BadDeposit,
    OutOfOrderBatch,
    AlreadyVoted,
    InvalidProof,
    WrongPair,
    MissingShares,
    MalformedTally,
    RejectedTally,
    NotAuthority,
    TooFewVoters,
    UnknownBooth,
    DuplicateBooth,
    InconsistentLists,
    ExceedsBlockLimit,
};

std::string tx_code_name(TxCode c);

struct TxResult {
    TxCode code = TxCode::Ok;
    std::string detail;

    bool ok() const { return code == TxCode::Ok; }
    static TxResult success() { return {}; }
    static TxResult fail(TxCode c, std::string detail = "") { return {c, std::move(detail)}; }
};

struct Tally {
    std::vector<long long> counts;  // ct_1 .. ct_k

    long long total() const;
    nlohmann::json to_json() const;
    static Tally from_json(const nlohmann::json& j);
    bool operator==(const Tally&) const = default;
};

// Answers "is this address assigned to this booth?" -- a query the booth
// makes against the main contract's registry.
using EligibilityFn =
    std::function<bool(const std::string& booth_id, const std::string& addr)>;

// One booth contract replica. Single-writer: transactions apply serially.
// Failed operations leave the state untouched.
struct BoothState {
    std::string booth_id;
    GroupParams params;
    Phase phase = Phase::SignUp;
    bool voided = false;
    long long deposit_amount = 0;
    long long deposit_escalation = 0;  // extra escrow per recovery round

    std::vector<std::pair<std::string, BigInt>> signed_up;  // (address, g^x)
    int mpc_batch = 0;
    std::vector<BigInt> right_markers;
    BigInt act_left = 1;
    int batches_done = 0;
    std::vector<BigInt> mpc_keys;  // h_i, populated batch by batch

    std::map<int, BigInt> votes;     // voter index -> blinded vote
    std::map<int, BigInt> repaired;  // voter index -> repaired vote
    std::set<int> stalled;
    std::set<int> forfeited;
    int recovery_round = 0;
    std::map<std::pair<int, int>, BigInt> shares;  // (active i, stalled j) -> g^(x_i x_j)
    std::map<int, long long> extra_escrow;         // recovery-round deposits

    std::optional<Tally> tally;

    int n() const { return static_cast<int>(signed_up.size()); }
    int num_batches() const;
    std::optional<int> index_of(const std::string& addr) const;
    // Active = signed up, voted, and not stalled.
    std::vector<int> active_indices() const;
    // The vote that enters the tally product: repaired value if present.
    const BigInt& counted_vote(int i) const;

    nlohmann::json to_json() const;
    static BoothState from_json(const nlohmann::json& j);
};

BoothState make_booth(std::string booth_id, GroupParams params, long long deposit_amount,
                      long long deposit_escalation = 0);

TxResult sign_up(BoothState& st, const std::string& addr, const BigInt& pk,
                 long long deposit, const EligibilityFn& eligible, Meter* meter = nullptr);

// Enters PreVoting and stores one right marker per batch:
// marker[b] = product of all pks strictly after batch b.
TxResult precompute_right_markers(BoothState& st, int mpc_batch, Meter* meter = nullptr);

// Computes mpc_keys for one batch from the stored marker and the act_left
// carry. Batches must run in order. Enters Voting after the last batch.
TxResult compute_mpc_batch(BoothState& st, int batch_index, Meter* meter = nullptr);

TxResult cast_vote(BoothState& st, int voter_index, const BigInt& vote,
                   const MembershipProof& proof, Meter* meter = nullptr);

// Voting deadline: voters without votes become stalled and forfeit their
// deposit. With no stallers the booth skips straight to Tally. May be called
// again during FaultRecovery to stall voters who withheld shares.
TxResult open_fault_recovery(BoothState& st, Meter* meter = nullptr);

TxResult submit_share(BoothState& st, int active_index, int stalled_index,
                      const BigInt& share, const DHProof& proof, Meter* meter = nullptr);

// Divides the stalled voters' key material out of every active vote. Fails
// with MissingShares (listing the absent pairs) if incomplete.
TxResult repair_votes(BoothState& st, Meter* meter = nullptr);

TxResult verify_booth_tally(BoothState& st, const Tally& claimed, Meter* meter = nullptr);

// A booth whose sign-up count ends below 3 is voided; its deposits refund.
TxResult void_booth(BoothState& st);

// Product of counted votes over the active set (the left side of the tally
// identity).
BigInt vote_product(const BoothState& st, Meter* meter = nullptr);

}  // namespace bv
