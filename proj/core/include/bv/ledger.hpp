#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bv/group.hpp"

namespace bv {

// Abstract gas constants. Operation counting stands in for EVM gas: the aim
// is reproducing trends and ratios, not absolute gas values.
struct CostModel {
    double per_tx = 21000;        // T
    double per_exp = 2000;        // E
    double per_mul = 8;           // M
    double per_write = 20000;     // S
    double per_read = 800;        // R

    static CostModel defaults() { return {}; }
};

double op_cost(const CostModel& model, const Meter& meter);

struct PlatformProfile {
    std::string name;
    double block_gas_limit = 0;
    double block_interval_s = 0;
};

struct Transaction {
    std::string sender;
    std::string target;
    std::string operation;
    nlohmann::json payload;
    double cost = 0;
    std::uint64_t nonce = 0;

    nlohmann::json to_json() const;
    static Transaction from_json(const nlohmann::json& j);
};

struct Receipt {
    std::uint64_t block = 0;
    double cost = 0;
    bool ok = false;
    std::string code;

    nlohmann::json to_json() const;
    static Receipt from_json(const nlohmann::json& j);
};

// Serial event log with greedy block packing. Rejected operations still
// consume their cost and occupy block space; a transaction that can never
// fit any block is refused outright.
class LedgerSim {
  public:
    explicit LedgerSim(PlatformProfile profile) : profile_(std::move(profile)) {}
    LedgerSim() = default;

    // outcome_ok/outcome_code describe the contract-level result; the caller
    // executed the operation beforehand and commits only when the receipt
    // says so.
    Receipt submit(Transaction tx, bool outcome_ok, const std::string& outcome_code);

    const PlatformProfile& profile() const { return profile_; }
    const std::vector<std::pair<Transaction, Receipt>>& transcript() const {
        return transcript_;
    }
    std::uint64_t blocks_used() const;
    double gas_used() const;

    // One transaction + receipt per line.
    std::string to_jsonl() const;

    nlohmann::json to_json() const;
    static LedgerSim from_json(const nlohmann::json& j);

  private:
    PlatformProfile profile_;
    std::uint64_t next_nonce_ = 0;
    std::uint64_t current_block_ = 0;
    double used_in_block_ = 0;
    std::vector<std::pair<Transaction, Receipt>> transcript_;
};

// Metered cost of casting one vote with k candidates: per-tx overhead plus
// the 1-out-of-k proof verification and the vote write. Affine in k.
double meter_vote_cost(const CostModel& model, int k);

// Total metered cost of the right-marker precomputation plus all MPC batch
// transactions, divided by n.
double meter_mpc_cost_per_voter(const CostModel& model, int n, int batch);

// Voting-phase-only capacity:
// floor(period / interval) * floor(block_gas_limit / vote_cost(k)).
double capacity(const PlatformProfile& profile, const CostModel& model, int k,
                double period_seconds);

struct CalibratedPlatform {
    PlatformProfile profile;
    CostModel model;
};

// Solves (T, E) so the metered vote cost hits two anchor capacities on the
// given platform; M, S, R are zeroed. Re-runnable calibration procedure.
CostModel calibrate_vote_cost(const PlatformProfile& profile, int k1,
                              double capacity1, double period1_s, int k2,
                              double capacity2, double period2_s);

// Default shipped profiles with calibrated constants.
CalibratedPlatform harmony_like();
CalibratedPlatform gnosis_like();
CalibratedPlatform platform_by_name(const std::string& name);

}  // namespace bv
