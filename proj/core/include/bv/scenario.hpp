#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bv/booth.hpp"
#include "bv/keys.hpp"
#include "bv/ledger.hpp"
#include "bv/main_contract.hpp"

namespace bv {

// One scripted election. All randomness (keys, shuffle, proofs, weighted
// choices) flows from `seed` via labeled sub-seeds.
struct ScenarioConfig {
    std::string election_id = "election-1";
    int n_voters = 9;
    int k_candidates = 2;
    int group_size = 3;
    int mpc_batch = 1;
    int bits = 64;  // per-booth safe-prime size
    int enroll_batch_size = 500;
    long long deposit_amount = 100;
    long long deposit_escalation = 0;
    std::string platform_profile = "harmony-like";
    double voting_period_seconds = 2 * 86400.0;
    std::string seed = "seed";
    // round -> global voter indices. Round 0 stalls skip the vote; round
    // r >= 1 stalls withhold recovery shares during that round.
    std::map<int, std::vector<int>> stall_plan;
    std::vector<int> vote_choices;     // explicit 1-based choices, size n
    std::vector<double> vote_weights;  // else per-candidate weights

    void validate() const;
    nlohmann::json to_json() const;
    static ScenarioConfig from_json(const nlohmann::json& j);
};

struct ElectionReport {
    std::map<std::string, double> phase_cost;
    std::map<std::string, long long> phase_tx_count;
    std::map<std::string, Tally> booth_tallies;
    std::optional<Tally> final_tally;
    std::map<std::string, long long> deposit_count;
    std::map<std::string, long long> deposit_amount;
    std::uint64_t blocks_used = 0;
    double gas_used = 0;
    double gas_available = 0;  // blocks_used * block_gas_limit

    nlohmann::json to_json() const;
};

// Phase name for a ledger operation, used by cost aggregation.
std::string phase_of_op(const std::string& op);

class Simulation {
  public:
    explicit Simulation(ScenarioConfig cfg);

    void phase_enroll();
    void phase_assign();
    void phase_signup();
    void phase_mpc();
    void phase_vote();
    void phase_recover();
    void phase_tally();
    void phase_aggregate();
    void run_all();

    ElectionReport report() const;
    std::string cost_csv() const;  // phase,op,count,units

    const ScenarioConfig& config() const { return cfg_; }
    const MainState& main_state() const { return mc_; }
    const std::map<std::string, BoothState>& booths() const { return booths_; }
    const LedgerSim& ledger() const { return ledger_; }
    const CostModel& cost_model() const { return platform_.model; }
    int unexpected_failures() const { return unexpected_; }
    const std::string& stage() const { return stage_; }

    nlohmann::json to_json() const;
    static Simulation from_json(const nlohmann::json& j);

  private:
    Simulation() = default;

    std::string voter_addr(int i) const { return "voter-" + std::to_string(i); }
    int choice_for(int voter_index);
    bool stalls_in_round(int voter_index, int round) const;

    TxResult apply_main(const std::string& sender, const std::string& op,
                        nlohmann::json payload,
                        const std::function<TxResult(MainState&, Meter*)>& fn,
                        bool expect_ok = true);
    TxResult apply_booth(const std::string& sender, const std::string& booth_id,
                         const std::string& op, nlohmann::json payload,
                         const std::function<TxResult(BoothState&, Meter*)>& fn,
                         bool expect_ok = true);

    ScenarioConfig cfg_;
    CalibratedPlatform platform_;
    MainState mc_;
    std::map<std::string, BoothState> booths_;
    LedgerSim ledger_;
    std::map<std::string, VoterKeypair> keys_;
    std::map<std::string, int> choices_;
    std::string stage_ = "init";
    int unexpected_ = 0;
};

ElectionReport run_scenario(const ScenarioConfig& cfg);

// CSV with one row per (value, metric) pair along the chosen axis:
// mpc_batch, k, n or period.
std::string sweep_csv(const ScenarioConfig& cfg, const std::string& axis,
                      const std::vector<double>& values);

}  // namespace bv
