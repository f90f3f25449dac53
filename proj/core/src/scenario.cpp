#include "bv/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bv/rng.hpp"
#include "bv/tally_solver.hpp"
#include "bv/zkp.hpp"

namespace bv {

using nlohmann::json;

void ScenarioConfig::validate() const {
    if (n_voters < 3) throw std::invalid_argument("n_voters must be >= 3");
    if (k_candidates < 1) throw std::invalid_argument("k_candidates must be >= 1");
    if (group_size < 3) throw std::invalid_argument("group_size must be >= 3");
    if (mpc_batch < 1) throw std::invalid_argument("mpc_batch must be >= 1");
    if (voting_period_seconds <= 0) throw std::invalid_argument("voting period must be positive");
    if (!vote_choices.empty()) {
        if (static_cast<int>(vote_choices.size()) != n_voters)
            throw std::invalid_argument("vote_choices must list every voter");
        for (int c : vote_choices)
            if (c < 1 || c > k_candidates) throw std::invalid_argument("vote choice out of range");
    }
    if (!vote_weights.empty()) {
        if (static_cast<int>(vote_weights.size()) != k_candidates)
            throw std::invalid_argument("vote_weights must have one entry per candidate");
        for (double w : vote_weights)
            if (w < 0) throw std::invalid_argument("vote weights must be non-negative");
    }
    for (const auto& [round, voters] : stall_plan) {
        if (round < 0) throw std::invalid_argument("stall rounds are numbered from 0");
        for (int v : voters)
            if (v < 0 || v >= n_voters) throw std::invalid_argument("stall_plan index out of range");
    }
}

json ScenarioConfig::to_json() const {
    json jstall = json::object();
    for (const auto& [round, voters] : stall_plan) jstall[std::to_string(round)] = voters;
    return json{{"election_id", election_id},
                {"n_voters", n_voters},
                {"k_candidates", k_candidates},
                {"group_size", group_size},
                {"mpc_batch", mpc_batch},
                {"bits", bits},
                {"enroll_batch_size", enroll_batch_size},
                {"deposit_amount", deposit_amount},
                {"deposit_escalation", deposit_escalation},
                {"platform_profile", platform_profile},
                {"voting_period_seconds", voting_period_seconds},
                {"seed", seed},
                {"stall_plan", jstall},
                {"vote_choices", vote_choices},
                {"vote_weights", vote_weights}};
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    ScenarioConfig c;
    c.election_id = j.value("election_id", c.election_id);
    c.n_voters = j.value("n_voters", c.n_voters);
    c.k_candidates = j.value("k_candidates", c.k_candidates);
    c.group_size = j.value("group_size", c.group_size);
    c.mpc_batch = j.value("mpc_batch", c.mpc_batch);
    c.bits = j.value("bits", c.bits);
    c.enroll_batch_size = j.value("enroll_batch_size", c.enroll_batch_size);
    c.deposit_amount = j.value("deposit_amount", c.deposit_amount);
    c.deposit_escalation = j.value("deposit_escalation", c.deposit_escalation);
    c.platform_profile = j.value("platform_profile", c.platform_profile);
    c.voting_period_seconds = j.value("voting_period_seconds", c.voting_period_seconds);
    c.seed = j.value("seed", c.seed);
    if (j.contains("stall_plan"))
        for (const auto& [round, voters] : j.at("stall_plan").items())
            c.stall_plan[std::stoi(round)] = voters.get<std::vector<int>>();
    if (j.contains("vote_choices")) c.vote_choices = j.at("vote_choices").get<std::vector<int>>();
    if (j.contains("vote_weights")) c.vote_weights = j.at("vote_weights").get<std::vector<double>>();
    c.validate();
    return c;
}

std::string phase_of_op(const std::string& op) {
    if (op == "enroll_batch" || op == "assign_groups") return "Setup";
    if (op == "sign_up") return "SignUp";
    if (op == "precompute_right_markers" || op == "compute_mpc_batch") return "PreVoting";
    if (op == "cast_vote") return "Voting";
    if (op == "open_fault_recovery" || op == "submit_share" || op == "repair_votes")
        return "FaultRecovery";
    if (op == "verify_booth_tally") return "BoothTally";
    if (op == "submit_booth_tally" || op == "settle_deposits") return "FinalTally";
    return "Other";
}

Simulation::Simulation(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    platform_ = platform_by_name(cfg_.platform_profile);
    mc_ = make_main(cfg_.election_id, "authority", cfg_.k_candidates);
    ledger_ = LedgerSim(platform_.profile);
}

bool Simulation::stalls_in_round(int voter_index, int round) const {
    auto it = cfg_.stall_plan.find(round);
    if (it == cfg_.stall_plan.end()) return false;
    return std::find(it->second.begin(), it->second.end(), voter_index) != it->second.end();
}

int Simulation::choice_for(int voter_index) {
    std::string addr = voter_addr(voter_index);
    auto it = choices_.find(addr);
    if (it != choices_.end()) return it->second;
    int choice;
    if (!cfg_.vote_choices.empty()) {
        choice = cfg_.vote_choices[voter_index];
    } else {
        std::vector<double> w = cfg_.vote_weights;
        if (w.empty()) w.assign(cfg_.k_candidates, 1.0);
        double total = 0;
        for (double x : w) total += x;
        // Weighted pick on a 2^32 lattice from the voter's sub-seed.
        Drbg rng(Drbg::derive(cfg_.seed, "choice/" + addr), "scenario/choice");
        double u = static_cast<double>(static_cast<std::uint64_t>(rng.below(BigInt(1) << 32))) /
                   4294967296.0 * total;
        choice = cfg_.k_candidates;
        double acc = 0;
        for (int l = 0; l < cfg_.k_candidates; ++l) {
            acc += w[l];
            if (u < acc) {
                choice = l + 1;
                break;
            }
        }
    }
    choices_[addr] = choice;
    return choice;
}

TxResult Simulation::apply_main(const std::string& sender, const std::string& op, json payload,
                                const std::function<TxResult(MainState&, Meter*)>& fn,
                                bool expect_ok) {
    MainState copy = mc_;
    Meter meter;
    TxResult r = fn(copy, &meter);
    Transaction tx{sender, "main", op, std::move(payload), op_cost(platform_.model, meter), 0};
    Receipt rc = ledger_.submit(std::move(tx), r.ok(), tx_code_name(r.code));
    if (rc.code == tx_code_name(TxCode::ExceedsBlockLimit)) {
        ++unexpected_;
        return TxResult::fail(TxCode::ExceedsBlockLimit);
    }
    if (r.ok()) mc_ = std::move(copy);
    else if (expect_ok) ++unexpected_;
    return r;
}

TxResult Simulation::apply_booth(const std::string& sender, const std::string& booth_id,
                                 const std::string& op, json payload,
                                 const std::function<TxResult(BoothState&, Meter*)>& fn,
                                 bool expect_ok) {
    BoothState copy = booths_.at(booth_id);
    Meter meter;
    TxResult r = fn(copy, &meter);
    Transaction tx{sender, booth_id, op, std::move(payload), op_cost(platform_.model, meter), 0};
    Receipt rc = ledger_.submit(std::move(tx), r.ok(), tx_code_name(r.code));
    if (rc.code == tx_code_name(TxCode::ExceedsBlockLimit)) {
        ++unexpected_;
        return TxResult::fail(TxCode::ExceedsBlockLimit);
    }
    if (r.ok()) booths_.at(booth_id) = std::move(copy);
    else if (expect_ok) ++unexpected_;
    return r;
}

void Simulation::phase_enroll() {
    std::vector<std::string> all;
    for (int i = 0; i < cfg_.n_voters; ++i) all.push_back(voter_addr(i));
    for (std::size_t s = 0; s < all.size(); s += cfg_.enroll_batch_size) {
        std::vector<std::string> batch(
            all.begin() + s, all.begin() + std::min(all.size(), s + cfg_.enroll_batch_size));
        apply_main("authority", "enroll_batch", json{{"count", batch.size()}},
                   [&](MainState& st, Meter* m) {
                       return enroll_batch(st, "authority", batch, nullptr, m);
                   });
    }
    stage_ = "enrolled";
}

void Simulation::phase_assign() {
    apply_main("authority", "assign_groups",
               json{{"group_size", cfg_.group_size}, {"bits", cfg_.bits}},
               [&](MainState& st, Meter* m) {
                   return assign_groups(st, "authority", cfg_.group_size,
                                        Drbg::derive(cfg_.seed, "assign"), cfg_.bits, m);
               });
    for (const auto& [id, bd] : mc_.booths)
        booths_.emplace(id, make_booth(id, bd.params, cfg_.deposit_amount,
                                       cfg_.deposit_escalation));
    stage_ = "assigned";
}

void Simulation::phase_signup() {
    // Committing to vote happens here; round-0 stallers still sign up.
    for (int i = 0; i < cfg_.n_voters; ++i) {
        std::string addr = voter_addr(i);
        const std::string& booth_id = mc_.assignment.at(addr);
        const BoothState& booth = booths_.at(booth_id);
        VoterKeypair kp = keygen(booth.params, Drbg::derive(cfg_.seed, "key/" + addr));
        keys_[addr] = kp;
        auto eligible = [this](const std::string& b, const std::string& a) {
            return is_eligible(mc_, b, a);
        };
        TxResult r = apply_booth(addr, booth_id, "sign_up", json{{"voter", addr}},
                                 [&](BoothState& st, Meter* m) {
                                     return sign_up(st, addr, kp.pk, cfg_.deposit_amount,
                                                    eligible, m);
                                 });
        if (r.ok()) record_deposit(mc_, addr, cfg_.deposit_amount);
    }
    stage_ = "signed-up";
}

void Simulation::phase_mpc() {
    for (auto& [id, booth] : booths_) {
        apply_booth("authority", id, "precompute_right_markers",
                    json{{"mpc_batch", cfg_.mpc_batch}}, [&](BoothState& st, Meter* m) {
                        return precompute_right_markers(st, cfg_.mpc_batch, m);
                    });
        int nb = booths_.at(id).num_batches();
        for (int b = 0; b < nb; ++b)
            apply_booth("authority", id, "compute_mpc_batch", json{{"batch", b}},
                        [&](BoothState& st, Meter* m) { return compute_mpc_batch(st, b, m); });
    }
    stage_ = "mpc-done";
}

void Simulation::phase_vote() {
    for (int i = 0; i < cfg_.n_voters; ++i) {
        if (stalls_in_round(i, 0)) continue;
        std::string addr = voter_addr(i);
        const std::string& booth_id = mc_.assignment.at(addr);
        const BoothState& booth = booths_.at(booth_id);
        int idx = booth.index_of(addr).value();
        int choice = choice_for(i);
        auto bvp = prove_membership(booth.params, keys_.at(addr), booth.mpc_keys[idx], choice,
                                    Drbg::derive(cfg_.seed, "proof/" + addr));
        apply_booth(addr, booth_id, "cast_vote",
                    json{{"voter", addr}, {"vote", to_dec(bvp.vote)}},
                    [&](BoothState& st, Meter* m) {
                        return cast_vote(st, idx, bvp.vote, bvp.proof, m);
                    });
    }
    stage_ = "voted";
}

void Simulation::phase_recover() {
    for (auto& [id, booth_ref] : booths_) {
        const std::string booth_id = id;
        apply_booth("authority", booth_id, "open_fault_recovery", json::object(),
                    [&](BoothState& st, Meter* m) { return open_fault_recovery(st, m); });
        int guard = 0;
        while (booths_.at(booth_id).phase == Phase::FaultRecovery && guard++ <= cfg_.n_voters) {
            const BoothState& booth = booths_.at(booth_id);
            int round = booth.recovery_round;
            for (int idx : booth.active_indices()) {
                const std::string& addr = booth.signed_up[idx].first;
                int global = std::stoi(addr.substr(addr.find('-') + 1));
                if (stalls_in_round(global, round)) continue;
                for (int j : booth.stalled) {
                    if (booth.shares.count({idx, j})) continue;
                    const BigInt& pk_j = booth.signed_up[j].second;
                    DHProof pf = prove_dh(booth.params, keys_.at(addr), pk_j,
                                          Drbg::derive(cfg_.seed, "share/" + addr + "/" +
                                                                      std::to_string(j) + "/" +
                                                                      std::to_string(round)));
                    apply_booth(addr, booth_id, "submit_share",
                                json{{"i", idx}, {"j", j}},
                                [&](BoothState& st, Meter* m) {
                                    return submit_share(st, idx, j, pf.C, pf, m);
                                });
                }
            }
            // Only trigger the repair once the share matrix is complete;
            // otherwise the round deadline passes and withholders stall.
            const BoothState& after = booths_.at(booth_id);
            bool complete = true;
            for (int idx : after.active_indices())
                for (int j : after.stalled)
                    if (!after.shares.count({idx, j})) complete = false;
            if (complete) {
                apply_booth("authority", booth_id, "repair_votes", json::object(),
                            [&](BoothState& st, Meter* m) { return repair_votes(st, m); });
            } else {
                apply_booth("authority", booth_id, "open_fault_recovery", json::object(),
                            [&](BoothState& st, Meter* m) { return open_fault_recovery(st, m); });
            }
        }
    }
    stage_ = "recovered";
}

void Simulation::phase_tally() {
    for (auto& [id, booth] : booths_) {
        if (booth.phase != Phase::Tally) continue;
        auto solved = solve_tally(booth.params, vote_product(booth),
                                  static_cast<long long>(booth.active_indices().size()));
        if (!solved) {
            ++unexpected_;
            continue;
        }
        Tally t = *solved;
        apply_booth("authority", id, "verify_booth_tally", t.to_json(),
                    [&](BoothState& st, Meter* m) { return verify_booth_tally(st, t, m); });
    }
    stage_ = "tallied";
}

void Simulation::phase_aggregate() {
    for (auto& [id, booth] : booths_) {
        const std::string booth_id = id;
        if (booth.voided) {
            mark_booth_voided(mc_, booth_id);
            continue;
        }
        if (!booth.tally) continue;
        Tally t = *booth.tally;
        apply_main(booth_id, "submit_booth_tally", t.to_json(),
                   [&](MainState& st, Meter* m) {
                       return submit_booth_tally(st, booth_id, t, m);
                   });
        std::vector<std::string> correct, forfeiting;
        for (int i = 0; i < booth.n(); ++i) {
            if (booth.forfeited.count(i)) forfeiting.push_back(booth.signed_up[i].first);
            else correct.push_back(booth.signed_up[i].first);
        }
        apply_main("authority", "settle_deposits",
                   json{{"booth", booth_id},
                        {"correct", correct.size()},
                        {"forfeit", forfeiting.size()}},
                   [&](MainState& st, Meter* m) {
                       return settle_deposits(st, booth_id, correct, forfeiting, m);
                   });
    }
    stage_ = "aggregated";
}

void Simulation::run_all() {
    phase_enroll();
    phase_assign();
    phase_signup();
    phase_mpc();
    phase_vote();
    phase_recover();
    phase_tally();
    phase_aggregate();
}

ElectionReport Simulation::report() const {
    ElectionReport rep;
    for (const auto& [tx, rc] : ledger_.transcript()) {
        std::string phase = phase_of_op(tx.operation);
        rep.phase_cost[phase] += tx.cost;
        rep.phase_tx_count[phase] += 1;
    }
    for (const auto& [id, booth] : booths_)
        if (booth.tally) rep.booth_tallies[id] = *booth.tally;
    rep.final_tally = mc_.final_tally;
    for (const auto& [_, rec] : mc_.deposits) {
        rep.deposit_count[deposit_status_name(rec.status)] += 1;
        rep.deposit_amount[deposit_status_name(rec.status)] += rec.amount;
    }
    rep.blocks_used = ledger_.blocks_used();
    rep.gas_used = ledger_.gas_used();
    rep.gas_available = static_cast<double>(rep.blocks_used) * platform_.profile.block_gas_limit;
    return rep;
}

std::string Simulation::cost_csv() const {
    std::map<std::pair<std::string, std::string>, std::pair<long long, double>> agg;
    for (const auto& [tx, rc] : ledger_.transcript()) {
        auto& cell = agg[{phase_of_op(tx.operation), tx.operation}];
        cell.first += 1;
        cell.second += tx.cost;
    }
    std::ostringstream out;
    out << "phase,op,count,units\n";
    for (const auto& [key, cell] : agg)
        out << key.first << "," << key.second << "," << cell.first << "," << cell.second << "\n";
    return out.str();
}

json ElectionReport::to_json() const {
    json jbooth = json::object();
    for (const auto& [id, t] : booth_tallies) jbooth[id] = t.to_json();
    json j{{"phase_cost", phase_cost},
           {"phase_tx_count", phase_tx_count},
           {"booth_tallies", jbooth},
           {"deposit_count", deposit_count},
           {"deposit_amount", deposit_amount},
           {"blocks_used", blocks_used},
           {"gas_used", gas_used},
           {"gas_available", gas_available}};
    if (final_tally) j["final_tally"] = final_tally->to_json();
    return j;
}

json Simulation::to_json() const {
    json jbooths = json::object();
    for (const auto& [id, b] : booths_) jbooths[id] = b.to_json();
    json jkeys = json::object();
    for (const auto& [addr, kp] : keys_) jkeys[addr] = kp.to_json();
    return json{{"config", cfg_.to_json()},
                {"main", mc_.to_json()},
                {"booths", jbooths},
                {"ledger", ledger_.to_json()},
                {"keys", jkeys},
                {"choices", choices_},
                {"stage", stage_},
                {"unexpected", unexpected_}};
}

Simulation Simulation::from_json(const json& j) {
    Simulation sim;
    sim.cfg_ = ScenarioConfig::from_json(j.at("config"));
    sim.platform_ = platform_by_name(sim.cfg_.platform_profile);
    sim.mc_ = MainState::from_json(j.at("main"));
    for (const auto& [id, b] : j.at("booths").items())
        sim.booths_.emplace(id, BoothState::from_json(b));
    sim.ledger_ = LedgerSim::from_json(j.at("ledger"));
    for (const auto& [addr, kp] : j.at("keys").items())
        sim.keys_[addr] = VoterKeypair::from_json(kp);
    sim.choices_ = j.at("choices").get<std::map<std::string, int>>();
    sim.stage_ = j.at("stage").get<std::string>();
    sim.unexpected_ = j.at("unexpected").get<int>();
    return sim;
}

ElectionReport run_scenario(const ScenarioConfig& cfg) {
    Simulation sim(cfg);
    sim.run_all();
    return sim.report();
}

std::string sweep_csv(const ScenarioConfig& cfg, const std::string& axis,
                      const std::vector<double>& values) {
    CalibratedPlatform platform = platform_by_name(cfg.platform_profile);
    std::ostringstream out;
    out << "axis,value,metric,units\n";
    for (double v : values) {
        if (axis == "mpc_batch") {
            int n = cfg.group_size;
            int batch = static_cast<int>(v);
            if (batch < 1 || batch > n) continue;  // no batch that size for this group
            out << axis << "," << v << ",mpc_cost_per_voter,"
                << meter_mpc_cost_per_voter(platform.model, n, batch) << "\n";
        } else if (axis == "k") {
            out << axis << "," << v << ",vote_cost,"
                << meter_vote_cost(platform.model, static_cast<int>(v)) << "\n";
            out << axis << "," << v << ",capacity,"
                << capacity(platform.profile, platform.model, static_cast<int>(v),
                            cfg.voting_period_seconds)
                << "\n";
        } else if (axis == "n") {
            int n = static_cast<int>(v);
            int batch = std::min(cfg.mpc_batch, n);
            out << axis << "," << v << ",mpc_cost_per_voter,"
                << meter_mpc_cost_per_voter(platform.model, n, batch) << "\n";
        } else if (axis == "period") {
            out << axis << "," << v << ",capacity,"
                << capacity(platform.profile, platform.model, cfg.k_candidates, v) << "\n";
        } else {
            throw std::invalid_argument("unknown sweep axis: " + axis);
        }
    }
    return out.str();
}

}  // namespace bv
