#include "bv/booth.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bv {

using nlohmann::json;

std::string phase_name(Phase p) {
    switch (p) {
        case Phase::SignUp: return "SignUp";
        case Phase::PreVoting: return "PreVoting";
        case Phase::Voting: return "Voting";
        case Phase::FaultRecovery: return "FaultRecovery";
        case Phase::Tally: return "Tally";
        case Phase::Closed: return "Closed";
    }
    return "?";
}

Phase phase_from_name(const std::string& s) {
    for (Phase p : {Phase::SignUp, Phase::PreVoting, Phase::Voting, Phase::FaultRecovery,
                    Phase::Tally, Phase::Closed})
        if (phase_name(p) == s) return p;
    throw std::invalid_argument("unknown phase: " + s);
}

std::string tx_code_name(TxCode c) {
    switch (c) {
        case TxCode::Ok: return "Ok";
        case TxCode::WrongPhase: return "WrongPhase";
        case TxCode::NotEligible: return "NotEligible";
        case TxCode::Duplicate: return "Duplicate";
        case TxCode::BadDeposit: return "BadDeposit";
        case TxCode::OutOfOrderBatch: return "OutOfOrderBatch";
        case TxCode::AlreadyVoted: return "AlreadyVoted";
        case TxCode::InvalidProof: return "InvalidProof";
        case TxCode::WrongPair: return "WrongPair";
        case TxCode::MissingShares: return "MissingShares";
        case TxCode::MalformedTally: return "MalformedTally";
        case TxCode::RejectedTally: return "RejectedTally";
        case TxCode::NotAuthority: return "NotAuthority";
        case TxCode::TooFewVoters: return "TooFewVoters";
        case TxCode::UnknownBooth: return "UnknownBooth";
        case TxCode::DuplicateBooth: return "DuplicateBooth";
        case TxCode::InconsistentLists: return "InconsistentLists";
        case TxCode::ExceedsBlockLimit: return "ExceedsBlockLimit";
    }
    return "?";
}

long long Tally::total() const { return std::accumulate(counts.begin(), counts.end(), 0LL); }

json Tally::to_json() const { return json{{"counts", counts}}; }

Tally Tally::from_json(const json& j) {
    Tally t;
    t.counts = j.at("counts").get<std::vector<long long>>();
    return t;
}

int BoothState::num_batches() const {
    if (mpc_batch <= 0) return 0;
    return (n() + mpc_batch - 1) / mpc_batch;
}

std::optional<int> BoothState::index_of(const std::string& addr) const {
    for (int i = 0; i < n(); ++i)
        if (signed_up[i].first == addr) return i;
    return std::nullopt;
}

std::vector<int> BoothState::active_indices() const {
    std::vector<int> out;
    for (const auto& [i, _] : votes)
        if (!stalled.count(i)) out.push_back(i);
    return out;
}

const BigInt& BoothState::counted_vote(int i) const {
    auto it = repaired.find(i);
    return it != repaired.end() ? it->second : votes.at(i);
}

BoothState make_booth(std::string booth_id, GroupParams params, long long deposit_amount,
                      long long deposit_escalation) {
    BoothState st;
    st.booth_id = std::move(booth_id);
    st.params = std::move(params);
    st.deposit_amount = deposit_amount;
    st.deposit_escalation = deposit_escalation;
    return st;
}

TxResult sign_up(BoothState& st, const std::string& addr, const BigInt& pk,
                 long long deposit, const EligibilityFn& eligible, Meter* meter) {
    if (st.phase != Phase::SignUp) return TxResult::fail(TxCode::WrongPhase);
    if (meter) meter->reads += 1;  // eligibility query against MC
    if (!eligible(st.booth_id, addr)) return TxResult::fail(TxCode::NotEligible, addr);
    if (st.index_of(addr)) return TxResult::fail(TxCode::Duplicate, addr);
    if (deposit != st.deposit_amount) return TxResult::fail(TxCode::BadDeposit);
    st.signed_up.emplace_back(addr, pk);
    if (meter) meter->writes += 2;  // pk append + deposit escrow
    return TxResult::success();
}

TxResult precompute_right_markers(BoothState& st, int mpc_batch, Meter* meter) {
    if (st.phase != Phase::SignUp) return TxResult::fail(TxCode::WrongPhase);
    if (mpc_batch < 1) return TxResult::fail(TxCode::OutOfOrderBatch, "mpc_batch must be >= 1");
    if (st.n() < 3) return TxResult::fail(TxCode::TooFewVoters);

    Group G(st.params, meter);
    st.mpc_batch = mpc_batch;
    int nb = st.num_batches();
    st.right_markers.assign(nb, 1);
    // Sweep from the back, snapshotting the running product at each batch
    // boundary: marker[b] = prod of pks strictly after batch b's end.
    BigInt acc = 1;
    for (int b = nb - 1; b >= 0; --b) {
        st.right_markers[b] = acc;
        int s = b * mpc_batch;
        int e = std::min(st.n(), s + mpc_batch) - 1;
        for (int j = e; j >= s; --j) {
            if (meter) meter->reads += 1;
            acc = G.mul(acc, st.signed_up[j].second);
        }
    }
    if (meter) meter->writes += nb + 1;  // markers + act_left init
    st.act_left = 1;
    st.batches_done = 0;
    st.mpc_keys.assign(st.n(), 0);
    st.phase = Phase::PreVoting;
    return TxResult::success();
}

TxResult compute_mpc_batch(BoothState& st, int batch_index, Meter* meter) {
    if (st.phase != Phase::PreVoting) return TxResult::fail(TxCode::WrongPhase);
    if (batch_index != st.batches_done) return TxResult::fail(TxCode::OutOfOrderBatch);

    Group G(st.params, meter);
    int s = batch_index * st.mpc_batch;
    int e = std::min(st.n(), s + st.mpc_batch) - 1;
    if (meter) meter->reads += 2;  // marker + act_left

    BigInt left = st.act_left;  // prod of pks before this batch
    for (int i = s; i <= e; ++i) {
        // Right side rebuilt from the batch marker for each voter; the
        // intermediate values are transient, only markers persist.
        BigInt right = st.right_markers[batch_index];
        for (int j = e; j > i; --j) {
            if (meter) meter->reads += 1;
            right = G.mul(right, st.signed_up[j].second);
        }
        st.mpc_keys[i] = G.div(left, right);
        if (meter) {
            meter->reads += 1;
            meter->writes += 1;
        }
        left = G.mul(left, st.signed_up[i].second);
    }
    st.act_left = left;
    st.batches_done = batch_index + 1;
    if (meter) meter->writes += 1;  // act_left carry
    if (st.batches_done == st.num_batches()) st.phase = Phase::Voting;
    return TxResult::success();
}

TxResult cast_vote(BoothState& st, int voter_index, const BigInt& vote,
                   const MembershipProof& proof, Meter* meter) {
    if (st.phase != Phase::Voting) return TxResult::fail(TxCode::WrongPhase);
    if (voter_index < 0 || voter_index >= st.n())
        return TxResult::fail(TxCode::NotEligible, "unknown voter index");
    if (st.votes.count(voter_index)) return TxResult::fail(TxCode::AlreadyVoted);

    Group G(st.params, meter);
    if (meter) meter->reads += 2;  // pk + mpc key
    const BigInt& pk = st.signed_up[voter_index].second;
    const BigInt& h = st.mpc_keys[voter_index];
    if (!verify_membership(G, pk, h, vote, proof)) return TxResult::fail(TxCode::InvalidProof);
    st.votes[voter_index] = vote;
    if (meter) meter->writes += 1;
    return TxResult::success();
}

TxResult open_fault_recovery(BoothState& st, Meter* meter) {
    if (st.phase == Phase::Voting) {
        std::set<int> missing;
        for (int i = 0; i < st.n(); ++i)
            if (!st.votes.count(i)) missing.insert(i);
        if (missing.empty()) {
            st.phase = Phase::Tally;
            return TxResult::success();
        }
        st.stalled = missing;
        st.forfeited.insert(missing.begin(), missing.end());
        st.recovery_round = 1;
        st.phase = Phase::FaultRecovery;
        if (meter) meter->writes += missing.size();
        return TxResult::success();
    }
    if (st.phase == Phase::FaultRecovery) {
        // Round deadline: actives who withheld shares become stalled too.
        std::set<int> newly;
        for (int i : st.active_indices())
            for (int j : st.stalled)
                if (!st.shares.count({i, j})) newly.insert(i);
        for (int i : newly) {
            st.stalled.insert(i);
            st.forfeited.insert(i);
        }
        st.recovery_round += 1;
        if (meter) meter->writes += newly.size();
        return TxResult::success();
    }
    return TxResult::fail(TxCode::WrongPhase);
}

TxResult submit_share(BoothState& st, int i, int j, const BigInt& share,
                      const DHProof& proof, Meter* meter) {
    if (st.phase != Phase::FaultRecovery) return TxResult::fail(TxCode::WrongPhase);
    if (i < 0 || i >= st.n() || j < 0 || j >= st.n()) return TxResult::fail(TxCode::WrongPair);
    bool i_active = st.votes.count(i) && !st.stalled.count(i);
    if (!i_active || !st.stalled.count(j)) return TxResult::fail(TxCode::WrongPair);
    if (st.shares.count({i, j})) return TxResult::fail(TxCode::Duplicate);

    Group G(st.params, meter);
    if (meter) meter->reads += 2;
    if (!verify_dh(G, st.signed_up[i].second, st.signed_up[j].second, proof) ||
        proof.C != share)
        return TxResult::fail(TxCode::InvalidProof);
    st.shares[{i, j}] = share;
    // Recovery rounds may demand an escalating deposit on top of the base one.
    if (st.deposit_escalation > 0 && st.recovery_round > 0) {
        long long owed = st.deposit_escalation * st.recovery_round;
        auto& paid = st.extra_escrow[i];
        if (paid < owed) paid = owed;
    }
    if (meter) meter->writes += 1;
    return TxResult::success();
}

TxResult repair_votes(BoothState& st, Meter* meter) {
    if (st.phase != Phase::FaultRecovery) return TxResult::fail(TxCode::WrongPhase);
    std::vector<std::pair<int, int>> missing;
    for (int i : st.active_indices())
        for (int j : st.stalled)
            if (!st.shares.count({i, j})) missing.emplace_back(i, j);
    if (!missing.empty()) {
        std::string detail;
        for (auto [i, j] : missing)
            detail += "(" + std::to_string(i) + "," + std::to_string(j) + ")";
        return TxResult::fail(TxCode::MissingShares, detail);
    }

    Group G(st.params, meter);
    st.repaired.clear();
    for (int i : st.active_indices()) {
        // y_i = sum_{j<i} x_j - sum_{j>i} x_j: dropping a stalled j<i divides
        // the blinding term by g^(x_i x_j); dropping j>i multiplies it back.
        BigInt v = st.votes.at(i);
        if (meter) meter->reads += 1;
        for (int j : st.stalled) {
            const BigInt& c = st.shares.at({i, j});
            if (meter) meter->reads += 1;
            v = j > i ? G.mul(v, c) : G.div(v, c);
        }
        st.repaired[i] = v;
        if (meter) meter->writes += 1;
    }
    st.phase = Phase::Tally;
    return TxResult::success();
}

TxResult verify_booth_tally(BoothState& st, const Tally& claimed, Meter* meter) {
    if (st.phase != Phase::Tally) return TxResult::fail(TxCode::WrongPhase);
    if (static_cast<int>(claimed.counts.size()) != st.params.k)
        return TxResult::fail(TxCode::MalformedTally, "wrong candidate count");
    for (long long c : claimed.counts)
        if (c < 0) return TxResult::fail(TxCode::MalformedTally, "negative count");
    long long counted = static_cast<long long>(st.active_indices().size());
    if (claimed.total() != counted)
        return TxResult::fail(TxCode::MalformedTally, "counts do not sum to votes");

    Group G(st.params, meter);
    BigInt lhs = vote_product(st, meter);
    BigInt rhs = 1;
    for (int l = 0; l < st.params.k; ++l)
        rhs = G.mul(rhs, G.pow(st.params.candidates[l], claimed.counts[l]));
    if (lhs != rhs) return TxResult::fail(TxCode::RejectedTally);
    st.tally = claimed;
    st.phase = Phase::Closed;
    if (meter) meter->writes += 1;
    return TxResult::success();
}

TxResult void_booth(BoothState& st) {
    if (st.phase == Phase::Closed) return TxResult::fail(TxCode::WrongPhase);
    st.voided = true;
    st.phase = Phase::Closed;
    return TxResult::success();
}

BigInt vote_product(const BoothState& st, Meter* meter) {
    Group G(st.params, meter);
    BigInt acc = 1;
    for (int i : st.active_indices()) {
        if (meter) meter->reads += 1;
        acc = G.mul(acc, st.counted_vote(i));
    }
    return acc;
}

json BoothState::to_json() const {
    json su = json::array();
    for (const auto& [addr, pk] : signed_up) su.push_back({addr, to_dec(pk)});
    json markers = json::array();
    for (const auto& v : right_markers) markers.push_back(to_dec(v));
    json keys = json::array();
    for (const auto& v : mpc_keys) keys.push_back(to_dec(v));
    json jvotes = json::object();
    for (const auto& [i, v] : votes) jvotes[std::to_string(i)] = to_dec(v);
    json jrep = json::object();
    for (const auto& [i, v] : repaired) jrep[std::to_string(i)] = to_dec(v);
    json jshares = json::array();
    for (const auto& [ij, v] : shares) jshares.push_back({ij.first, ij.second, to_dec(v)});
    json jextra = json::object();
    for (const auto& [i, v] : extra_escrow) jextra[std::to_string(i)] = v;
    json j{{"booth_id", booth_id},
           {"params", params.to_json()},
           {"phase", phase_name(phase)},
           {"voided", voided},
           {"deposit_amount", deposit_amount},
           {"deposit_escalation", deposit_escalation},
           {"signed_up", su},
           {"mpc_batch", mpc_batch},
           {"right_markers", markers},
           {"act_left", to_dec(act_left)},
           {"batches_done", batches_done},
           {"mpc_keys", keys},
           {"votes", jvotes},
           {"repaired", jrep},
           {"stalled", std::vector<int>(stalled.begin(), stalled.end())},
           {"forfeited", std::vector<int>(forfeited.begin(), forfeited.end())},
           {"recovery_round", recovery_round},
           {"shares", jshares},
           {"extra_escrow", jextra}};
    if (tally) j["tally"] = tally->to_json();
    return j;
}

BoothState BoothState::from_json(const json& j) {
    BoothState st;
    st.booth_id = j.at("booth_id").get<std::string>();
    st.params = GroupParams::from_json(j.at("params"));
    st.phase = phase_from_name(j.at("phase").get<std::string>());
    st.voided = j.at("voided").get<bool>();
    st.deposit_amount = j.at("deposit_amount").get<long long>();
    st.deposit_escalation = j.at("deposit_escalation").get<long long>();
    for (const auto& e : j.at("signed_up"))
        st.signed_up.emplace_back(e.at(0).get<std::string>(), from_dec(e.at(1).get<std::string>()));
    st.mpc_batch = j.at("mpc_batch").get<int>();
    for (const auto& v : j.at("right_markers")) st.right_markers.push_back(from_dec(v.get<std::string>()));
    st.act_left = from_dec(j.at("act_left").get<std::string>());
    st.batches_done = j.at("batches_done").get<int>();
    for (const auto& v : j.at("mpc_keys")) st.mpc_keys.push_back(from_dec(v.get<std::string>()));
    for (const auto& [key, v] : j.at("votes").items()) st.votes[std::stoi(key)] = from_dec(v.get<std::string>());
    for (const auto& [key, v] : j.at("repaired").items()) st.repaired[std::stoi(key)] = from_dec(v.get<std::string>());
    for (const auto& v : j.at("stalled")) st.stalled.insert(v.get<int>());
    for (const auto& v : j.at("forfeited")) st.forfeited.insert(v.get<int>());
    st.recovery_round = j.at("recovery_round").get<int>();
    for (const auto& e : j.at("shares"))
        st.shares[{e.at(0).get<int>(), e.at(1).get<int>()}] = from_dec(e.at(2).get<std::string>());
    for (const auto& [key, v] : j.at("extra_escrow").items()) st.extra_escrow[std::stoi(key)] = v.get<long long>();
    if (j.contains("tally")) st.tally = Tally::from_json(j.at("tally"));
    return st;
}

}  // namespace bv
