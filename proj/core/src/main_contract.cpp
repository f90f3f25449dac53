#include "bv/main_contract.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bv/rng.hpp"

namespace bv {

using nlohmann::json;

std::string deposit_status_name(DepositStatus s) {
    switch (s) {
        case DepositStatus::Escrowed: return "Escrowed";
        case DepositStatus::Refundable: return "Refundable";
        case DepositStatus::Forfeit: return "Forfeit";
        case DepositStatus::Refunded: return "Refunded";
    }
    return "?";
}

namespace {

DepositStatus deposit_status_from_name(const std::string& s) {
    for (DepositStatus st : {DepositStatus::Escrowed, DepositStatus::Refundable,
                             DepositStatus::Forfeit, DepositStatus::Refunded})
        if (deposit_status_name(st) == s) return st;
    throw std::invalid_argument("unknown deposit status: " + s);
}

}  // namespace

MainState make_main(std::string election_id, std::string authority, int k) {
    MainState st;
    st.election_id = std::move(election_id);
    st.authority = std::move(authority);
    st.k = k;
    return st;
}

TxResult enroll_batch(MainState& st, const std::string& caller,
                      const std::vector<std::string>& addresses, EnrollOutcome* outcome,
                      Meter* meter) {
    if (caller != st.authority) return TxResult::fail(TxCode::NotAuthority);
    if (st.enrollment_closed) return TxResult::fail(TxCode::WrongPhase, "enrollment closed");
    std::set<std::string> seen(st.enrolled.begin(), st.enrolled.end());
    for (const auto& a : addresses) {
        if (meter) meter->reads += 1;
        if (seen.count(a)) {
            if (outcome) outcome->rejected.push_back(a);
            continue;
        }
        seen.insert(a);
        st.enrolled.push_back(a);
        if (outcome) outcome->accepted += 1;
        if (meter) meter->writes += 1;
    }
    return TxResult::success();
}

TxResult assign_groups(MainState& st, const std::string& caller, int group_size,
                       const std::string& seed, int bits, Meter* meter) {
    if (caller != st.authority) return TxResult::fail(TxCode::NotAuthority);
    if (!st.assignment.empty()) return TxResult::fail(TxCode::WrongPhase, "already assigned");
    if (group_size < 3) return TxResult::fail(TxCode::TooFewVoters, "group_size must be >= 3");
    int total = static_cast<int>(st.enrolled.size());
    if (total < 3) return TxResult::fail(TxCode::TooFewVoters);

    // Seeded Fisher-Yates over the enrollment order.
    std::vector<std::string> order = st.enrolled;
    Drbg rng(seed, "assign/shuffle");
    for (int i = total - 1; i > 0; --i) {
        int j = static_cast<int>(rng.below(i + 1));
        std::swap(order[i], order[j]);
    }

    std::vector<std::vector<std::string>> groups;
    for (int s = 0; s < total; s += group_size) {
        int e = std::min(total, s + group_size);
        groups.emplace_back(order.begin() + s, order.begin() + e);
    }
    // Remainder rebalancing: top the short last group up to 3 by taking one
    // member from each preceding group that stays >= 3 after giving.
    if (groups.size() > 1 && static_cast<int>(groups.back().size()) < 3) {
        auto& last = groups.back();
        for (int gi = static_cast<int>(groups.size()) - 2;
             gi >= 0 && static_cast<int>(last.size()) < 3; --gi) {
            if (static_cast<int>(groups[gi].size()) > 3) {
                last.push_back(groups[gi].back());
                groups[gi].pop_back();
            }
        }
        if (static_cast<int>(last.size()) < 3) {
            // No donors to spare; fold the remainder into the previous group.
            auto& prev = groups[groups.size() - 2];
            prev.insert(prev.end(), last.begin(), last.end());
            groups.pop_back();
        }
    }

    st.enrollment_closed = true;
    st.group_size = group_size;
    st.assignment_seed = seed;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        BoothDescriptor bd;
        bd.booth_id = "booth-" + std::to_string(gi);
        bd.members = groups[gi];
        bd.params = generate_params(bits, static_cast<int>(groups[gi].size()), st.k,
                                    Drbg::derive(seed, "params/" + bd.booth_id),
                                    st.election_id);
        for (const auto& a : bd.members) {
            st.assignment[a] = bd.booth_id;
            if (meter) meter->writes += 1;
        }
        st.booths[bd.booth_id] = std::move(bd);
        if (meter) meter->writes += 1;
    }
    return TxResult::success();
}

bool is_eligible(const MainState& st, const std::string& booth_id, const std::string& addr) {
    if (!st.booths.count(booth_id)) throw std::out_of_range("unknown booth: " + booth_id);
    auto it = st.assignment.find(addr);
    return it != st.assignment.end() && it->second == booth_id;
}

TxResult record_deposit(MainState& st, const std::string& voter, long long amount) {
    if (st.deposits.count(voter)) return TxResult::fail(TxCode::Duplicate, voter);
    st.deposits[voter] = DepositRecord{voter, amount, DepositStatus::Escrowed};
    return TxResult::success();
}

TxResult submit_booth_tally(MainState& st, const std::string& booth_id, const Tally& tally,
                            Meter* meter) {
    if (!st.booths.count(booth_id)) return TxResult::fail(TxCode::UnknownBooth, booth_id);
    if (st.booth_tallies.count(booth_id)) return TxResult::fail(TxCode::DuplicateBooth, booth_id);
    if (static_cast<int>(tally.counts.size()) != st.k)
        return TxResult::fail(TxCode::MalformedTally);
    st.booth_tallies[booth_id] = tally;
    if (meter) meter->writes += 1;
    std::size_t expected = st.booths.size() - st.voided_booths.size();
    if (st.booth_tallies.size() == expected) {
        st.final_tally = partial_tally(st);
        if (meter) meter->writes += 1;
    }
    return TxResult::success();
}

TxResult mark_booth_voided(MainState& st, const std::string& booth_id) {
    if (!st.booths.count(booth_id)) return TxResult::fail(TxCode::UnknownBooth, booth_id);
    st.voided_booths.insert(booth_id);
    return TxResult::success();
}

Tally partial_tally(const MainState& st) {
    Tally sum;
    sum.counts.assign(st.k, 0);
    for (const auto& [_, t] : st.booth_tallies)
        for (int l = 0; l < st.k; ++l) sum.counts[l] += t.counts[l];
    return sum;
}

TxResult settle_deposits(MainState& st, const std::string& booth_id,
                         const std::vector<std::string>& correct_voters,
                         const std::vector<std::string>& forfeiting_voters, Meter* meter) {
    if (!st.booths.count(booth_id)) return TxResult::fail(TxCode::UnknownBooth, booth_id);
    std::set<std::string> correct(correct_voters.begin(), correct_voters.end());
    for (const auto& v : forfeiting_voters) {
        if (correct.count(v)) return TxResult::fail(TxCode::InconsistentLists, v);
        if (!st.deposits.count(v)) return TxResult::fail(TxCode::InconsistentLists, v);
    }
    for (const auto& v : correct_voters)
        if (!st.deposits.count(v)) return TxResult::fail(TxCode::InconsistentLists, v);

    for (const auto& v : correct_voters) {
        auto& rec = st.deposits.at(v);
        if (rec.status == DepositStatus::Escrowed) rec.status = DepositStatus::Refundable;
        if (rec.status == DepositStatus::Refundable) rec.status = DepositStatus::Refunded;
        if (meter) meter->writes += 1;
    }
    for (const auto& v : forfeiting_voters) {
        auto& rec = st.deposits.at(v);
        if (rec.status == DepositStatus::Escrowed) rec.status = DepositStatus::Forfeit;
        if (meter) meter->writes += 1;
    }
    return TxResult::success();
}

json MainState::to_json() const {
    json jbooths = json::object();
    for (const auto& [id, bd] : booths)
        jbooths[id] = json{{"booth_id", bd.booth_id},
                           {"members", bd.members},
                           {"params", bd.params.to_json()}};
    json jtallies = json::object();
    for (const auto& [id, t] : booth_tallies) jtallies[id] = t.to_json();
    json jdeps = json::object();
    for (const auto& [v, rec] : deposits)
        jdeps[v] = json{{"voter", rec.voter},
                        {"amount", rec.amount},
                        {"status", deposit_status_name(rec.status)}};
    json j{{"election_id", election_id},
           {"authority", authority},
           {"k", k},
           {"enrolled", enrolled},
           {"enrollment_closed", enrollment_closed},
           {"group_size", group_size},
           {"assignment_seed", assignment_seed},
           {"assignment", assignment},
           {"booths", jbooths},
           {"voided_booths", std::vector<std::string>(voided_booths.begin(), voided_booths.end())},
           {"booth_tallies", jtallies},
           {"deposits", jdeps}};
    if (final_tally) j["final_tally"] = final_tally->to_json();
    return j;
}

MainState MainState::from_json(const json& j) {
    MainState st;
    st.election_id = j.at("election_id").get<std::string>();
    st.authority = j.at("authority").get<std::string>();
    st.k = j.at("k").get<int>();
    st.enrolled = j.at("enrolled").get<std::vector<std::string>>();
    st.enrollment_closed = j.at("enrollment_closed").get<bool>();
    st.group_size = j.at("group_size").get<int>();
    st.assignment_seed = j.at("assignment_seed").get<std::string>();
    st.assignment = j.at("assignment").get<std::map<std::string, std::string>>();
    for (const auto& [id, b] : j.at("booths").items()) {
        BoothDescriptor bd;
        bd.booth_id = b.at("booth_id").get<std::string>();
        bd.members = b.at("members").get<std::vector<std::string>>();
        bd.params = GroupParams::from_json(b.at("params"));
        st.booths[id] = std::move(bd);
    }
    for (const auto& v : j.at("voided_booths")) st.voided_booths.insert(v.get<std::string>());
    for (const auto& [id, t] : j.at("booth_tallies").items())
        st.booth_tallies[id] = Tally::from_json(t);
    for (const auto& [v, rec] : j.at("deposits").items())
        st.deposits[v] = DepositRecord{rec.at("voter").get<std::string>(),
                                       rec.at("amount").get<long long>(),
                                       deposit_status_from_name(rec.at("status").get<std::string>())};
    if (j.contains("final_tally")) st.final_tally = Tally::from_json(j.at("final_tally"));
    return st;
}

}  // namespace bv
