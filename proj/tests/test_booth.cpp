#include <doctest.h>

#include <nlohmann/json.hpp>

#include "bv/booth.hpp"
#include "bv/keys.hpp"
#include "bv/zkp.hpp"

using bv::BigInt;

namespace {

const bool kAny = true;

bv::EligibilityFn allow_all() {
    return [](const std::string&, const std::string&) { return kAny; };
}

struct Rig {
    bv::GroupParams P;
    bv::BoothState st;
    std::vector<bv::VoterKeypair> kps;

    Rig(int n, int k, long long dep = 100, long long esc = 0)
        : P(bv::params_from_prime(bv::pinned_prime_64(), 5, 1000, k, "booth-test")),
          st(bv::make_booth("b0", P, dep, esc)) {
        for (int i = 0; i < n; ++i) {
            kps.push_back(bv::keygen(P, "voter-" + std::to_string(i)));
            REQUIRE(bv::sign_up(st, "v" + std::to_string(i), kps[i].pk, dep, allow_all()).ok());
        }
    }

    void run_mpc(int batch) {
        REQUIRE(bv::precompute_right_markers(st, batch).ok());
        for (int b = 0; b < st.num_batches(); ++b)
            REQUIRE(bv::compute_mpc_batch(st, b).ok());
        REQUIRE(st.phase == bv::Phase::Voting);
    }

    void vote(int i, int choice) {
        const BigInt& h = st.mpc_keys[i];
        auto bvp = bv::prove_membership(P, kps[i], h, choice, "pf-" + std::to_string(i));
        REQUIRE(bv::cast_vote(st, i, bvp.vote, bvp.proof).ok());
    }

    void share(int i, int j) {
        auto pf = bv::prove_dh(P, kps[i], kps[j].pk,
                               "sh-" + std::to_string(i) + "-" + std::to_string(j));
        REQUIRE(bv::submit_share(st, i, j, pf.C, pf).ok());
    }
};

BigInt direct_mpc_key(const bv::GroupParams& P, const std::vector<bv::VoterKeypair>& kps, int i) {
    bv::Group G(P);
    BigInt left = 1, right = 1;
    for (int j = 0; j < i; ++j) left = G.mul(left, kps[j].pk);
    for (int j = i + 1; j < static_cast<int>(kps.size()); ++j) right = G.mul(right, kps[j].pk);
    return G.div(left, right);
}

}  // namespace

TEST_CASE("sign-up guards") {
    Rig rig(3, 2);
    auto extra = bv::keygen(rig.P, "extra");
    CHECK(bv::sign_up(rig.st, "v0", extra.pk, 100, allow_all()).code == bv::TxCode::Duplicate);
    CHECK(bv::sign_up(rig.st, "v9", extra.pk, 99, allow_all()).code == bv::TxCode::BadDeposit);
    auto deny = [](const std::string&, const std::string&) { return false; };
    CHECK(bv::sign_up(rig.st, "v9", extra.pk, 100, deny).code == bv::TxCode::NotEligible);
    REQUIRE(bv::precompute_right_markers(rig.st, 2).ok());
    CHECK(bv::sign_up(rig.st, "v9", extra.pk, 100, allow_all()).code == bv::TxCode::WrongPhase);
    // failed sign-up left the roster untouched
    CHECK(rig.st.n() == 3);
}

TEST_CASE("right markers are suffix products at batch boundaries") {
    Rig rig(5, 2);
    bv::Group G(rig.P);
    REQUIRE(bv::precompute_right_markers(rig.st, 2).ok());
    REQUIRE(rig.st.right_markers.size() == 3);  // batches {0,1},{2,3},{4}
    CHECK(rig.st.right_markers[0] ==
          G.mul(G.mul(rig.kps[2].pk, rig.kps[3].pk), rig.kps[4].pk));
    CHECK(rig.st.right_markers[1] == rig.kps[4].pk);
    CHECK(rig.st.right_markers[2] == 1);
}

TEST_CASE("too few voters cannot leave sign-up") {
    auto P = bv::fixture_p23();
    auto st = bv::make_booth("tiny", P, 0);
    auto kp = bv::keygen(P, "only");
    REQUIRE(bv::sign_up(st, "v0", kp.pk, 0, allow_all()).ok());
    CHECK(bv::precompute_right_markers(st, 1).code == bv::TxCode::TooFewVoters);
}

TEST_CASE("batched mpc equals the direct formula for every batch size") {
    for (int batch : {1, 2, 3, 5, 7}) {
        Rig rig(7, 2);
        rig.run_mpc(batch);
        for (int i = 0; i < 7; ++i)
            CHECK(rig.st.mpc_keys[i] == direct_mpc_key(rig.P, rig.kps, i));
    }
}

TEST_CASE("mpc batches must run in order") {
    Rig rig(4, 2);
    REQUIRE(bv::precompute_right_markers(rig.st, 2).ok());
    CHECK(bv::compute_mpc_batch(rig.st, 1).code == bv::TxCode::OutOfOrderBatch);
    REQUIRE(bv::compute_mpc_batch(rig.st, 0).ok());
    CHECK(bv::compute_mpc_batch(rig.st, 0).code == bv::TxCode::OutOfOrderBatch);
    REQUIRE(bv::compute_mpc_batch(rig.st, 1).ok());
    CHECK(rig.st.phase == bv::Phase::Voting);
    CHECK(bv::compute_mpc_batch(rig.st, 2).code == bv::TxCode::WrongPhase);
}

TEST_CASE("vote gating: proof, duplicates, phase") {
    Rig rig(3, 2);
    rig.run_mpc(1);
    rig.vote(0, 1);
    bv::Group G(rig.P);
    auto bvp = bv::prove_membership(rig.P, rig.kps[0], rig.st.mpc_keys[0], 2, "again");
    CHECK(bv::cast_vote(rig.st, 0, bvp.vote, bvp.proof).code == bv::TxCode::AlreadyVoted);
    // proof bound to voter 0 fails for voter 1
    CHECK(bv::cast_vote(rig.st, 1, bvp.vote, bvp.proof).code == bv::TxCode::InvalidProof);
    CHECK(rig.st.votes.size() == 1);
    CHECK(bv::cast_vote(rig.st, 7, bvp.vote, bvp.proof).code == bv::TxCode::NotEligible);
}

TEST_CASE("full-participation tally verifies; wrong tally rejects") {
    Rig rig(5, 3);
    rig.run_mpc(2);
    std::vector<int> choices = {1, 3, 2, 3, 3};
    for (int i = 0; i < 5; ++i) rig.vote(i, choices[i]);
    REQUIRE(bv::open_fault_recovery(rig.st).ok());  // no stallers -> Tally
    CHECK(rig.st.phase == bv::Phase::Tally);

    CHECK(bv::verify_booth_tally(rig.st, bv::Tally{{1, 1, 2}}).code ==
          bv::TxCode::MalformedTally);  // wrong sum
    CHECK(bv::verify_booth_tally(rig.st, bv::Tally{{1, 2}}).code == bv::TxCode::MalformedTally);
    CHECK(bv::verify_booth_tally(rig.st, bv::Tally{{6, -1, 0}}).code ==
          bv::TxCode::MalformedTally);
    CHECK(bv::verify_booth_tally(rig.st, bv::Tally{{2, 1, 2}}).code == bv::TxCode::RejectedTally);
    CHECK(rig.st.phase == bv::Phase::Tally);  // rejects do not advance
    REQUIRE(bv::verify_booth_tally(rig.st, bv::Tally{{1, 1, 3}}).ok());
    CHECK(rig.st.phase == bv::Phase::Closed);
}

TEST_CASE("fault recovery repairs around a staller") {
    Rig rig(5, 2);
    rig.run_mpc(2);
    for (int i = 0; i < 5; ++i)
        if (i != 2) rig.vote(i, i % 2 + 1);
    REQUIRE(bv::open_fault_recovery(rig.st).ok());
    CHECK(rig.st.phase == bv::Phase::FaultRecovery);
    CHECK(rig.st.stalled == std::set<int>{2});
    CHECK(rig.st.forfeited == std::set<int>{2});

    CHECK(bv::repair_votes(rig.st).code == bv::TxCode::MissingShares);
    for (int i : {0, 1, 3, 4}) rig.share(i, 2);
    REQUIRE(bv::repair_votes(rig.st).ok());
    CHECK(rig.st.phase == bv::Phase::Tally);
    // 0 -> 1, 1 -> 2, 3 -> 2, 4 -> 1
    REQUIRE(bv::verify_booth_tally(rig.st, bv::Tally{{2, 2}}).ok());
    CHECK(rig.st.tally == bv::Tally{{2, 2}});
}

TEST_CASE("share submission guards") {
    Rig rig(4, 2);
    rig.run_mpc(1);
    for (int i : {0, 1, 2}) rig.vote(i, 1);
    auto pf = bv::prove_dh(rig.P, rig.kps[0], rig.kps[3].pk, "early");
    CHECK(bv::submit_share(rig.st, 0, 3, pf.C, pf).code == bv::TxCode::WrongPhase);
    REQUIRE(bv::open_fault_recovery(rig.st).ok());

    CHECK(bv::submit_share(rig.st, 3, 0, pf.C, pf).code == bv::TxCode::WrongPair);
    CHECK(bv::submit_share(rig.st, 0, 1, pf.C, pf).code == bv::TxCode::WrongPair);
    bv::Group G(rig.P);
    CHECK(bv::submit_share(rig.st, 0, 3, G.mul(pf.C, rig.P.g), pf).code ==
          bv::TxCode::InvalidProof);
    REQUIRE(bv::submit_share(rig.st, 0, 3, pf.C, pf).ok());
    CHECK(bv::submit_share(rig.st, 0, 3, pf.C, pf).code == bv::TxCode::Duplicate);
}

TEST_CASE("multi-round recovery stalls share withholders and escalates escrow") {
    Rig rig(5, 2, 100, 50);
    rig.run_mpc(2);
    for (int i = 0; i < 4; ++i) rig.vote(i, 1);  // voter 4 never votes
    REQUIRE(bv::open_fault_recovery(rig.st).ok());
    CHECK(rig.st.stalled == std::set<int>{4});

    // voter 3 withholds its share through round 1
    for (int i : {0, 1, 2}) rig.share(i, 4);
    CHECK(rig.st.extra_escrow.at(0) == 50);  // round-1 escalation
    REQUIRE(bv::open_fault_recovery(rig.st).ok());  // deadline
    CHECK(rig.st.stalled == std::set<int>{3, 4});
    CHECK(rig.st.recovery_round == 2);

    for (int i : {0, 1, 2}) rig.share(i, 3);
    CHECK(rig.st.extra_escrow.at(0) == 100);  // round-2 escalation dominates
    REQUIRE(bv::repair_votes(rig.st).ok());
    REQUIRE(bv::verify_booth_tally(rig.st, bv::Tally{{3, 0}}).ok());
    CHECK(rig.st.forfeited == std::set<int>{3, 4});
}

TEST_CASE("void booth") {
    Rig rig(3, 2);
    REQUIRE(bv::void_booth(rig.st).ok());
    CHECK(rig.st.voided);
    CHECK(rig.st.phase == bv::Phase::Closed);
    CHECK(bv::void_booth(rig.st).code == bv::TxCode::WrongPhase);
}

TEST_CASE("booth state json round-trip mid-recovery") {
    Rig rig(4, 2);
    rig.run_mpc(3);
    for (int i = 0; i < 3; ++i) rig.vote(i, 2);
    REQUIRE(bv::open_fault_recovery(rig.st).ok());
    rig.share(0, 3);
    auto j = rig.st.to_json();
    auto back = bv::BoothState::from_json(j);
    CHECK(back.to_json() == j);
    // the round-tripped state keeps working
    for (int i : {1, 2}) {
        auto pf = bv::prove_dh(rig.P, rig.kps[i], rig.kps[3].pk, "rt-" + std::to_string(i));
        REQUIRE(bv::submit_share(back, i, 3, pf.C, pf).ok());
    }
    REQUIRE(bv::repair_votes(back).ok());
    REQUIRE(bv::verify_booth_tally(back, bv::Tally{{0, 3}}).ok());
}
