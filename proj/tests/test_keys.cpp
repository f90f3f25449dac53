#include <doctest.h>

#include <nlohmann/json.hpp>

#include "bv/keys.hpp"

using bv::BigInt;

TEST_CASE("keygen is deterministic per seed and in range") {
    const auto& P = bv::fixture_p23();
    auto a = bv::keygen(P, "s1");
    auto b = bv::keygen(P, "s1");
    CHECK(a.x == b.x);
    CHECK(a.pk == b.pk);
    CHECK(a.x >= 1);
    CHECK(a.x < P.exp_mod);
    bv::Group G(P);
    CHECK(a.pk == G.pow(P.g, a.x));
    auto c = bv::keygen(P, "s2");
    CHECK(a.x != c.x);
}

TEST_CASE("mpc key identity: product of blinding keys is 1") {
    // h_i = prod_{j<i} pk_j / prod_{j>i} pk_j; sum x_i y_i = 0 exactly, so
    // prod h_i^{x_i} = 1 in every group.
    const auto& P = bv::fixture_p23(2, 3);
    bv::Group G(P);
    std::vector<bv::VoterKeypair> kps;
    for (int i = 0; i < 5; ++i)
        kps.push_back(bv::keygen(P, "id-" + std::to_string(i)));
    BigInt acc = 1;
    for (int i = 0; i < 5; ++i) {
        BigInt left = 1, right = 1;
        for (int j = 0; j < i; ++j) left = G.mul(left, kps[j].pk);
        for (int j = i + 1; j < 5; ++j) right = G.mul(right, kps[j].pk);
        BigInt h = G.div(left, right);
        acc = G.mul(acc, bv::derive_blinding_key(P, kps[i], h));
    }
    CHECK(acc == 1);
}

TEST_CASE("worked three-voter example on p23") {
    const auto& P = bv::fixture_p23();
    bv::Group G(P);
    // x = (1, 2, 3) -> pk = (5, 2, 10)
    std::vector<BigInt> pk = {G.pow(5, 1), G.pow(5, 2), G.pow(5, 3)};
    CHECK(pk == std::vector<BigInt>{5, 2, 10});
    BigInt h1 = G.div(1, G.mul(pk[1], pk[2]));
    BigInt h2 = G.div(pk[0], pk[2]);
    BigInt h3 = G.mul(pk[0], pk[1]);
    CHECK(h1 == 15);
    CHECK(h2 == 12);
    CHECK(h3 == 10);
    bv::VoterKeypair kp{P.election_id, 3, 10};
    CHECK(bv::derive_blinding_key(P, kp, h3) == G.pow(10, 3));
}

TEST_CASE("blinding key derivation rejects cross-election keys") {
    const auto& P = bv::fixture_p23();
    bv::VoterKeypair kp{"some-other-election", 3, 10};
    CHECK_THROWS_AS(bv::derive_blinding_key(P, kp, 10), std::invalid_argument);
}

TEST_CASE("keypair json round-trip") {
    const auto& P = bv::fixture_p23();
    auto kp = bv::keygen(P, "rt");
    auto back = bv::VoterKeypair::from_json(kp.to_json());
    CHECK(back.election_id == kp.election_id);
    CHECK(back.x == kp.x);
    CHECK(back.pk == kp.pk);
}
