#include <doctest.h>

#include <nlohmann/json.hpp>

#include "bv/group.hpp"
#include "bv/rng.hpp"

using bv::BigInt;

TEST_CASE("smallest_m") {
    CHECK(bv::smallest_m(1) == 1);
    CHECK(bv::smallest_m(3) == 2);
    CHECK(bv::smallest_m(4) == 3);
    CHECK(bv::smallest_m(7) == 3);
    CHECK(bv::smallest_m(8) == 4);
    CHECK(bv::smallest_m(1000) == 10);
    CHECK_THROWS_AS(bv::smallest_m(0), std::invalid_argument);
}

TEST_CASE("p23 fixture candidate generators") {
    const auto& P = bv::fixture_p23();
    CHECK(P.p == 23);
    CHECK(P.q == 11);
    CHECK(P.g == 5);
    CHECK(P.exp_mod == 22);
    CHECK(P.m == 2);
    REQUIRE(P.candidates.size() == 2);
    CHECK(P.candidates[0] == 5);  // g^(2^0)
    CHECK(P.candidates[1] == 4);  // g^(2^2) = 625 mod 23
}

TEST_CASE("params_from_prime validation") {
    CHECK_THROWS_AS(bv::params_from_prime(25, 5, 3, 2, "e"), std::invalid_argument);
    CHECK_THROWS_AS(bv::params_from_prime(29, 2, 3, 2, "e"), std::invalid_argument);  // not safe
    CHECK_THROWS_AS(bv::params_from_prime(23, 2, 3, 2, "e"), std::invalid_argument);  // QR
    CHECK_THROWS_AS(bv::params_from_prime(23, 22, 3, 2, "e"), std::invalid_argument);  // order 2
    // packing budget: k*m = 3*2 = 6 needs 2^6 <= 22 -- no
    CHECK_THROWS_AS(bv::params_from_prime(23, 5, 3, 3, "e"), std::invalid_argument);
    CHECK_THROWS_AS(bv::params_from_prime(23, 5, 2, 2, "e"), std::invalid_argument);  // n_max < 3
}

TEST_CASE("pinned 64-bit prime is a safe prime with generator 5") {
    BigInt p = bv::pinned_prime_64();
    auto P = bv::params_from_prime(p, 5, 1000, 4, "e64");
    CHECK(P.q == (p - 1) / 2);
    CHECK(P.m == 10);
    bv::Group G(P);
    CHECK(G.pow(P.g, P.exp_mod) == 1);
    CHECK(G.pow(P.g, P.q) != 1);
}

TEST_CASE("generate_params is deterministic and well-formed") {
    auto A = bv::generate_params(32, 10, 2, "seed-a", "el");
    auto B = bv::generate_params(32, 10, 2, "seed-a", "el");
    CHECK(A.p == B.p);
    CHECK(A.g == B.g);
    CHECK(bv::bit_length(A.p) == 32);
    auto C = bv::generate_params(32, 10, 2, "seed-b", "el");
    CHECK(A.p != C.p);  // overwhelmingly likely; pinned by determinism anyway
    // distinct candidate generators
    CHECK(A.candidates[0] != A.candidates[1]);
}

TEST_CASE("group arithmetic and metering") {
    const auto& P = bv::fixture_p23();
    bv::Meter m;
    bv::Group G(P, &m);
    CHECK(G.pow(5, 3) == 10);
    CHECK(m.exps == 1);
    CHECK(G.mul(15, 12) == (15 * 12) % 23);
    CHECK(m.muls == 1);
    CHECK(G.mul(20, G.inv(20)) == 1);
    CHECK(G.div(1, 20) == 15);  // 20 * 15 = 300 = 1 mod 23
    // negative exponent is an inverse power
    CHECK(G.mul(G.pow(5, -3), G.pow(5, 3)) == 1);
    // exponents reduce mod p-1
    CHECK(G.pow(5, 25) == G.pow(5, 3));
    CHECK_THROWS_AS(G.pow(0, 3), std::invalid_argument);
}

TEST_CASE("GroupParams json round-trip is canonical") {
    const auto& P = bv::fixture_p23();
    auto j = P.to_json();
    auto Q = bv::GroupParams::from_json(j);
    CHECK(Q.to_json() == j);
    CHECK(Q.canonical() == P.canonical());
    // nlohmann dumps objects with sorted keys: statement hashing relies on it
    CHECK(P.canonical().find("\"election_id\"") < P.canonical().find("\"exp_mod\""));
}

TEST_CASE("drbg frozen vectors") {
    bv::Drbg d("abc", "lbl");
    std::vector<int> got;
    for (int i = 0; i < 5; ++i) got.push_back(static_cast<int>(d.below(22)));
    CHECK(got == std::vector<int>{12, 1, 8, 2, 13});

    bv::Drbg d2("abc", "lbl");
    auto bs = d2.bytes(8);
    static const std::uint8_t want[8] = {0x6c, 0x21, 0xa8, 0x3f, 0x22, 0x0d, 0xbe, 0x3b};
    CHECK(std::equal(bs.begin(), bs.end(), want));

    // below() output is in range and scalar_nonzero avoids 0
    bv::Drbg d3("abc", "other");
    for (int i = 0; i < 200; ++i) {
        BigInt v = d3.below(7);
        CHECK(v >= 0);
        CHECK(v < 7);
        BigInt s = d3.scalar_nonzero(22);
        CHECK(s >= 1);
        CHECK(s < 22);
    }
    CHECK(bv::Drbg::derive("s", "a") != bv::Drbg::derive("s", "b"));
}
