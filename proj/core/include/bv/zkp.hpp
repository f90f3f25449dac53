#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bv/group.hpp"
#include "bv/keys.hpp"

namespace bv {

// Disjunctive sigma-protocol transcript: the blinded vote encrypts one of k
// candidate generators; one branch is real, the k-1 others are simulated.
struct MembershipProof {
    std::vector<BigInt> a;
    std::vector<BigInt> b;
    std::vector<BigInt> r;
    std::vector<BigInt> d;

    nlohmann::json to_json() const;
    static MembershipProof from_json(const nlohmann::json& j);
};

// Chaum-Pedersen style proof that C = g^(x_i x_j) matches both public keys.
struct DHProof {
    BigInt C;
    BigInt r;
    BigInt m1;
    BigInt m2;

    nlohmann::json to_json() const;
    static DHProof from_json(const nlohmann::json& j);
};

// Strong Fiat-Shamir transcript: the challenge binds the full statement and
// the commitments, not only the commitments. Serialization is canonical
// (sorted keys, decimal big-integer strings) so challenges reproduce across
// implementations.
struct ChallengeTranscript {
    std::string domain_tag;
    nlohmann::json statement;
    nlohmann::json commitments;

    std::string bytes() const;  // domain_tag \n statement \n commitments
};

BigInt hash_challenge(const ChallengeTranscript& t, const BigInt& exp_mod);

struct BlindedVoteProof {
    BigInt vote;  // B = h^x * f_choice
    MembershipProof proof;
};

// choice is 1-based in [1, k]. h is the prover's MPC key.
BlindedVoteProof prove_membership(const GroupParams& params, const VoterKeypair& kp,
                                  const BigInt& h, int choice, const std::string& seed);

// Throws std::invalid_argument on malformed list lengths (distinct from a
// verification reject).
bool verify_membership(const Group& G, const BigInt& voter_pk, const BigInt& h,
                       const BigInt& B, const MembershipProof& proof);

DHProof prove_dh(const GroupParams& params, const VoterKeypair& kp_i,
                 const BigInt& pk_j, const std::string& seed);

bool verify_dh(const Group& G, const BigInt& pk_i, const BigInt& pk_j,
               const DHProof& proof);

}  // namespace bv
