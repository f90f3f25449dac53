#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "bv/group.hpp"

namespace bv {

// Ephemeral one-time voter key pair, bound to a single election.
struct VoterKeypair {
    std::string election_id;
    BigInt x;   // private
    BigInt pk;  // g^x

    nlohmann::json to_json() const;  // test vectors only; never hits the ledger
    static VoterKeypair from_json(const nlohmann::json& j);
};

// x uniform in [1, exp_mod - 1], pk = g^x. Deterministic per seed.
VoterKeypair keygen(const GroupParams& params, const std::string& seed);

// Blinding key g^(x_i y_i) = (mpc_key)^x. Rejects keypairs from a different
// election: ephemeral keys are one-time.
BigInt derive_blinding_key(const GroupParams& params, const VoterKeypair& kp,
                           const BigInt& mpc_key);

}  // namespace bv
