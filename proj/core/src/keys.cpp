#include "bv/keys.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bv/rng.hpp"

namespace bv {

using nlohmann::json;

VoterKeypair keygen(const GroupParams& params, const std::string& seed) {
    Drbg rng(seed, "keys/keygen");
    VoterKeypair kp;
    kp.election_id = params.election_id;
    kp.x = rng.scalar_nonzero(params.exp_mod);
    kp.pk = Group(params).pow(params.g, kp.x);
    return kp;
}

BigInt derive_blinding_key(const GroupParams& params, const VoterKeypair& kp,
                           const BigInt& mpc_key) {
    if (kp.election_id != params.election_id)
        throw std::invalid_argument("keypair belongs to a different election");
    return Group(params).pow(mpc_key, kp.x);
}

json VoterKeypair::to_json() const {
    return json{{"election_id", election_id}, {"x", to_dec(x)}, {"pk", to_dec(pk)}};
}

VoterKeypair VoterKeypair::from_json(const json& j) {
    VoterKeypair kp;
    kp.election_id = j.at("election_id").get<std::string>();
    kp.x = from_dec(j.at("x").get<std::string>());
    kp.pk = from_dec(j.at("pk").get<std::string>());
    return kp;
}

}  // namespace bv
