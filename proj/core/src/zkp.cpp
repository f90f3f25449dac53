#include "bv/zkp.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bv/hash.hpp"
#include "bv/rng.hpp"

namespace bv {

using nlohmann::json;

namespace {

json dec_list(const std::vector<BigInt>& xs) {
    json out = json::array();
    for (const auto& x : xs) out.push_back(to_dec(x));
    return out;
}

std::vector<BigInt> list_dec(const json& j) {
    std::vector<BigInt> out;
    for (const auto& x : j) out.push_back(from_dec(x.get<std::string>()));
    return out;
}

json membership_statement(const GroupParams& P, const BigInt& pk, const BigInt& h,
                          const BigInt& B) {
    return json{{"B", to_dec(B)},   {"candidates", dec_list(P.candidates)},
                {"g", to_dec(P.g)}, {"h", to_dec(h)},
                {"p", to_dec(P.p)}, {"pk", to_dec(pk)}};
}

BigInt membership_challenge(const GroupParams& P, const BigInt& pk, const BigInt& h,
                            const BigInt& B, const std::vector<BigInt>& a,
                            const std::vector<BigInt>& b) {
    ChallengeTranscript t;
    t.domain_tag = "bv/zkp/membership/v1/" + P.election_id;
    t.statement = membership_statement(P, pk, h, B);
    t.commitments = json::array({dec_list(a), dec_list(b)});
    return hash_challenge(t, P.exp_mod);
}

BigInt dh_challenge(const GroupParams& P, const BigInt& pk_i, const BigInt& pk_j,
                    const BigInt& m1, const BigInt& m2) {
    ChallengeTranscript t;
    t.domain_tag = "bv/zkp/dh/v1/" + P.election_id;
    t.statement = json{{"A", to_dec(pk_i)},
                       {"B", to_dec(pk_j)},
                       {"g", to_dec(P.g)},
                       {"p", to_dec(P.p)}};
    t.commitments = json::array({to_dec(m1), to_dec(m2)});
    return hash_challenge(t, P.exp_mod);
}

}  // namespace

std::string ChallengeTranscript::bytes() const {
    return domain_tag + "\n" + statement.dump() + "\n" + commitments.dump();
}

BigInt hash_challenge(const ChallengeTranscript& t, const BigInt& exp_mod) {
    Digest d = sha256(t.bytes());
    BigInt v = 0;
    for (std::uint8_t byte : d) v = (v << 8) | byte;
    return v % exp_mod;
}

BlindedVoteProof prove_membership(const GroupParams& P, const VoterKeypair& kp,
                                  const BigInt& h, int choice, const std::string& seed) {
    if (choice < 1 || choice > P.k) throw std::invalid_argument("choice out of range");
    if (kp.election_id != P.election_id)
        throw std::invalid_argument("keypair belongs to a different election");

    Group G(P);
    Drbg rng(seed, "zkp/membership");
    const int k = P.k;
    const int v = choice - 1;

    BlindedVoteProof out;
    out.vote = G.mul(G.pow(h, kp.x), P.candidates[v]);
    auto& pf = out.proof;
    pf.a.assign(k, 0);
    pf.b.assign(k, 0);
    pf.r.assign(k, 0);
    pf.d.assign(k, 0);

    BigInt w = rng.scalar_nonzero(P.exp_mod);
    for (int l = 0; l < k; ++l) {
        if (l == v) continue;
        // Simulated branch: pick the response first, solve for commitments.
        pf.r[l] = rng.scalar_nonzero(P.exp_mod);
        pf.d[l] = rng.scalar_nonzero(P.exp_mod);
        pf.a[l] = G.mul(G.pow(kp.pk, -pf.d[l]), G.pow(P.g, pf.r[l]));
        BigInt Bf = G.div(out.vote, P.candidates[l]);
        pf.b[l] = G.mul(G.pow(h, pf.r[l]), G.pow(Bf, -pf.d[l]));
    }
    pf.a[v] = G.pow(P.g, w);
    pf.b[v] = G.pow(h, w);

    BigInt c = membership_challenge(P, kp.pk, h, out.vote, pf.a, pf.b);
    BigInt dsum = 0;
    for (int l = 0; l < k; ++l)
        if (l != v) dsum += pf.d[l];
    pf.d[v] = ((c - dsum) % P.exp_mod + P.exp_mod) % P.exp_mod;
    pf.r[v] = (w + kp.x * pf.d[v]) % P.exp_mod;
    return out;
}

bool verify_membership(const Group& G, const BigInt& voter_pk, const BigInt& h,
                       const BigInt& B, const MembershipProof& pf) {
    const GroupParams& P = G.params();
    const std::size_t k = static_cast<std::size_t>(P.k);
    if (pf.a.size() != k || pf.b.size() != k || pf.r.size() != k || pf.d.size() != k)
        throw std::invalid_argument("malformed membership proof: wrong list lengths");

    BigInt c = membership_challenge(P, voter_pk, h, B, pf.a, pf.b);
    BigInt dsum = 0;
    for (const auto& d : pf.d) dsum += d;
    if (dsum % P.exp_mod != c) return false;

    for (std::size_t l = 0; l < k; ++l) {
        if (G.pow(P.g, pf.r[l]) != G.mul(pf.a[l], G.pow(voter_pk, pf.d[l]))) return false;
        BigInt Bf = G.div(B, P.candidates[l]);
        if (G.pow(h, pf.r[l]) != G.mul(pf.b[l], G.pow(Bf, pf.d[l]))) return false;
    }
    return true;
}

DHProof prove_dh(const GroupParams& P, const VoterKeypair& kp_i, const BigInt& pk_j,
                 const std::string& seed) {
    if (kp_i.election_id != P.election_id)
        throw std::invalid_argument("keypair belongs to a different election");
    Group G(P);
    Drbg rng(seed, "zkp/dh");
    BigInt w = rng.scalar_nonzero(P.exp_mod);

    DHProof pf;
    pf.C = G.pow(pk_j, kp_i.x);
    pf.m1 = G.pow(P.g, w);
    pf.m2 = G.pow(pk_j, w);
    BigInt c = dh_challenge(P, kp_i.pk, pk_j, pf.m1, pf.m2);
    pf.r = (w + c * kp_i.x) % P.exp_mod;
    return pf;
}

bool verify_dh(const Group& G, const BigInt& pk_i, const BigInt& pk_j, const DHProof& pf) {
    const GroupParams& P = G.params();
    BigInt c = dh_challenge(P, pk_i, pk_j, pf.m1, pf.m2);
    if (G.pow(P.g, pf.r) != G.mul(pf.m1, G.pow(pk_i, c))) return false;
    if (G.pow(pk_j, pf.r) != G.mul(pf.m2, G.pow(pf.C, c))) return false;
    return true;
}

json MembershipProof::to_json() const {
    return json{{"a", dec_list(a)}, {"b", dec_list(b)}, {"r", dec_list(r)}, {"d", dec_list(d)}};
}

MembershipProof MembershipProof::from_json(const json& j) {
    MembershipProof pf;
    pf.a = list_dec(j.at("a"));
    pf.b = list_dec(j.at("b"));
    pf.r = list_dec(j.at("r"));
    pf.d = list_dec(j.at("d"));
    return pf;
}

json DHProof::to_json() const {
    return json{{"C", to_dec(C)}, {"r", to_dec(r)}, {"m1", to_dec(m1)}, {"m2", to_dec(m2)}};
}

DHProof DHProof::from_json(const json& j) {
    DHProof pf;
    pf.C = from_dec(j.at("C").get<std::string>());
    pf.r = from_dec(j.at("r").get<std::string>());
    pf.m1 = from_dec(j.at("m1").get<std::string>());
    pf.m2 = from_dec(j.at("m2").get<std::string>());
    return pf;
}

}  // namespace bv
