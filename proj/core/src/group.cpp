#include "bv/group.hpp"

#include <mutex>
#include <random>
#include <stdexcept>

#include <boost/multiprecision/miller_rabin.hpp>
#include <nlohmann/json.hpp>

#include "bv/rng.hpp"

namespace bv {

using nlohmann::json;

namespace {

bool probably_prime(const BigInt& n) {
    // Fixed-seed witness generator keeps parameter generation reproducible.
    static thread_local std::mt19937_64 gen(0x5eedf00dULL);
    return boost::multiprecision::miller_rabin_test(n, 25, gen);
}

// g generates F_p^* (order 2q) iff g^2 != 1 and g^q != 1.
bool is_generator(const BigInt& g, const BigInt& p, const BigInt& q) {
    using boost::multiprecision::powm;
    return g > 1 && g < p && powm(g, 2, p) != 1 && powm(g, q, p) != 1;
}

}  // namespace

int smallest_m(int n) {
    if (n < 1) throw std::invalid_argument("smallest_m: n must be >= 1");
    int m = 1;
    while ((BigInt(1) << m) <= n) ++m;
    return m;
}

GroupParams params_from_prime(const BigInt& p, const BigInt& g, int n_max, int k,
                              const std::string& election_id) {
    if (n_max < 3) throw std::invalid_argument("n_max must be >= 3");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (n_max >= p - 1) throw std::invalid_argument("n_max must be < p - 1");
    BigInt q = (p - 1) / 2;
    if (!probably_prime(p) || !probably_prime(q) || p != 2 * q + 1)
        throw std::invalid_argument("p must be a safe prime 2q + 1");
    if (!is_generator(g, p, q)) throw std::invalid_argument("g does not generate F_p^*");

    GroupParams P;
    P.election_id = election_id;
    P.p = p;
    P.q = q;
    P.g = g;
    P.exp_mod = p - 1;
    P.k = k;
    P.n_max = n_max;
    P.m = smallest_m(n_max);
    // Packing budget: the aggregate exponent sum ct_l * 2^((l-1)m) must stay
    // below the order of g, otherwise distinct tallies could collide.
    if ((BigInt(1) << (static_cast<long long>(P.k) * P.m)) > P.exp_mod)
        throw std::invalid_argument("k*m exceeds the exponent packing budget");
    for (int i = 1; i <= k; ++i) {
        BigInt e = BigInt(1) << (static_cast<long long>(i - 1) * P.m);
        P.candidates.push_back(boost::multiprecision::powm(P.g, e % P.exp_mod, P.p));
    }
    return P;
}

GroupParams generate_params(int bits, int n_max, int k, const std::string& seed,
                            const std::string& election_id) {
    if (bits < 16) throw std::invalid_argument("bits must be >= 16");
    if (n_max < 3) throw std::invalid_argument("n_max must be >= 3");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (static_cast<long long>(k) * smallest_m(n_max) > bits - 2)
        throw std::invalid_argument("k*m exceeds the exponent packing budget for this bit size");

    Drbg rng(seed, "group/params");
    BigInt top = BigInt(1) << (bits - 2);
    for (int attempt = 0; attempt < 200000; ++attempt) {
        // q has bits-1 bits so p = 2q + 1 has exactly `bits` bits.
        BigInt q = top + rng.below(top);
        if ((q & 1) == 0) q += 1;
        if (!probably_prime(q)) continue;
        BigInt p = 2 * q + 1;
        if (!probably_prime(p)) continue;
        for (BigInt g = 2; g < 1000; ++g) {
            if (is_generator(g, p, q)) return params_from_prime(p, g, n_max, k, election_id);
        }
    }
    throw std::runtime_error("generate_params: no safe prime found at this bit size");
}

const GroupParams& fixture_p23(int k, int n_max) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, GroupParams> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_pair(k, n_max);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, params_from_prime(23, 5, n_max, k, "test-election")).first;
    return it->second;
}

BigInt pinned_prime_64() { return BigInt("9223372036854778487"); }

json GroupParams::to_json() const {
    json cands = json::array();
    for (const auto& f : candidates) cands.push_back(to_dec(f));
    return json{{"election_id", election_id}, {"p", to_dec(p)},     {"q", to_dec(q)},
                {"g", to_dec(g)},             {"exp_mod", to_dec(exp_mod)},
                {"k", k},                     {"m", m},
                {"n_max", n_max},             {"candidates", cands}};
}

GroupParams GroupParams::from_json(const json& j) {
    GroupParams P;
    P.election_id = j.at("election_id").get<std::string>();
    P.p = from_dec(j.at("p").get<std::string>());
    P.q = from_dec(j.at("q").get<std::string>());
    P.g = from_dec(j.at("g").get<std::string>());
    P.exp_mod = from_dec(j.at("exp_mod").get<std::string>());
    P.k = j.at("k").get<int>();
    P.m = j.at("m").get<int>();
    P.n_max = j.at("n_max").get<int>();
    for (const auto& f : j.at("candidates")) P.candidates.push_back(from_dec(f.get<std::string>()));
    return P;
}

std::string GroupParams::canonical() const { return to_json().dump(); }

BigInt Group::pow(const BigInt& base, const BigInt& e) const {
    if (base % P_->p == 0) throw std::invalid_argument("pow: base not in group");
    BigInt er = e % P_->exp_mod;
    if (er < 0) er += P_->exp_mod;
    if (meter_) ++meter_->exps;
    return boost::multiprecision::powm(base % P_->p, er, P_->p);
}

BigInt Group::mul(const BigInt& a, const BigInt& b) const {
    if (meter_) ++meter_->muls;
    return (a * b) % P_->p;
}

BigInt Group::inv(const BigInt& a) const {
    // p is prime, so a^(p-2) inverts any nonzero a.
    if (meter_) ++meter_->exps;
    return boost::multiprecision::powm(a % P_->p, P_->p - 2, P_->p);
}

BigInt Group::div(const BigInt& a, const BigInt& b) const { return mul(a, inv(b)); }

}  // namespace bv
