#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bv/bigint.hpp"

namespace bv {

// Abstract operation counters used by the gas model. Arithmetic helpers
// bump exps/muls; the contract state machines account reads/writes.
struct Meter {
    std::uint64_t exps = 0;
    std::uint64_t muls = 0;
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;

    void clear() { *this = Meter{}; }
    Meter& operator+=(const Meter& o) {
        exps += o.exps;
        muls += o.muls;
        reads += o.reads;
        writes += o.writes;
        return *this;
    }
};

// Multiplicative group of F_p^* with p = 2q + 1 a safe prime. The exponent
// modulus is p - 1 (the full group order). Candidate generators pack per-
// candidate counts into disjoint m-bit fields of the aggregate exponent:
// f_i = g^(2^((i-1) m)).
struct GroupParams {
    std::string election_id;
    BigInt p;
    BigInt q;        // (p - 1) / 2
    BigInt g;
    BigInt exp_mod;  // p - 1
    int k = 0;
    int m = 0;
    int n_max = 0;
    std::vector<BigInt> candidates;  // f_1 .. f_k

    nlohmann::json to_json() const;
    static GroupParams from_json(const nlohmann::json& j);
    // Canonical serialization (sorted keys, decimal strings); this is the
    // encoding hashed into zkp challenge transcripts.
    std::string canonical() const;
};

// Smallest m with 2^m > n.
int smallest_m(int n);

// Deterministic safe-prime parameter generation. bits >= 16 (test scale).
GroupParams generate_params(int bits, int n_max, int k, const std::string& seed,
                            const std::string& election_id);

// Build params around a pinned safe prime (p, g); validates all invariants.
GroupParams params_from_prime(const BigInt& p, const BigInt& g, int n_max, int k,
                              const std::string& election_id);

// Pinned primes used by tests and metering fixtures.
const GroupParams& fixture_p23(int k = 2, int n_max = 3);
BigInt pinned_prime_64();

// Arithmetic handle over a parameter set, with optional metering.
class Group {
  public:
    explicit Group(const GroupParams& params, Meter* meter = nullptr)
        : P_(&params), meter_(meter) {}

    const GroupParams& params() const { return *P_; }
    Meter* meter() const { return meter_; }

    // base^e mod p; e is reduced mod p-1, negative e means inverse power.
    BigInt pow(const BigInt& base, const BigInt& e) const;
    BigInt mul(const BigInt& a, const BigInt& b) const;
    BigInt inv(const BigInt& a) const;
    BigInt div(const BigInt& a, const BigInt& b) const;

  private:
    const GroupParams* P_;
    Meter* meter_;
};

}  // namespace bv
