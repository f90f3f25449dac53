#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bv/bigint.hpp"
#include "bv/hash.hpp"

namespace bv {

// Deterministic byte stream keyed by (seed, label):
//   key      = SHA256(seed || 0x00 || label)
//   block(i) = SHA256(key || be64(i))
// All protocol randomness flows through this so that a scenario seed fully
// determines every key, nonce and shuffle.
class Drbg {
  public:
    Drbg(std::string_view seed, std::string_view label);

    void fill(std::uint8_t* out, std::size_t n);
    std::vector<std::uint8_t> bytes(std::size_t n);

    // Uniform in [0, m), m >= 1. Rejection sampling over bit_length(m-1) bits.
    BigInt below(const BigInt& m);

    // Uniform in [1, exp_mod - 1].
    BigInt scalar_nonzero(const BigInt& exp_mod);

    // Child seed for a labeled sub-stream, returned as a byte string.
    static std::string derive(std::string_view seed, std::string_view label);

  private:
    Digest key_;
    std::uint64_t counter_ = 0;
    std::vector<std::uint8_t> buf_;
    std::size_t pos_ = 0;
};

}  // namespace bv
