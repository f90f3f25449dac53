#include "bv/rng.hpp"

#include <stdexcept>

namespace bv {

namespace {

std::vector<std::uint8_t> key_material(std::string_view seed, std::string_view label) {
    std::vector<std::uint8_t> buf;
    buf.reserve(seed.size() + 1 + label.size());
    buf.insert(buf.end(), seed.begin(), seed.end());
    buf.push_back(0x00);
    buf.insert(buf.end(), label.begin(), label.end());
    return buf;
}

}  // namespace

Drbg::Drbg(std::string_view seed, std::string_view label) {
    key_ = sha256(key_material(seed, label));
}

void Drbg::fill(std::uint8_t* out, std::size_t n) {
    while (n > 0) {
        if (pos_ == buf_.size()) {
            std::vector<std::uint8_t> block(key_.begin(), key_.end());
            for (int i = 7; i >= 0; --i)
                block.push_back(static_cast<std::uint8_t>((counter_ >> (8 * i)) & 0xff));
            Digest d = sha256(block);
            buf_.assign(d.begin(), d.end());
            pos_ = 0;
            ++counter_;
        }
        std::size_t take = std::min(n, buf_.size() - pos_);
        std::copy(buf_.begin() + pos_, buf_.begin() + pos_ + take, out);
        pos_ += take;
        out += take;
        n -= take;
    }
}

std::vector<std::uint8_t> Drbg::bytes(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    fill(out.data(), n);
    return out;
}

BigInt Drbg::below(const BigInt& m) {
    if (m < 1) throw std::invalid_argument("Drbg::below: m must be >= 1");
    if (m == 1) return 0;
    int bits = bit_length(m - 1);
    std::size_t nbytes = (bits + 7) / 8;
    std::uint8_t mask = static_cast<std::uint8_t>(0xff >> (8 * nbytes - bits));
    std::vector<std::uint8_t> raw(nbytes);
    for (;;) {
        fill(raw.data(), nbytes);
        raw[0] &= mask;
        BigInt v = 0;
        for (std::uint8_t b : raw) v = (v << 8) | b;
        if (v < m) return v;
    }
}

BigInt Drbg::scalar_nonzero(const BigInt& exp_mod) {
    return 1 + below(exp_mod - 1);
}

std::string Drbg::derive(std::string_view seed, std::string_view label) {
    std::vector<std::uint8_t> buf;
    buf.insert(buf.end(), seed.begin(), seed.end());
    buf.push_back(0x01);
    buf.insert(buf.end(), label.begin(), label.end());
    Digest d = sha256(buf);
    // hex, so derived seeds can live inside JSON state files
    static const char* k = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (std::uint8_t b : d) {
        out.push_back(k[b >> 4]);
        out.push_back(k[b & 0xf]);
    }
    return out;
}

}  // namespace bv
