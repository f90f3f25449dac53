#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace bv {

using BigInt = boost::multiprecision::cpp_int;

inline std::string to_dec(const BigInt& v) { return v.str(); }

inline BigInt from_dec(const std::string& s) { return BigInt(s); }

// Number of bits in |v|; 0 for v == 0.
inline int bit_length(const BigInt& v) {
    if (v == 0) return 0;
    return static_cast<int>(boost::multiprecision::msb(v)) + 1;
}

}  // namespace bv
