#pragma once

#include <optional>

#include "bv/booth.hpp"
#include "bv/group.hpp"

namespace bv {

// Exhaustive search over compositions of n_votes into k non-negative parts
// for the count vector with f_1^ct_1 ... f_k^ct_k = product. The exponent
// packing makes an accepted solution unique, so early exit is sound.
std::optional<Tally> solve_tally(const GroupParams& params, const BigInt& product,
                                 long long n_votes);

// C(n + k - 1, k - 1): size of the composition space.
BigInt search_space_size(long long n, int k);

}  // namespace bv
