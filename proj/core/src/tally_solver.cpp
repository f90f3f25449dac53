#include "bv/tally_solver.hpp"

#include <stdexcept>

namespace bv {

namespace {

// Depth-first over counts for candidates 0..k-2 with an incrementally
// maintained partial product; the last candidate absorbs the remainder and
// is checked against a precomputed power table.
bool dfs(const GroupParams& P, const Group& G, const std::vector<std::vector<BigInt>>& pow_f,
         const BigInt& product, int cand, long long remaining, BigInt acc,
         std::vector<long long>& counts) {
    if (cand == P.k - 1) {
        counts[cand] = remaining;
        return G.mul(acc, pow_f[cand][remaining]) == product;
    }
    for (long long ct = 0; ct <= remaining; ++ct) {
        counts[cand] = ct;
        if (dfs(P, G, pow_f, product, cand + 1, remaining - ct, acc, counts)) return true;
        acc = G.mul(acc, P.candidates[cand]);
    }
    return false;
}

}  // namespace

std::optional<Tally> solve_tally(const GroupParams& params, const BigInt& product,
                                 long long n_votes) {
    if (n_votes < 0) throw std::invalid_argument("n_votes must be >= 0");
    Group G(params);
    std::vector<std::vector<BigInt>> pow_f(params.k);
    for (int l = 0; l < params.k; ++l) {
        pow_f[l].resize(n_votes + 1);
        pow_f[l][0] = 1;
        for (long long e = 1; e <= n_votes; ++e)
            pow_f[l][e] = G.mul(pow_f[l][e - 1], params.candidates[l]);
    }
    std::vector<long long> counts(params.k, 0);
    if (!dfs(params, G, pow_f, product, 0, n_votes, 1, counts)) return std::nullopt;
    return Tally{counts};
}

BigInt search_space_size(long long n, int k) {
    if (n < 0 || k < 1) throw std::invalid_argument("need n >= 0 and k >= 1");
    // C(n + k - 1, k - 1)
    BigInt num = 1, den = 1;
    for (int i = 1; i <= k - 1; ++i) {
        num *= n + k - i;
        den *= i;
    }
    return num / den;
}

}  // namespace bv
