#include <benchmark/benchmark.h>

#include "bv/booth.hpp"
#include "bv/keys.hpp"
#include "bv/ledger.hpp"
#include "bv/tally_solver.hpp"
#include "bv/zkp.hpp"

namespace {

bv::GroupParams params64(int k, int n_max) {
    return bv::params_from_prime(bv::pinned_prime_64(), 5, n_max, k, "bench");
}

void BM_VerifyMembership(benchmark::State& state) {
    int k = static_cast<int>(state.range(0));
    auto P = params64(k, 3);  // small n_max keeps k*m inside the 64-bit budget
    auto kp = bv::keygen(P, "bench-key");
    auto other = bv::keygen(P, "bench-key-2");
    bv::BigInt h = bv::derive_blinding_key(P, kp, other.pk);
    auto bvp = bv::prove_membership(P, kp, h, 1, "bench-proof");
    bv::Group G(P);
    for (auto _ : state) {
        bool ok = bv::verify_membership(G, kp.pk, h, bvp.vote, bvp.proof);
        benchmark::DoNotOptimize(ok);
    }
}
BENCHMARK(BM_VerifyMembership)->Arg(2)->Arg(8)->Arg(15);

void BM_MpcRound(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto P = params64(2, n);
    bv::BoothState tmpl = bv::make_booth("bench", P, 0);
    auto eligible = [](const std::string&, const std::string&) { return true; };
    for (int i = 0; i < n; ++i) {
        auto kp = bv::keygen(P, "bench-v" + std::to_string(i));
        bv::sign_up(tmpl, "v" + std::to_string(i), kp.pk, 0, eligible);
    }
    for (auto _ : state) {
        bv::BoothState st = tmpl;
        bv::precompute_right_markers(st, 8);
        for (int b = 0; b < st.num_batches(); ++b) bv::compute_mpc_batch(st, b);
        benchmark::DoNotOptimize(st.mpc_keys);
    }
}
BENCHMARK(BM_MpcRound)->Arg(16)->Arg(64);

void BM_TallySolve(benchmark::State& state) {
    int k = static_cast<int>(state.range(0));
    long long n = state.range(1);
    auto P = params64(k, static_cast<int>(n));
    bv::Group G(P);
    // worst-ish case: all votes on the last candidate
    bv::BigInt product = G.pow(P.candidates[k - 1], n);
    for (auto _ : state) {
        auto t = bv::solve_tally(P, product, n);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_TallySolve)->Args({2, 50})->Args({3, 30})->Args({5, 15});

}  // namespace

BENCHMARK_MAIN();
