#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "hopfkit/exactlinalg.hpp"
#include "hopfkit/oracle.hpp"

using namespace hopfkit;

namespace {

FpMatrix random_matrix(unsigned p, std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<unsigned> dist(0, p - 1);
    FpMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = dist(rng);
    return m;
}

void BM_RrefSerial(benchmark::State& state) {
    auto m = random_matrix(3, static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(rref_serial(m).pivots.size());
}

void BM_RrefParallel(benchmark::State& state) {
    auto m = random_matrix(3, static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(rref(m).pivots.size());
    state.counters["threads"] = omp_get_max_threads();
}

// Oracle enumeration with the OpenMP team size pinned by the argument (0 = default).
void BM_OracleGroupLike(benchmark::State& state) {
    const int threads = static_cast<int>(state.range(0));
    const int saved = omp_get_max_threads();
    if (threads > 0) omp_set_num_threads(threads);
    auto a = share(alpha_group(2, 1));
    std::vector<HopfPtr> src{a, a, a, a};
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_multi_grouplike(src).size());
    state.counters["threads"] = omp_get_max_threads();
    omp_set_num_threads(saved);
}

void BM_OracleHoms(benchmark::State& state) {
    const int threads = static_cast<int>(state.range(0));
    const int saved = omp_get_max_threads();
    if (threads > 0) omp_set_num_threads(threads);
    auto r = ring_spec_parse("F3[e]/(e^2)");
    auto g = share(alpha_group(3, 2)), h = share(alpha_group(3, 1));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_hopf_homs(g, h, r).size());
    state.counters["threads"] = omp_get_max_threads();
    omp_set_num_threads(saved);
}

}  // namespace

BENCHMARK(BM_RrefSerial)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RrefParallel)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleGroupLike)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleHoms)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
