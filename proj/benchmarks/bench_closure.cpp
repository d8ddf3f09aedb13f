#include <benchmark/benchmark.h>

#include "cohmms/closure.hpp"
#include "cohmms/generators.hpp"
#include "cohmms/genericity.hpp"

using namespace cohmms;

static void BM_coherent_closure_float(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto sp = share(random_euclidean(n, 2, 17, MeasureMode::RandomSimplex));
    const NumericPolicy policy = NumericPolicy::floating();
    for (auto _ : state) {
        auto part = coherent_closure(sp, policy);
        benchmark::DoNotOptimize(part.class_count);
    }
}
BENCHMARK(BM_coherent_closure_float)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

static void BM_coherent_closure_exact(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto sp = share(random_rational_space(n, 17, MeasureMode::RandomSimplex));
    const NumericPolicy policy = NumericPolicy::exact();
    for (auto _ : state) {
        auto part = coherent_closure(sp, policy);
        benchmark::DoNotOptimize(part.class_count);
    }
}
BENCHMARK(BM_coherent_closure_exact)->Arg(4)->Arg(8)->Arg(12);

static void BM_closure_structured_cycle(benchmark::State& state) {
    // Symmetric spaces take more refinement rounds than generic ones.
    const int n = static_cast<int>(state.range(0));
    auto sp = share(cycle_space(n));
    const NumericPolicy policy = NumericPolicy::floating();
    for (auto _ : state) {
        auto part = coherent_closure(sp, policy);
        benchmark::DoNotOptimize(part.class_count);
    }
}
BENCHMARK(BM_closure_structured_cycle)->Arg(8)->Arg(16)->Arg(32);

static void BM_check_nmp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto sp = share(random_euclidean(n, 2, 23));
    for (auto _ : state) {
        PowerCache<double> cache(sp);
        auto cert = check_nmp(sp, 3, 1, 100, &cache);
        benchmark::DoNotOptimize(cert.satisfied);
    }
}
BENCHMARK(BM_check_nmp)->Arg(4)->Arg(8)->Arg(12);

BENCHMARK_MAIN();
