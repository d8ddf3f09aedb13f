#include <benchmark/benchmark.h>

#include "cohmms/generators.hpp"
#include "cohmms/rng.hpp"
#include "cohmms/transport.hpp"

using namespace cohmms;

namespace {

std::vector<double> random_measure(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> m(n);
    double total = 0.0;
    for (auto& x : m) total += (x = 0.05 + rng.uniform01());
    for (auto& x : m) x /= total;
    return m;
}

} // namespace

static void BM_wasserstein(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto sp = share(random_euclidean(n, 2, 31, MeasureMode::RandomSimplex));
    auto nu = random_measure(n, 77);
    for (auto _ : state) {
        auto plan = wasserstein(sp, nu, 1.0);
        benchmark::DoNotOptimize(plan.cost);
    }
}
BENCHMARK(BM_wasserstein)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

static void BM_wasserstein_exact(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto sp = share(random_rational_space(n, 31, MeasureMode::RandomSimplex));
    std::vector<Rational> nu(n);
    Rng rng(78);
    Rational total(0);
    for (auto& x : nu) total += (x = Rational(rng.below(19) + 1, 20));
    for (auto& x : nu) x /= total;
    for (auto _ : state) {
        auto plan = wasserstein(sp, nu, 1.0, NumericPolicy::exact());
        benchmark::DoNotOptimize(plan.pivots);
    }
}
BENCHMARK(BM_wasserstein_exact)->Arg(4)->Arg(8)->Arg(16);

static void BM_dp_estimate_search(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto x = share(random_euclidean(n, 2, 41, MeasureMode::RandomSimplex));
    auto y = share(random_euclidean(n, 2, 42, MeasureMode::RandomSimplex));
    for (auto _ : state) {
        auto est = dp_estimate(x, y, 1.0, 500.0);
        benchmark::DoNotOptimize(est.upper);
    }
}
BENCHMARK(BM_dp_estimate_search)->Arg(4)->Arg(6)->Arg(8);

BENCHMARK_MAIN();
