#include <benchmark/benchmark.h>

#include "qoctl/propagate.hpp"
#include "qoctl/search.hpp"
#include "qoctl/switching.hpp"
#include "qoctl/synthesis.hpp"

using namespace qoctl;

static void BM_Compose(benchmark::State& state) {
    const Rotation a = make_rotation(0.3, 0.5, 0.81, 1.2);
    const Rotation b = make_rotation(0.0, 0.0, 1.0, 2.7);
    for (auto _ : state) benchmark::DoNotOptimize(compose(a, b));
}
BENCHMARK(BM_Compose);

static void BM_Apply(benchmark::State& state) {
    const Rotation a = make_rotation(0.3, 0.5, 0.81, 1.2);
    const BlochVector v{0.0, 0.6, 0.8};
    for (auto _ : state) benchmark::DoNotOptimize(apply(a, v));
}
BENCHMARK(BM_Apply);

static void BM_Synthesize(benchmark::State& state) {
    // 0: single-On, 1: complementary n=1, 2: symmetric n=1 (root solve),
    // 3: symmetric n=3 (root solve, 7 segments)
    const double ratios[] = {1.5, 0.85, 0.55, 0.2};
    const double r = ratios[state.range(0)];
    for (auto _ : state) benchmark::DoNotOptimize(synthesize(params_from_ratio(r)));
}
BENCHMARK(BM_Synthesize)->DenseRange(0, 3);

static void BM_Verify(benchmark::State& state) {
    const SynthesisReport rep = synthesize(params_from_ratio(0.85));
    for (auto _ : state) benchmark::DoNotOptimize(verify(rep));
}
BENCHMARK(BM_Verify);

static void BM_PropagateExact(benchmark::State& state) {
    const SynthesisReport rep = synthesize(params_from_ratio(0.85));
    for (auto _ : state)
        benchmark::DoNotOptimize(propagate_exact(rep.sequence, rep.params, 256));
}
BENCHMARK(BM_PropagateExact);

static void BM_Deviation(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(deviation(0.3));
}
BENCHMARK(BM_Deviation);

static void BM_BruteForceSingleOn(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(brute_force(1.5, 0));
}
BENCHMARK(BM_BruteForceSingleOn);

BENCHMARK_MAIN();
