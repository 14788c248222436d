#include "quadflow/oracle.hpp"

#include "test_random.hpp"

#include <benchmark/benchmark.h>

using namespace quadflow;
using namespace quadflow::testing;

static void Flow(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const QuadraticForm q = random_positive_form(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(flow(q));
}
BENCHMARK(Flow)->Arg(1)->Arg(4)->Arg(16);

static void CanonicalLog(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const CanonicalTransform k = flow(random_positive_form(static_cast<int>(state.range(0)), rng));
    for (auto _ : state) benchmark::DoNotOptimize(canonical_log(k));
}
BENCHMARK(CanonicalLog)->Arg(1)->Arg(4)->Arg(16);

static void NormShifted(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const int n = static_cast<int>(state.range(0));
    const EvolutionSpec spec(random_positive_form(n, rng), random_phase_vector(n, rng));
    for (auto _ : state) benchmark::DoNotOptimize(norm_shifted(spec));
}
BENCHMARK(NormShifted)->Arg(1)->Arg(4)->Arg(16);

static void Decompose(benchmark::State& state) {
    std::mt19937_64 rng(4);
    const int n = static_cast<int>(state.range(0));
    const EvolutionSpec spec(random_positive_form(n, rng), random_phase_vector(n, rng));
    for (auto _ : state) benchmark::DoNotOptimize(decompose(spec));
}
BENCHMARK(Decompose)->Arg(1)->Arg(4);

static GaussianKernel heat_kernel() {
    return evolution_to_kernel(EvolutionSpec(QuadraticForm::harmonic_oscillator(1).scaled(cplx(0.0, -1.0))));
}

static void Discretize(benchmark::State& state) {
    const GaussianKernel k = heat_kernel();
    const GridSpec g{1, 11.0, static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(discretize(k, g));
}
BENCHMARK(Discretize)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

static void OperatorNorm(benchmark::State& state) {
    const GaussianKernel k = heat_kernel();
    const CMatrix m = discretize(k, GridSpec{1, 11.0, static_cast<int>(state.range(0))});
    for (auto _ : state) benchmark::DoNotOptimize(operator_norm(m));
}
BENCHMARK(OperatorNorm)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
