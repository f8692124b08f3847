// SPDX-License-Identifier: MIT
#include <benchmark/benchmark.h>

#include "gk/bessel.hpp"
#include "gk/btransform.hpp"
#include "gk/kloosterman.hpp"
#include "gk/sieve.hpp"

using namespace gk;

static void BM_Factorize(benchmark::State& st) {
    GaussInt z(9876, 5431);
    for (auto _ : st) benchmark::DoNotOptimize(factorize(z));
}
BENCHMARK(BM_Factorize);

static void BM_ClassicalTable(benchmark::State& st) {
    const GaussInt c(st.range(0), 7);
    for (auto _ : st) {
        ClassicalTable t(c);
        benchmark::DoNotOptimize(t.evaluate(1, GaussInt(2, 1)));
    }
}
BENCHMARK(BM_ClassicalTable)->Arg(10)->Arg(30);

static void BM_GeneralKloosterman(benchmark::State& st) {
    auto reps = class_representatives(GaussInt(2, 2));
    for (auto _ : st) benchmark::DoNotOptimize(kloosterman_general(reps[0], reps.back(), 1, 1, GaussInt(5, 2)));
}
BENCHMARK(BM_GeneralKloosterman);

static void BM_KernelK(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(kernel_K(cplx(0, 3.5), 2, cplx(4, -1)));
}
BENCHMARK(BM_KernelK);

static void BM_KernelPlan(benchmark::State& st) {
    KernelPlan plan(cplx(0, 3.5), 2);
    for (auto _ : st) benchmark::DoNotOptimize(plan(cplx(4, -1)));
}
BENCHMARK(BM_KernelPlan);

static void BM_BTransform(benchmark::State& st) {
    BTransformConfig cfg;
    cfg.method = static_cast<BMethod>(st.range(0));
    TestParams prm{2, 2, 0.75};
    for (auto _ : st) benchmark::DoNotOptimize(b_transform(prm, cplx(1.5, 2), cfg));
}
BENCHMARK(BM_BTransform)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_KTransformHarmonic(benchmark::State& st) {
    Bump f;
    for (auto _ : st) benchmark::DoNotOptimize(k_transform_harmonic(f, cplx(0, 10), 3));
}
BENCHMARK(BM_KTransformHarmonic)->Unit(benchmark::kMillisecond);

static void BM_USum(benchmark::State& st) {
    auto f = make_frame(Cusp::inf(), 1);
    auto b = make_coeffs(CoeffFamily::random_phase, double(st.range(0)), 1);
    USumEvaluator ev(f, GaussInt(4, 3), double(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(ev.evaluate(0.5, 5, b));
}
BENCHMARK(BM_USum)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
