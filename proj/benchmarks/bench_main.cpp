#include <benchmark/benchmark.h>

#include "vacuum/casimir.hpp"
#include "vacuum/kernels.hpp"
#include "vacuum/mass_transform.hpp"
#include "vacuum/specfun.hpp"

namespace {

void BM_BesselK(benchmark::State& state) {
    const double nu = static_cast<double>(state.range(0)) / 2.0;
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vacuum::specfun::bessel_k(nu, x));
        x = x < 50.0 ? x * 1.07 : 0.01;
    }
}
BENCHMARK(BM_BesselK)->Arg(0)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

void BM_BesselJ1(benchmark::State& state) {
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vacuum::specfun::bessel_j1(x));
        x = x < 200.0 ? x * 1.03 : 0.01;
    }
}
BENCHMARK(BM_BesselJ1);

void BM_TransformFree(benchmark::State& state) {
    const auto profile = vacuum::kernels::free_massless_profile(static_cast<int>(state.range(0)), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(vacuum::transform::to_massive(profile, 1.0, 1.0));
}
BENCHMARK(BM_TransformFree)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_TransformInterval(benchmark::State& state) {
    const auto profile = vacuum::kernels::interval_trace_profile(1.0);
    const auto method = static_cast<vacuum::transform::TransformMethod>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(vacuum::transform::to_massive(profile, 1.0, 0.5, method));
}
BENCHMARK(BM_TransformInterval)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

// Crossover between the two mass-term routes as a function of mL (argument in hundredths).
void BM_MassIntegral(benchmark::State& state) {
    const double mL = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(vacuum::casimir::mass_casimir_integral(mL, 1.0));
}
BENCHMARK(BM_MassIntegral)->Arg(5)->Arg(20)->Arg(100)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_MassSum(benchmark::State& state) {
    const double mL = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(vacuum::casimir::mass_casimir_sum(mL, 1.0));
}
BENCHMARK(BM_MassSum)->Arg(5)->Arg(20)->Arg(100)->Arg(500)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
