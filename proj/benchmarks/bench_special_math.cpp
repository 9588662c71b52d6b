// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "lgas/gas_config.hpp"
#include "lgas/special_math.hpp"
#include "lgas/theory.hpp"

namespace {

void BM_EpsteinZeta(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    double s = k / 2.0 + 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lgas::special::epstein_zeta(s, k));
        s += 1e-9;
    }
}
BENCHMARK(BM_EpsteinZeta)->Arg(1)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

// args: dimension, radius in thousandths
void BM_FreeFlightAsymptote(benchmark::State& state) {
    const auto cfg = lgas::GasConfig::make(static_cast<int>(state.range(0)), state.range(1) / 1000.0);
    for (auto _ : state) benchmark::DoNotOptimize(lgas::theory::free_flight_asymptote(cfg));
}
BENCHMARK(BM_FreeFlightAsymptote)->Args({2, 100})->Args({3, 100})->Args({4, 300})->Unit(benchmark::kMicrosecond);

}  // namespace
