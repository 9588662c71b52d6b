// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "lgas/montecarlo.hpp"

namespace mc = lgas::mc;

namespace {

// First-flight throughput; args: dimension, radius in thousandths.
void BM_FirstFlights(benchmark::State& state) {
    const auto cfg = lgas::GasConfig::make(static_cast<int>(state.range(0)), state.range(1) / 1000.0);
    constexpr std::uint64_t n = 100'000;
    mc::RunOptions opts;
    opts.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc::estimate_survival(cfg, n, 1e4, opts).survivors.data());
        ++opts.seed;
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FirstFlights)->Args({2, 400})->Args({3, 400})->Args({3, 500})->Args({8, 500})->Unit(benchmark::kMillisecond);

void BM_Vacf(benchmark::State& state) {
    const auto cfg = lgas::GasConfig::make(3, 0.4);
    mc::RunOptions opts;
    opts.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc::estimate_vacf(cfg, 1000, {0, 10, 50, 100}, opts, {.origin_window = 16}).values.data());
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Vacf)->Unit(benchmark::kMillisecond);

}  // namespace
