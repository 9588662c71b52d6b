// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "lgas/dynamics.hpp"
#include "lgas/montecarlo.hpp"

namespace dyn = lgas::dynamics;

namespace {

// args: dimension, radius in thousandths
void BM_NextCollision(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const dyn::Billiard billiard(lgas::GasConfig::make(d, state.range(1) / 1000.0));
    lgas::rng::Stream stream(1, 0);
    std::vector<dyn::ParticleState> starts;
    for (int i = 0; i < 1024; ++i) starts.push_back(lgas::mc::sample_initial(billiard, stream));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(billiard.next_collision(starts[i++ & 1023], 1e6));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NextCollision)->Args({2, 400})->Args({3, 400})->Args({3, 500})->Args({3, 600})->Args({6, 500});

void BM_Advance(benchmark::State& state) {
    const dyn::Billiard billiard(lgas::GasConfig::make(3, 0.4));
    lgas::rng::Stream stream(2, 0);
    auto s = lgas::mc::sample_initial(billiard, stream);
    for (auto _ : state) {
        billiard.advance_in_place(s, 100.0);
        benchmark::DoNotOptimize(s.position.data());
    }
    state.SetItemsProcessed(state.iterations() * 100);
    state.SetLabel("items = unit times");
}
BENCHMARK(BM_Advance);

}  // namespace
