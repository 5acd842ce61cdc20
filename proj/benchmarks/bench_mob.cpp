// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "mob/mob.hpp"

namespace {

mob::EmbeddingSet gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> data(n * d);
    for (double& x : data) x = normal(rng);
    return mob::EmbeddingSet(n, d, std::move(data));
}

void BM_MobPrune(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto visual = gaussian(n, 256, 1);
    const auto prompt = gaussian(16, 256, 2);
    const mob::PruneConfig cfg{128, 32, 1, std::nullopt};
    for (auto _ : state) benchmark::DoNotOptimize(mob::mob_prune(visual, prompt, cfg));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MobPrune)->RangeMultiplier(2)->Range(1024, 16384)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Coupling(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto visual = gaussian(n, 256, 3);
    const auto prompt = gaussian(16, 256, 4);
    for (auto _ : state) benchmark::DoNotOptimize(mob::coupling(visual, prompt));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Coupling)->RangeMultiplier(2)->Range(1024, 16384)->Unit(benchmark::kMillisecond)->Complexity();

void BM_FpsSelect(benchmark::State& state) {
    const auto budget = static_cast<std::size_t>(state.range(0));
    const auto visual = mob::normalize(gaussian(4096, 256, 5));
    for (auto _ : state) benchmark::DoNotOptimize(mob::fps_select(visual, {0}, budget));
}
BENCHMARK(BM_FpsSelect)->Arg(32)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_KfoldCover(benchmark::State& state) {
    const auto fold = static_cast<std::size_t>(state.range(0));
    const auto visual = mob::normalize(gaussian(4096, 256, 6));
    const auto prompt = mob::normalize(gaussian(32, 256, 7));
    for (auto _ : state) benchmark::DoNotOptimize(mob::kfold_nn_cover(visual, prompt, fold, 64));
}
BENCHMARK(BM_KfoldCover)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
