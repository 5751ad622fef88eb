// Copyright 2026 The rmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <optional>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "rmkit/rmkit.hpp"

namespace {

using namespace rmkit;

BatchShadowSet ghz_batches(int n_qubits, int n_batches) {
    const auto settings = sample_settings(Ensemble::Haar, n_qubits, 200, RngSeed{1, 0});
    const auto group = simulate_group(ghz_state(n_qubits), settings, 100, std::nullopt, RngSeed{1, 1});
    return dense_batch_shadows(group, n_batches);
}

void BM_TraceMomentSingleOrder(benchmark::State &state) {
    const auto batches = ghz_batches(3, static_cast<int>(state.range(0)));
    std::vector<MatrixXc> matrices;
    for (const auto &b : batches.batches) matrices.push_back(b.matrix);
    for (auto _ : state) benchmark::DoNotOptimize(trace_moment(matrices, 4));
}
BENCHMARK(BM_TraceMomentSingleOrder)->Arg(8)->Arg(12)->Arg(16);

void BM_JackknifeMoments(benchmark::State &state) {
    const auto batches = ghz_batches(3, static_cast<int>(state.range(0)));
    const std::vector<int> orders = {2, 3, 4};
    const auto previous = set_warning_handler({});
    for (auto _ : state) benchmark::DoNotOptimize(jackknife_moments(batches, orders, true));
    set_warning_handler(previous);
}
BENCHMARK(BM_JackknifeMoments)->Arg(8)->Arg(12)->Arg(16);

void BM_FactorizedShadows(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto settings = sample_settings(Ensemble::Haar, n, 200, RngSeed{2, 0});
    const auto group = simulate_group(product_zero(n), settings, 100, std::nullopt, RngSeed{2, 1});
    for (auto _ : state) benchmark::DoNotOptimize(factorized_shadows(group));
    state.SetItemsProcessed(state.iterations() * 200 * 100);
}
BENCHMARK(BM_FactorizedShadows)->Arg(10)->Arg(50);

void BM_MpsSampling(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(RngSeed{3, 0});
    const QuantumState mps = random_mps(n, 2, rng);
    const auto settings = sample_settings(Ensemble::Haar, n, 20, RngSeed{3, 1});
    for (auto _ : state) benchmark::DoNotOptimize(simulate_group(mps, settings, 100, std::nullopt, RngSeed{3, 2}));
    state.SetItemsProcessed(state.iterations() * 20 * 100);
}
BENCHMARK(BM_MpsSampling)->Arg(10)->Arg(50);

void BM_ChannelEstimation(benchmark::State &state) {
    const auto estimator = state.range(1) == 0 ? ChannelEstimator::Direct : ChannelEstimator::PauliTwirled;
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        Rng rng(RngSeed{4, 0});
        benchmark::DoNotOptimize(estimate_channel(n, 2, 100, rng, estimator));
    }
    state.SetLabel(std::string(to_string(estimator)));
}
BENCHMARK(BM_ChannelEstimation)->Args({4, 0})->Args({4, 1})->Args({6, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
