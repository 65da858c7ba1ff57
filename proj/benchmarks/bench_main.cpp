// Copyright 2026 The upsum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "upsum/circuits.hpp"
#include "upsum/enumerator.hpp"
#include "upsum/events.hpp"
#include "upsum/pathsum.hpp"
#include "upsum/translate.hpp"

using namespace upsum;

namespace {

Circuit layered(unsigned n, unsigned layers) {
    std::vector<Gate> gates;
    for (unsigned l = 0; l < layers; ++l) {
        for (unsigned q = 0; q < n; ++q) gates.push_back(Gate::h(q));
        for (unsigned q = 0; q < n; ++q) gates.push_back(Gate::t(q));
        for (unsigned q = 0; q + 1 < n; ++q) gates.push_back(Gate::cnot(q, q + 1));
    }
    return Circuit(n, std::move(gates));
}

void BM_Explore(benchmark::State &state) {
    const ExploreBudget b{static_cast<std::uint32_t>(state.range(0)),
                          static_cast<std::uint64_t>(state.range(1))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(explore(b, Dialect::A));
    }
}
BENCHMARK(BM_Explore)->Args({12, 100})->Args({16, 1000})->Args({18, 10000})->Unit(benchmark::kMillisecond);

void BM_SigmaPaper(benchmark::State &state) {
    const ExplorationReport r = explore({18, 1000}, Dialect::A);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sigma_paper(r));
    }
}
BENCHMARK(BM_SigmaPaper)->Unit(benchmark::kMillisecond);

void BM_PhaseOracle(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(phase_oracle_sigma(n, 1000, Dialect::A));
    }
}
BENCHMARK(BM_PhaseOracle)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_PathSum(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    const Circuit c = layered(n, static_cast<unsigned>(state.range(1)));
    const BitString zero = BitString::from_uint(0, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pathsum_amplitude(c, zero, zero));
    }
    state.counters["hadamards"] = c.hadamard_count();
}
BENCHMARK(BM_PathSum)->Args({4, 2})->Args({4, 4})->Args({8, 2})->Unit(benchmark::kMillisecond);

void BM_StateVector(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    const Circuit c = layered(n, 4);
    const BitString zero = BitString::from_uint(0, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(statevector_oracle(c, zero));
    }
}
BENCHMARK(BM_StateVector)->Arg(8)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_GrainAmplitude(benchmark::State &state) {
    const auto k = static_cast<unsigned>(state.range(0));
    std::mt19937_64 rng(1);
    std::vector<PhaseFraction> acts;
    for (std::size_t w = 0; w < (std::size_t{1} << k); ++w) {
        acts.push_back(PhaseFraction::from_grid(static_cast<std::int64_t>(rng() % 16), 4));
    }
    const PathEnsemble e = PathEnsemble::from_actions(BitString{}, std::move(acts));
    const CoarseGrain g = CoarseGrain::full(k);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grain_amplitude(e, g));
    }
}
BENCHMARK(BM_GrainAmplitude)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SubintegralCheck(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(subintegral_check({16, 500}));
    }
}
BENCHMARK(BM_SubintegralCheck)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
