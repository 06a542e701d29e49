// Copyright 2026 The grem-hrhd Authors.
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

#include <cstdint>

#include "grem/grem.hpp"

namespace {

grem::ModelParams model(int N, double beta = 1.3) {
  grem::ModelParams m;
  m.N = N;
  m.p = 0.5;
  m.a = 0.2;
  m.beta = beta;
  m.seed = 42;
  return m;
}

void BM_philox_bits(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(grem::philox_bits(7, 1, i++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_philox_bits);

void BM_normal_icdf(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(grem::normal_icdf(grem::uniform_open(grem::mix64(i++))));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_normal_icdf);

void BM_stream_exponential(benchmark::State& state) {
  grem::CounterStream rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(rng.exponential(1.0));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_stream_exponential);

void BM_top_k(benchmark::State& state) {
  const grem::EnergyOracle oracle(model(static_cast<int>(state.range(0))));
  const grem::TopKOptions opt{static_cast<unsigned>(state.range(1)), state.range(2) != 0};
  for (auto _ : state) benchmark::DoNotOptimize(grem::top_k(oracle, 10, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(oracle.states()));
}
BENCHMARK(BM_top_k)
    ->ArgNames({"N", "workers", "prune"})
    ->Args({20, 1, 0})
    ->Args({20, 1, 1})
    ->Args({20, 4, 1})
    ->Args({24, 4, 1})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

void BM_engine(benchmark::State& state) {
  const grem::EnergyOracle oracle(model(static_cast<int>(state.range(0)), 1.6));
  const auto tracked = grem::track_top(grem::top_k(oracle, 20), 3);
  grem::SimulationOptions opt;
  opt.engine = state.range(1) == 0 ? grem::Engine::naive : grem::Engine::aggregated;
  opt.scale = grem::Scale::c;
  opt.horizon = 100.0;
  std::uint64_t events = 0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    grem::CounterStream rng(seed++);
    const auto r = grem::simulate(oracle, tracked, opt, rng);
    events += r.events;
    benchmark::DoNotOptimize(r.occupation.data());
  }
  state.counters["events"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_engine)->ArgNames({"N", "aggregated"})->Args({10, 0})->Args({10, 1})->Args({12, 0})->Args({12, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
