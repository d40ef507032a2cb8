// Copyright 2026 The poe-rank Authors.
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

#include "poe_rank/selection.hpp"

namespace {

void bench_select_batch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(poe_rank::select_batch(
        n, k, poe_rank::SelectionMode::kGaussian, {}, /*unique_pairs=*/true));
  }
  state.SetItemsProcessed(state.iterations() * k);
}

void bench_commit_pair(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  poe_rank::SelectionState base = poe_rank::init_selection(n);
  int i = 0;
  for (auto _ : state) {
    poe_rank::SelectionState scratch = base;
    poe_rank::commit_pair(scratch, i, (i + 1) % n);
    benchmark::DoNotOptimize(scratch.log_det);
    i = (i + 1) % (n - 1);
  }
  state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(bench_select_batch)->Args({16, 48})->Args({64, 256})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bench_commit_pair)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
