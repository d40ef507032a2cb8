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

#include <string>
#include <utility>
#include <vector>

#include <benchmark/benchmark.h>

#include "poe_rank/comparisons.hpp"
#include "poe_rank/estimators.hpp"
#include "poe_rank/rng.hpp"
#include "poe_rank/simulate.hpp"

namespace {

poe_rank::ComparisonSet synthetic_set(int n, int pairs) {
  const poe_rank::JudgeModel judge = poe_rank::random_judge(n, 99);
  const auto subset = poe_rank::sample_subset(n, pairs, 123);
  const poe_rank::ComparisonSet directed = poe_rank::generate_judgments(
      judge, poe_rank::both_orders(subset), 456);
  return poe_rank::symmetrize(directed);
}

void bench_estimate(benchmark::State& state, const std::string& method) {
  const int n = static_cast<int>(state.range(0));
  const poe_rank::ComparisonSet set = synthetic_set(n, 3 * n);
  poe_rank::EstimatorConfig config;
  config.method = poe_rank::method_from_string(method);
  for (auto _ : state) {
    benchmark::DoNotOptimize(poe_rank::estimate(set, config));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(set.size()));
}

}  // namespace

BENCHMARK_CAPTURE(bench_estimate, poe_g, "poe-g")->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(bench_estimate, poe_bt, "poe-bt")->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(bench_estimate, bt_hard, "bt-hard")->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(bench_estimate, avg_prob, "avg-prob")->Arg(16)->Arg(64);

BENCHMARK_MAIN();
