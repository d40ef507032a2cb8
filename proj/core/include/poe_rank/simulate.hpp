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

#ifndef POE_RANK_SIMULATE_HPP_
#define POE_RANK_SIMULATE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "poe_rank/comparisons.hpp"
#include "poe_rank/correlation.hpp"
#include "poe_rank/estimators.hpp"

namespace poe_rank {

// Synthetic judge. Presented with (i, j) in that order it reports
//   p_ij = logistic((s*_i - s*_j) / temperature + position_bias + eps),
//   eps ~ Normal(0, noise_sd^2),
// plus a hard outcome y ~ Bernoulli(p_ij). Within one seed the judge is
// a pure function of the directed pair: judging (i, j) twice returns the
// same record, and the order in which pairs are judged never matters.
struct JudgeModel {
  Eigen::VectorXd latent_scores;
  double temperature = 1.0;
  double noise_sd = 1.0;
  double position_bias = 0.0;

  int n_items() const { return static_cast<int>(latent_scores.size()); }
};

// Latent scores drawn from N(0, 2^2) using the seed; the judge noise
// parameters are left at their defaults unless overridden.
JudgeModel random_judge(int n, std::uint64_t seed, double temperature = 1.0,
                        double noise_sd = 1.0, double position_bias = 0.0);

// Judges every directed pair in order. Deterministic given the seed and
// independent of the pair ordering (each directed pair gets its own
// derived stream). Probabilities are clamped like any ingested set.
// Throws ValidationError on invalid pairs or temperature <= 0.
ComparisonSet generate_judgments(const JudgeModel& judge,
                                 const std::vector<std::pair<int, int>>& pairs,
                                 std::uint64_t rng_seed);

// Expands unordered pairs into both presentation orders, (a,b) then
// (b,a), preserving pair order.
std::vector<std::pair<int, int>> both_orders(
    const std::vector<std::pair<int, int>>& pairs);

enum class Metric {
  kSpearman,
  kPearson,
};

Metric metric_from_string(const std::string& name);
std::string metric_to_string(Metric m);

// How each trial picks which pairs to judge.
enum class CurveSelection {
  kRandom,     // sample_subset per trial
  kGaussian,   // greedy determinant maximization, unique pairs
  kLaplaceBt,  // uncertainty-weighted greedy, judged incrementally
};

CurveSelection curve_selection_from_string(const std::string& name);
std::string curve_selection_to_string(CurveSelection s);

struct CurveConfig {
  // Estimator names, each optionally suffixed "+debias" to fit the
  // positional-bias correction per trial before scoring.
  std::vector<std::string> methods;
  std::vector<int> k_values;  // judge-call budgets
  int trials = 100;
  CurveSelection selection = CurveSelection::kRandom;
  // Symmetric trials spend the budget on k/2 unordered pairs judged in
  // both orders; soft methods then consume the symmetrized set while
  // hard-outcome methods consume the k directed judgments. When false,
  // k unique directed pairs are judged and every method reads the same
  // directed set.
  bool symmetric = true;
  Metric metric = Metric::kSpearman;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = resolve from hardware and POE_RANK_THREADS
  // Tolerances and expert parameters shared by all methods; method and
  // debias fields are ignored (taken from `methods`).
  EstimatorConfig estimator;
};

struct CurveRow {
  std::string method;
  int k = 0;
  double mean = 0.0;
  double sd = 0.0;   // sample standard deviation across trials
  int trials = 0;    // trials aggregated into mean/sd
  int failures = 0;  // trials excluded for this (k, method)
};

struct CurveResult {
  std::vector<int> k_values;
  std::vector<CurveRow> rows;  // k-major, then method order of the config
  int trials = 0;              // requested repeats
  Metric metric = Metric::kSpearman;
  // One message per failed (k, method, trial), for diagnostics.
  std::vector<std::string> failure_reasons;
};

// Runs the efficiency-curve experiment: for every (k, trial), pick
// pairs, judge them, fit every method, and record the rank correlation
// of the fitted scores against judge.latent_scores. Aggregates mean and
// sample SD per (k, method). Per-trial randomness derives from
// (seed, k, trial), so results are reproducible and independent of the
// number of worker threads. A failed fit is excluded from aggregates;
// if failures exceed 5% of trials for any row, throws NumericalError.
CurveResult run_curve(const JudgeModel& judge, const CurveConfig& config);

}  // namespace poe_rank

#endif  // POE_RANK_SIMULATE_HPP_
