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

#include "poe_rank/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "poe_rank/errors.hpp"
#include "poe_rank/rng.hpp"
#include "poe_rank/selection.hpp"
#include "poe_rank/threading.hpp"

namespace poe_rank {

namespace {

// Sub-stream tags under one judgment seed.
constexpr std::uint64_t kNoiseStream = 0;
constexpr std::uint64_t kOutcomeStream = 1;
// Sub-stream tags under (seed, k, trial).
constexpr std::uint64_t kJudgeStream = 0;
constexpr std::uint64_t kPairStream = 1;

double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_judge(const JudgeModel& judge) {
  if (judge.n_items() < 2) {
    throw ValidationError("judge needs at least 2 latent scores");
  }
  if (!(judge.temperature > 0.0)) {
    throw ValidationError("judge temperature must be > 0");
  }
  if (!(judge.noise_sd >= 0.0)) {
    throw ValidationError("judge noise_sd must be >= 0");
  }
}

// The judge's probability for the directed presentation (i, j). A pure
// function of (rng_seed, i, j): the logit noise models a fixed quirk of
// that presentation, so asking again returns the same answer.
double judged_probability(const JudgeModel& judge, std::uint64_t rng_seed,
                          int i, int j) {
  const std::uint64_t noise_seed =
      derive_seed(rng_seed, {static_cast<std::uint64_t>(i),
                             static_cast<std::uint64_t>(j), kNoiseStream});
  std::mt19937_64 rng(noise_seed);
  const double eps = judge.noise_sd * normal_draw(rng);
  const double d =
      (judge.latent_scores[i] - judge.latent_scores[j]) / judge.temperature;
  const double p = logistic(d + judge.position_bias + eps);
  return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
}

double judged_outcome(double p, std::uint64_t rng_seed, int i, int j) {
  const std::uint64_t outcome_seed =
      derive_seed(rng_seed, {static_cast<std::uint64_t>(i),
                             static_cast<std::uint64_t>(j), kOutcomeStream});
  std::mt19937_64 rng(outcome_seed);
  return uniform_double(rng) < p ? 1.0 : 0.0;
}

struct ParsedMethod {
  Method method = Method::kPoeG;
  bool debias = false;
  std::string canonical;
  bool needs_soft_set = true;  // consumes p (vs hard outcomes)
};

ParsedMethod parse_method(const std::string& name) {
  ParsedMethod pm;
  std::string base = name;
  const auto plus = name.find('+');
  if (plus != std::string::npos) {
    base = name.substr(0, plus);
    const std::string suffix = name.substr(plus + 1);
    if (suffix != "debias") {
      throw ValidationError("unknown method suffix \"+" + suffix + "\"");
    }
    pm.debias = true;
  }
  pm.method = method_from_string(base);
  pm.needs_soft_set = pm.method == Method::kAvgProb ||
                      pm.method == Method::kPoeBt ||
                      pm.method == Method::kPoeG;
  pm.canonical = method_to_string(pm.method) + (pm.debias ? "+debias" : "");
  return pm;
}

}  // namespace

JudgeModel random_judge(int n, std::uint64_t seed, double temperature,
                        double noise_sd, double position_bias) {
  if (n < 2) {
    throw ValidationError("need at least 2 items, got n=" + std::to_string(n));
  }
  JudgeModel judge;
  judge.latent_scores.resize(n);
  std::mt19937_64 rng(splitmix64(seed));
  // Latent scores are drawn from N(0, 2^2). At unit temperature this
  // spread keeps single comparisons informative (typical score gaps of
  // a few logits) without saturating every probability at the clamp.
  for (int i = 0; i < n; ++i) judge.latent_scores[i] = 2.0 * normal_draw(rng);
  judge.temperature = temperature;
  judge.noise_sd = noise_sd;
  judge.position_bias = position_bias;
  return judge;
}

ComparisonSet generate_judgments(const JudgeModel& judge,
                                 const std::vector<std::pair<int, int>>& pairs,
                                 std::uint64_t rng_seed) {
  check_judge(judge);
  if (pairs.empty()) {
    throw ValidationError("no pairs to judge");
  }
  const int n = judge.n_items();
  std::vector<ComparisonRecord> records;
  records.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    if (i < 0 || i >= n || j < 0 || j >= n || i == j) {
      throw ValidationError("invalid pair (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") for n=" +
                            std::to_string(n));
    }
    ComparisonRecord r;
    r.i = i;
    r.j = j;
    const double p = judged_probability(judge, rng_seed, i, j);
    r.p = p;
    r.y = judged_outcome(p, rng_seed, i, j);
    records.push_back(r);
  }
  return validate_set(std::move(records), n, /*directed=*/true);
}

std::vector<std::pair<int, int>> both_orders(
    const std::vector<std::pair<int, int>>& pairs) {
  std::vector<std::pair<int, int>> out;
  out.reserve(2 * pairs.size());
  for (const auto& [a, b] : pairs) {
    out.emplace_back(a, b);
    out.emplace_back(b, a);
  }
  return out;
}

Metric metric_from_string(const std::string& name) {
  if (name == "spearman") return Metric::kSpearman;
  if (name == "pearson") return Metric::kPearson;
  throw ValidationError("unknown metric \"" + name + "\"");
}

std::string metric_to_string(Metric m) {
  return m == Metric::kSpearman ? "spearman" : "pearson";
}

CurveSelection curve_selection_from_string(const std::string& name) {
  if (name == "random") return CurveSelection::kRandom;
  if (name == "gaussian") return CurveSelection::kGaussian;
  if (name == "laplace-bt") return CurveSelection::kLaplaceBt;
  throw ValidationError("unknown selection \"" + name + "\"");
}

std::string curve_selection_to_string(CurveSelection s) {
  switch (s) {
    case CurveSelection::kRandom: return "random";
    case CurveSelection::kGaussian: return "gaussian";
    case CurveSelection::kLaplaceBt: return "laplace-bt";
  }
  throw ValidationError("unknown selection enum value");
}

CurveResult run_curve(const JudgeModel& judge, const CurveConfig& config) {
  check_judge(judge);
  const int n = judge.n_items();
  if (config.methods.empty()) throw ValidationError("no methods given");
  if (config.k_values.empty()) throw ValidationError("no k values given");
  if (config.trials < 1) throw ValidationError("trials must be >= 1");

  std::vector<ParsedMethod> methods;
  methods.reserve(config.methods.size());
  for (const std::string& name : config.methods) {
    methods.push_back(parse_method(name));
  }

  const long long max_directed = static_cast<long long>(n) * (n - 1);
  for (const int k : config.k_values) {
    if (config.symmetric) {
      if (k % 2 != 0) {
        throw ValidationError(
            "symmetric judging spends two judgments per pair; k=" +
            std::to_string(k) + " is odd");
      }
      if (k / 2 < n - 1 || k / 2 > max_directed / 2) {
        throw ValidationError("k=" + std::to_string(k) +
                              " infeasible for symmetric judging over n=" +
                              std::to_string(n));
      }
    } else if (k < n - 1 || k > max_directed) {
      throw ValidationError("k=" + std::to_string(k) + " infeasible for n=" +
                            std::to_string(n));
    }
  }

  const int threads = resolve_thread_count(config.threads);
  const int m_count = static_cast<int>(methods.size());

  CurveResult result;
  result.k_values = config.k_values;
  result.trials = config.trials;
  result.metric = config.metric;

  for (const int k : config.k_values) {
    const int budget = config.symmetric ? k / 2 : k;

    // Greedy Gaussian selection ignores outcomes, so it is shared by all
    // trials of this k.
    std::vector<std::pair<int, int>> fixed_pairs;
    if (config.selection == CurveSelection::kGaussian) {
      fixed_pairs = select_batch(n, budget, SelectionMode::kGaussian, {},
                                 /*unique_pairs=*/true,
                                 config.estimator.sigma0_sq);
    }

    // value[trial][method]; NaN marks a failure.
    std::vector<std::vector<double>> values(
        config.trials,
        std::vector<double>(m_count, std::numeric_limits<double>::quiet_NaN()));
    std::vector<std::vector<std::string>> reasons(config.trials,
                                                  std::vector<std::string>(
                                                      m_count));

    parallel_for(config.trials, threads, [&](int trial) {
      const std::uint64_t judge_seed =
          derive_seed(config.seed, {static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(trial),
                                    kJudgeStream});
      const std::uint64_t pair_seed =
          derive_seed(config.seed, {static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(trial),
                                    kPairStream});

      std::vector<std::pair<int, int>> pairs;
      switch (config.selection) {
        case CurveSelection::kRandom:
          pairs = sample_subset(n, budget, pair_seed,
                                /*directed=*/!config.symmetric);
          break;
        case CurveSelection::kGaussian:
          pairs = fixed_pairs;
          break;
        case CurveSelection::kLaplaceBt: {
          // The adaptive picker sees exactly the probabilities the final
          // judgment pass will produce for the same directed pair.
          ProbLookup lookup = [&](int i, int j) {
            const double p = judged_probability(judge, judge_seed, i, j);
            if (!config.symmetric) return p;
            const double rev = judged_probability(judge, judge_seed, j, i);
            return 0.5 * (p + (1.0 - rev));
          };
          pairs = select_batch(n, budget, SelectionMode::kLaplaceBt, lookup,
                               /*unique_pairs=*/true,
                               config.estimator.sigma0_sq);
          break;
        }
      }

      const ComparisonSet directed = generate_judgments(
          judge, config.symmetric ? both_orders(pairs) : pairs, judge_seed);
      ComparisonSet soft;
      bool have_soft = false;

      for (int m = 0; m < m_count; ++m) {
        try {
          const ComparisonSet* input = &directed;
          if (config.symmetric && methods[m].needs_soft_set) {
            if (!have_soft) {
              soft = symmetrize(directed);
              have_soft = true;
            }
            input = &soft;
          }
          EstimatorConfig cfg = config.estimator;
          cfg.method = methods[m].method;
          cfg.debias = methods[m].debias;
          const ScoreEstimate est = estimate(*input, cfg);
          values[trial][m] =
              config.metric == Metric::kSpearman
                  ? spearman(est.scores, judge.latent_scores)
                  : pearson(est.scores, judge.latent_scores);
        } catch (const std::exception& e) {
          reasons[trial][m] = e.what();
        }
      }
    });

    for (int m = 0; m < m_count; ++m) {
      CurveRow row;
      row.method = methods[m].canonical;
      row.k = k;
      double sum = 0.0;
      std::vector<double> ok;
      ok.reserve(config.trials);
      for (int t = 0; t < config.trials; ++t) {
        if (std::isnan(values[t][m])) {
          ++row.failures;
          std::ostringstream os;
          os << "k=" << k << " trial=" << t << " method=" << row.method << ": "
             << reasons[t][m];
          result.failure_reasons.push_back(os.str());
        } else {
          ok.push_back(values[t][m]);
          sum += values[t][m];
        }
      }
      row.trials = static_cast<int>(ok.size());
      if (row.trials > 0) {
        row.mean = sum / row.trials;
        double ss = 0.0;
        for (const double v : ok) ss += (v - row.mean) * (v - row.mean);
        row.sd = row.trials > 1 ? std::sqrt(ss / (row.trials - 1)) : 0.0;
      }
      if (row.failures * 20 > config.trials) {  // above 5%
        throw NumericalError("failure rate " + std::to_string(row.failures) +
                             "/" + std::to_string(config.trials) +
                             " for method " + row.method + " at k=" +
                             std::to_string(k) + " exceeds 5%: " +
                             (result.failure_reasons.empty()
                                  ? std::string("unknown")
                                  : result.failure_reasons.back()));
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

}  // namespace poe_rank
