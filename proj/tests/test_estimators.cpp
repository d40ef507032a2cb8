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

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "poe_rank/comparisons.hpp"
#include "poe_rank/correlation.hpp"
#include "poe_rank/errors.hpp"
#include "poe_rank/estimators.hpp"

namespace {

using poe_rank::ComparisonRecord;
using poe_rank::ComparisonSet;
using poe_rank::ConvergenceError;
using poe_rank::EstimatorConfig;
using poe_rank::ValidationError;

double logit(double p) { return std::log(p / (1.0 - p)); }
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

ComparisonRecord rec(int i, int j, double p) {
  ComparisonRecord r;
  r.i = i;
  r.j = j;
  r.p = p;
  return r;
}

ComparisonRecord rec_y(int i, int j, double y) {
  ComparisonRecord r;
  r.i = i;
  r.j = j;
  r.y = y;
  return r;
}

// Three wins for item 0 against item 1 is encoded as two wins and one loss.
ComparisonSet two_of_three() {
  return poe_rank::validate_set(
      {rec_y(0, 1, 1.0), rec_y(0, 1, 1.0), rec_y(0, 1, 0.0)}, 2);
}

TEST_CASE("win_ratio scores a round robin by win fraction") {
  std::vector<ComparisonRecord> records;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) records.push_back(rec_y(i, j, 1.0));
  }
  const auto est = poe_rank::win_ratio(poe_rank::validate_set(records, 4));
  CHECK(est.method == "win-ratio");
  CHECK(est.scores[0] == 1.0);
  CHECK(est.scores[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(est.scores[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(est.scores[3] == 0.0);
}

TEST_CASE("win_ratio splits a tied probability evenly") {
  const auto est =
      poe_rank::win_ratio(poe_rank::validate_set({rec(0, 1, 0.5)}, 2));
  CHECK(est.scores[0] == 0.5);
  CHECK(est.scores[1] == 0.5);
}

TEST_CASE("win_ratio thresholds soft records without outcomes") {
  const auto est =
      poe_rank::win_ratio(poe_rank::validate_set({rec(0, 1, 0.8)}, 2));
  CHECK(est.scores[0] == 1.0);
  CHECK(est.scores[1] == 0.0);
}

TEST_CASE("win_ratio requires every item to appear") {
  const auto set = poe_rank::validate_set({rec_y(0, 1, 1.0)}, 3);
  CHECK_THROWS_AS(poe_rank::win_ratio(set), ValidationError);
}

TEST_CASE("avg_prob averages the probabilities facing each item") {
  const auto set =
      poe_rank::validate_set({rec(0, 1, 0.6), rec(0, 2, 0.8), rec(1, 2, 0.5)},
                             3);
  const auto est = poe_rank::avg_prob(set);
  CHECK(est.method == "avg-prob");
  CHECK(est.scores[0] == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(est.scores[1] == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(est.scores[2] == doctest::Approx(0.35).epsilon(1e-15));
}

TEST_CASE("avg_prob requires probabilities on every record") {
  const auto set =
      poe_rank::validate_set({rec_y(0, 1, 1.0), rec_y(1, 0, 0.0)}, 2);
  CHECK_THROWS_AS(poe_rank::avg_prob(set), ValidationError);
}

TEST_CASE("bt_hard recovers the closed form for two items") {
  EstimatorConfig cfg;
  cfg.zermelo_tol = 1e-12;
  // Prior adds one pseudo-win per side, so the win share is 3 of 5.
  const auto est = poe_rank::bt_hard(two_of_three(), cfg);
  CHECK(est.method == "bt-hard");
  const double d = est.scores[0] - est.scores[1];
  CHECK(d == doctest::Approx(logit(0.6)).epsilon(1e-9));
  CHECK(est.scores[0] + est.scores[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bt_hard with a zero prior fits the raw win share") {
  EstimatorConfig cfg;
  cfg.zermelo_tol = 1e-12;
  cfg.zermelo_prior = 0.0;
  const auto est = poe_rank::bt_hard(two_of_three(), cfg);
  const double d = est.scores[0] - est.scores[1];
  CHECK(d == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("bt_hard treats symmetric evidence as a tie") {
  const auto set =
      poe_rank::validate_set({rec_y(0, 1, 1.0), rec_y(0, 1, 0.0)}, 2);
  const auto est = poe_rank::bt_hard(set, {});
  CHECK(std::abs(est.scores[0]) < 1e-12);
  CHECK(std::abs(est.scores[1]) < 1e-12);
}

TEST_CASE("bt_hard scores a cyclic tournament flat") {
  const auto set = poe_rank::validate_set(
      {rec_y(0, 1, 1.0), rec_y(1, 2, 1.0), rec_y(2, 0, 1.0)}, 3);
  EstimatorConfig cfg;
  cfg.zermelo_tol = 1e-10;
  const auto est = poe_rank::bt_hard(set, cfg);
  for (int m = 0; m < 3; ++m) CHECK(std::abs(est.scores[m]) < 1e-6);
}

TEST_CASE("bt_hard reports non-convergence") {
  EstimatorConfig cfg;
  cfg.zermelo_tol = 1e-15;
  cfg.max_iters = 1;
  CHECK_THROWS_AS(poe_rank::bt_hard(two_of_three(), cfg), ConvergenceError);
}

TEST_CASE("poe_bt inverts a single probability") {
  EstimatorConfig cfg;
  cfg.grad_tol = 1e-10;
  const auto est =
      poe_rank::poe_bt(poe_rank::validate_set({rec(0, 1, 0.7)}, 2), cfg);
  CHECK(est.method == "poe-bt");
  const double d = est.scores[0] - est.scores[1];
  CHECK(d == doctest::Approx(logit(0.7)).epsilon(1e-8));
  CHECK(est.scores[0] + est.scores[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("poe_bt is flat on a tied probability") {
  const auto est =
      poe_rank::poe_bt(poe_rank::validate_set({rec(0, 1, 0.5)}, 2), {});
  CHECK(std::abs(est.scores[0]) < 1e-9);
}

TEST_CASE("poe_bt recovers consistent scores exactly") {
  const std::vector<double> truth{0.5, 0.0, -0.5};
  std::vector<ComparisonRecord> records;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      records.push_back(rec(i, j, logistic(truth[i] - truth[j])));
    }
  }
  EstimatorConfig cfg;
  cfg.grad_tol = 1e-10;
  const auto est = poe_rank::poe_bt(poe_rank::validate_set(records, 3), cfg);
  for (int m = 0; m < 3; ++m) {
    CHECK(est.scores[m] == doctest::Approx(truth[m]).epsilon(1e-6));
  }
}

TEST_CASE("poe_bt with an offset undoes a known shift") {
  // A positive presentation bias inflates every probability; the
  // countering offset is its negation, as estimate_debias produces.
  const double bias = 0.4;
  const std::vector<double> truth{0.5, 0.0, -0.5};
  std::vector<ComparisonRecord> records;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      records.push_back(rec(i, j, logistic(truth[i] - truth[j] + bias)));
    }
  }
  EstimatorConfig cfg;
  cfg.gamma = -bias;
  cfg.grad_tol = 1e-10;
  const auto est = poe_rank::poe_bt(poe_rank::validate_set(records, 3), cfg);
  for (int m = 0; m < 3; ++m) {
    CHECK(est.scores[m] == doctest::Approx(truth[m]).epsilon(1e-6));
  }
}

TEST_CASE("poe_bt with an offset matches the closed form on one record") {
  EstimatorConfig cfg;
  cfg.gamma = 0.3;
  cfg.grad_tol = 1e-10;
  const auto est =
      poe_rank::poe_bt(poe_rank::validate_set({rec(0, 1, 0.7)}, 2), cfg);
  const double d = est.scores[0] - est.scores[1];
  CHECK(d == doctest::Approx(logit(0.7) + 0.3).epsilon(1e-6));
}

TEST_CASE("estimate_debias averages probabilities") {
  const auto set =
      poe_rank::validate_set({rec(0, 1, 0.6), rec(1, 0, 0.96)}, 2);
  const auto d = poe_rank::estimate_debias(set);
  CHECK(d.mean_p == doctest::Approx(0.78).epsilon(1e-15));
  CHECK(d.beta_g == d.mean_p);
  CHECK(d.gamma_bt == doctest::Approx(-logit(d.mean_p)).epsilon(1e-15));
  CHECK(d.gamma_bt == doctest::Approx(-1.2656663733312759).epsilon(1e-9));
}

TEST_CASE("estimate_debias near a fair judge is near zero") {
  const auto set =
      poe_rank::validate_set({rec(0, 1, 0.51), rec(1, 0, 0.51)}, 2);
  const auto d = poe_rank::estimate_debias(set);
  CHECK(d.gamma_bt == doctest::Approx(-0.040005334613699). epsilon(1e-9));
}

TEST_CASE("estimate_debias needs at least one probability") {
  const auto set = poe_rank::validate_set({rec_y(0, 1, 1.0)}, 2);
  CHECK_THROWS_AS(poe_rank::estimate_debias(set), ValidationError);
}

TEST_CASE("bt_expert_mean matches the cotangent closed form") {
  CHECK(std::abs(poe_rank::bt_expert_mean(0.5)) < 1e-12);
  CHECK(poe_rank::bt_expert_mean(0.25) ==
        doctest::Approx(-std::numbers::pi).epsilon(1e-12));
  CHECK(poe_rank::bt_expert_mean(0.75) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(poe_rank::bt_expert_mean(1.0 - 1e-6) > 1e5);
  CHECK_THROWS_AS(poe_rank::bt_expert_mean(0.0), ValidationError);
  CHECK_THROWS_AS(poe_rank::bt_expert_mean(1.0), ValidationError);
}

TEST_CASE("soft_bt_log_density integrates to one") {
  for (const double p : {0.1, 0.3, 0.5, 0.7, 0.97}) {
    for (const double gamma : {0.0, 0.5}) {
      const double mass = poe_rank_test::simpson(
          [&](double d) {
            return std::exp(poe_rank::soft_bt_log_density(d, p, gamma));
          },
          -2000.0, 2000.0, 400000);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("soft_bt_log_density peaks at the shifted logit") {
  for (const double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (const double gamma : {0.0, 0.5}) {
      const double center = logit(p) + gamma;
      const double peak = poe_rank_test::golden_section_max(
          [&](double d) { return poe_rank::soft_bt_log_density(d, p, gamma); },
          center - 10.0, center + 10.0, 1e-12);
      // The density is flat to machine precision within ~1e-7 of the
      // peak, which bounds how sharply any value-based search can
      // localize the argmax.
      CHECK(peak == doctest::Approx(center).epsilon(1e-6));
    }
  }
}

TEST_CASE("single-expert maximizer agrees with a scalar search") {
  for (const double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (const double gamma : {0.0, 0.5}) {
      EstimatorConfig cfg;
      cfg.gamma = gamma;
      cfg.grad_tol = 1e-10;
      const auto est =
          poe_rank::poe_bt(poe_rank::validate_set({rec(0, 1, p)}, 2), cfg);
      const double d_hat = est.scores[0] - est.scores[1];
      const double center = logit(p) + gamma;
      const double oracle = poe_rank_test::golden_section_max(
          [&](double d) { return poe_rank::soft_bt_log_density(d, p, gamma); },
          center - 10.0, center + 10.0, 1e-12);
      CHECK(d_hat == doctest::Approx(oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("estimate dispatches by method name") {
  const auto set = poe_rank::validate_set({rec(0, 1, 0.7)}, 2);
  EstimatorConfig cfg;
  cfg.method = poe_rank::Method::kAvgProb;
  const auto est = poe_rank::estimate(set, cfg);
  CHECK(est.method == "avg-prob");
  CHECK_FALSE(est.covariance.has_value());
  cfg.method = poe_rank::Method::kPoeG;
  const auto gauss = poe_rank::estimate(set, cfg);
  CHECK(gauss.method == "poe-g");
  CHECK(gauss.covariance.has_value());
}

TEST_CASE("estimate with debias reuses the fitted offsets") {
  std::vector<ComparisonRecord> records;
  for (int t = 0; t < 4; ++t) {
    records.push_back(rec(0, 1, 0.85));
    records.push_back(rec(1, 0, 0.75));
  }
  const auto set = poe_rank::validate_set(records, 2);
  const auto fitted = poe_rank::estimate_debias(set);

  EstimatorConfig cfg;
  cfg.method = poe_rank::Method::kPoeBt;
  cfg.debias = true;
  cfg.grad_tol = 1e-10;
  const auto est = poe_rank::estimate(set, cfg);
  CHECK(est.method == "poe-bt+debias");

  EstimatorConfig manual = cfg;
  manual.debias = false;
  manual.gamma = fitted.gamma_bt;
  const auto expected = poe_rank::poe_bt(set, manual);
  for (int m = 0; m < 2; ++m) {
    CHECK(est.scores[m] == doctest::Approx(expected.scores[m]).epsilon(1e-12));
  }
}

TEST_CASE("method names round trip") {
  using poe_rank::Method;
  for (const Method m : {Method::kWinRatio, Method::kAvgProb, Method::kBtHard,
                         Method::kPoeBt, Method::kPoeG, Method::kPoeGHard}) {
    CHECK(poe_rank::method_from_string(poe_rank::method_to_string(m)) == m);
  }
  CHECK_THROWS_AS(poe_rank::method_from_string("elo"), ValidationError);
}

TEST_CASE("estimators are permutation equivariant") {
  const auto set = poe_rank_test::random_connected_set(6, 9, 11);
  const std::vector<int> perm{3, 0, 5, 1, 4, 2};
  std::vector<ComparisonRecord> mapped;
  for (const auto& r : set.records) {
    ComparisonRecord m = r;
    m.i = perm[r.i];
    m.j = perm[r.j];
    mapped.push_back(m);
  }
  const auto permuted = poe_rank::validate_set(mapped, 6);

  EstimatorConfig cfg;
  cfg.zermelo_tol = 1e-12;
  cfg.grad_tol = 1e-10;
  using poe_rank::Method;
  for (const Method method : {Method::kWinRatio, Method::kAvgProb,
                              Method::kBtHard, Method::kPoeBt}) {
    cfg.method = method;
    const auto base = poe_rank::estimate(set, cfg);
    const auto moved = poe_rank::estimate(permuted, cfg);
    for (int m = 0; m < 6; ++m) {
      CHECK(moved.scores[perm[m]] ==
            doctest::Approx(base.scores[m]).epsilon(1e-6));
    }
  }
}

TEST_CASE("extreme probabilities reduce poe_bt to hard Bradley-Terry") {
  // Weighted double round-robin: i beats j twice and loses once for i < j,
  // so every item has both wins and losses and win totals are distinct.
  const int n = 4;
  std::vector<ComparisonRecord> hard;
  std::vector<ComparisonRecord> soft;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int t = 0; t < 2; ++t) {
        hard.push_back(rec_y(i, j, 1.0));
        soft.push_back(rec(i, j, 1.0 - poe_rank::kProbEpsilon));
      }
      hard.push_back(rec_y(i, j, 0.0));
      soft.push_back(rec(i, j, poe_rank::kProbEpsilon));
    }
  }
  EstimatorConfig bt_cfg;
  bt_cfg.zermelo_prior = 0.0;
  bt_cfg.zermelo_tol = 1e-10;
  bt_cfg.max_iters = 100000;
  const auto bt = poe_rank::bt_hard(poe_rank::validate_set(hard, n), bt_cfg);
  EstimatorConfig soft_cfg;
  soft_cfg.grad_tol = 1e-8;
  soft_cfg.max_iters = 100000;
  const auto pb = poe_rank::poe_bt(poe_rank::validate_set(soft, n), soft_cfg);
  CHECK(poe_rank::spearman(bt.scores, pb.scores) == 1.0);
}

TEST_CASE("symmetrized sets carry no positional signal to debias") {
  // A biased judge with equal latent scores and no noise: both judged
  // orders give the same probability, so symmetrizing lands on one half.
  const double bias = 1.0;
  std::vector<ComparisonRecord> records;
  const double p = logistic(bias);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) records.push_back(rec(i, j, p));
    }
  }
  const auto sym =
      poe_rank::symmetrize(poe_rank::validate_set(records, 4));
  const auto d = poe_rank::estimate_debias(sym);
  CHECK(d.mean_p == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(d.gamma_bt) < 1e-12);
}

TEST_CASE("estimator config is validated") {
  const auto set = poe_rank::validate_set({rec(0, 1, 0.7)}, 2);
  EstimatorConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(poe_rank::estimate(set, cfg), ValidationError);
  cfg = {};
  cfg.beta = 1.0;
  CHECK_THROWS_AS(poe_rank::estimate(set, cfg), ValidationError);
  cfg = {};
  cfg.sigma0_sq = -1.0;
  CHECK_THROWS_AS(poe_rank::estimate(set, cfg), ValidationError);
  cfg = {};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(poe_rank::estimate(set, cfg), ValidationError);
}

}  // namespace
