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

#ifndef POE_RANK_ESTIMATORS_HPP_
#define POE_RANK_ESTIMATORS_HPP_

#include <optional>
#include <string>

#include <Eigen/Core>

#include "poe_rank/comparisons.hpp"

namespace poe_rank {

enum class Method {
  kWinRatio,   // fraction of judgments won, hard outcomes
  kAvgProb,    // mean reported probability per item
  kBtHard,     // Bradley-Terry maximum likelihood on hard outcomes
  kPoeBt,      // product of soft Bradley-Terry experts, one per judgment
  kPoeG,       // product of Gaussian experts on logit-mapped probabilities
  kPoeGHard,   // Gaussian experts fed the hard outcomes instead of p
};

// Canonical names: "win-ratio", "avg-prob", "bt-hard", "poe-bt", "poe-g",
// "poe-g-hard". Throws ValidationError on an unknown name.
Method method_from_string(const std::string& name);
std::string method_to_string(Method m);

// Positional-bias corrections estimated from the data. beta_g shifts the
// Gaussian expert means; gamma_bt shifts the soft Bradley-Terry expert
// argument. Both derive from the grand mean of reported probabilities.
struct DebiasParams {
  double mean_p = 0.5;
  double beta_g = 0.5;   // E[p]
  double gamma_bt = 0.0; // -logit(E[p])
};

// Estimates the grand mean of p over all records and the implied
// corrections. Meaningful for single-presentation-order data; a
// symmetrized set always yields mean_p = 0.5. Throws ValidationError
// when no record carries p.
DebiasParams estimate_debias(const ComparisonSet& set);

struct EstimatorConfig {
  Method method = Method::kPoeG;
  bool debias = false;

  // Gaussian expert parameters: mean alpha * (p - beta), unit variance,
  // anchor prior variance sigma0_sq on item 0.
  double alpha = 1.0;
  double beta = 0.5;
  double sigma0_sq = 1.0;

  // Soft Bradley-Terry shift. Ignored unless method is kPoeBt.
  double gamma = 0.0;

  // Iteration controls. zermelo_prior, when unset, defaults at run time
  // to 1/(n-1) pseudo-wins per direction of every observed pair.
  double zermelo_tol = 1e-4;
  std::optional<double> zermelo_prior;
  double grad_tol = 1e-6;
  int max_iters = 10000;
};

struct ScoreEstimate {
  Eigen::VectorXd scores;
  std::string method;
  // Populated only by the Gaussian methods.
  std::optional<Eigen::MatrixXd> covariance;
};

// Dispatches to the method named in config. All methods return one score
// per item; score order follows item index. Gaussian methods anchor item
// 0, the others mean-center. With config.debias set, fits DebiasParams
// on the set first and applies the matching correction (beta for the
// Gaussian methods, gamma for poe-bt; the baselines are unaffected).
// Throws ValidationError on inputs a method cannot consume (e.g. an
// estimator needing p on a set without it, a Gaussian method on a
// disconnected comparison graph) and ConvergenceError when an iterative
// solver exhausts max_iters.
ScoreEstimate estimate(const ComparisonSet& set, const EstimatorConfig& config);

// Individual estimators, exposed for direct use and testing.
ScoreEstimate win_ratio(const ComparisonSet& set);
ScoreEstimate avg_prob(const ComparisonSet& set);
ScoreEstimate bt_hard(const ComparisonSet& set, const EstimatorConfig& config);
ScoreEstimate poe_bt(const ComparisonSet& set, const EstimatorConfig& config);

// Log-density of the soft Bradley-Terry expert at score difference d for
// reported probability p (already clamped), with shift gamma:
//   p*(d-gamma) - softplus(d-gamma) + log(sin(pi*p)) - log(pi).
// The normalizer follows from int sigma(x)^p (1-sigma(x))^(1-p) dx =
// pi / sin(pi p).
double soft_bt_log_density(double d, double p, double gamma = 0.0);

// Mean of the soft Bradley-Terry expert over d for reported probability
// p: -pi * cot(pi * p). Follows from differentiating the normalizer
// pi / sin(pi p) with respect to p. Characterizes the expert; no
// estimator consumes it.
double bt_expert_mean(double p);

}  // namespace poe_rank

#endif  // POE_RANK_ESTIMATORS_HPP_
