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

#include "poe_rank/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "poe_rank/errors.hpp"
#include "poe_rank/gaussian.hpp"

namespace poe_rank {

namespace {

constexpr double kPi = 3.14159265358979323846;

double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

void check_config(const EstimatorConfig& c) {
  if (!(c.alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (!(c.beta > 0.0 && c.beta < 1.0)) {
    throw ValidationError("beta must be in (0, 1)");
  }
  if (!(c.sigma0_sq > 0.0)) throw ValidationError("sigma0_sq must be > 0");
  if (!(c.zermelo_tol > 0.0)) throw ValidationError("zermelo_tol must be > 0");
  if (!(c.grad_tol > 0.0)) throw ValidationError("grad_tol must be > 0");
  if (c.zermelo_prior && !(*c.zermelo_prior >= 0.0)) {
    throw ValidationError("zermelo_prior must be >= 0");
  }
  if (c.max_iters < 1) throw ValidationError("max_iters must be >= 1");
}

void require_probabilities(const ComparisonSet& set, const char* who) {
  for (const ComparisonRecord& r : set.records) {
    if (!r.p.has_value()) {
      throw ValidationError(std::string(who) +
                            " needs a probability on every record");
    }
  }
}

void require_coverage(const ComparisonSet& set, const char* who) {
  std::vector<int> games(set.n_items, 0);
  for (const ComparisonRecord& r : set.records) {
    ++games[r.i];
    ++games[r.j];
  }
  for (int i = 0; i < set.n_items; ++i) {
    if (games[i] == 0) {
      throw ValidationError(std::string(who) + ": item " + std::to_string(i) +
                            " appears in no comparison");
    }
  }
}

// Hard outcome for item i of a record: y when present, otherwise the
// decision of p with ties at 0.5 split half each way.
double hard_outcome(const ComparisonRecord& r) {
  if (r.y.has_value()) return *r.y;
  if (*r.p > 0.5) return 1.0;
  if (*r.p < 0.5) return 0.0;
  return 0.5;
}

void mean_center(Eigen::VectorXd& s) { s.array() -= s.mean(); }

// Per-unordered-pair aggregation for the minorize-maximize iteration:
// fractional wins each way plus the number of games.
struct PairCounts {
  int a = 0, b = 0;      // a < b
  double wins_a = 0.0;   // wins of a over b
  double wins_b = 0.0;
  double games() const { return wins_a + wins_b; }
};

std::vector<PairCounts> aggregate_pairs(const ComparisonSet& set, bool hard,
                                        double prior) {
  std::map<std::pair<int, int>, PairCounts> agg;
  for (const ComparisonRecord& r : set.records) {
    const int a = std::min(r.i, r.j);
    const int b = std::max(r.i, r.j);
    PairCounts& pc = agg[{a, b}];
    pc.a = a;
    pc.b = b;
    const double o = hard ? hard_outcome(r) : *r.p;  // win mass for r.i
    const double wins_i = o;
    const double wins_j = 1.0 - o;
    if (r.i == a) {
      pc.wins_a += wins_i;
      pc.wins_b += wins_j;
    } else {
      pc.wins_a += wins_j;
      pc.wins_b += wins_i;
    }
  }
  std::vector<PairCounts> out;
  out.reserve(agg.size());
  for (auto& [key, pc] : agg) {
    pc.wins_a += prior;
    pc.wins_b += prior;
    out.push_back(pc);
  }
  return out;
}

// Bradley-Terry minorize-maximize fixed point (Zermelo's iteration):
//   pi_i <- W_i / sum_j n_ij / (pi_i + pi_j),
// normalized to zero-mean log scores each sweep. Works for fractional
// win counts, which covers both the hard-outcome baseline and the soft
// product of experts at gamma = 0. `use_grad_stop` picks between the
// gradient criterion (soft PoE) and the score-delta criterion (hard BT).
Eigen::VectorXd zermelo(int n, const std::vector<PairCounts>& pairs,
                        const EstimatorConfig& cfg, bool use_grad_stop,
                        const char* who) {
  Eigen::VectorXd total_wins = Eigen::VectorXd::Zero(n);
  for (const PairCounts& pc : pairs) {
    total_wins[pc.a] += pc.wins_a;
    total_wins[pc.b] += pc.wins_b;
  }

  Eigen::VectorXd pi = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd denom(n);
  double residual = 0.0;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    denom.setZero();
    for (const PairCounts& pc : pairs) {
      const double shared = pc.games() / (pi[pc.a] + pi[pc.b]);
      denom[pc.a] += shared;
      denom[pc.b] += shared;
    }
    const Eigen::VectorXd next = (total_wins.array() / denom.array()).matrix();
    // Normalize in the log domain so score deltas are well-defined.
    Eigen::VectorXd log_next = next.array().log().matrix();
    log_next.array() -= log_next.mean();

    const Eigen::VectorXd log_pi = pi.array().log().matrix();
    const double delta = (log_next - log_pi).cwiseAbs().maxCoeff();
    pi = log_next.array().exp().matrix();

    if (use_grad_stop) {
      Eigen::VectorXd grad = total_wins;
      for (const PairCounts& pc : pairs) {
        const double p_ab = pi[pc.a] / (pi[pc.a] + pi[pc.b]);
        grad[pc.a] -= pc.games() * p_ab;
        grad[pc.b] -= pc.games() * (1.0 - p_ab);
      }
      residual = grad.cwiseAbs().maxCoeff();
      if (residual < cfg.grad_tol) return log_next;
    } else {
      residual = delta;
      if (residual < cfg.zermelo_tol) return log_next;
    }
  }
  throw ConvergenceError(std::string(who) + " did not converge in " +
                             std::to_string(cfg.max_iters) + " iterations",
                         residual, cfg.max_iters);
}

double poe_bt_objective(const ComparisonSet& set, const Eigen::VectorXd& s,
                        double gamma) {
  double f = 0.0;
  for (const ComparisonRecord& r : set.records) {
    const double d = s[r.i] - s[r.j] - gamma;
    f += *r.p * d - softplus(d);
  }
  return f;
}

Eigen::VectorXd poe_bt_gradient(const ComparisonSet& set,
                                const Eigen::VectorXd& s, double gamma) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(s.size());
  for (const ComparisonRecord& r : set.records) {
    const double resid = *r.p - logistic(s[r.i] - s[r.j] - gamma);
    g[r.i] += resid;
    g[r.j] -= resid;
  }
  return g;
}

// Damped Newton ascent for the shifted objective. The plain fixed
// point does not accommodate the gamma term, so the debiased variant
// climbs the (concave) objective directly. The objective is invariant
// to a common shift of all scores, which makes the Hessian singular
// along the all-ones direction; adding ones*ones^T / n restores
// definiteness without changing the solve for the mean-zero gradient.
Eigen::VectorXd poe_bt_ascent(const ComparisonSet& set,
                              const EstimatorConfig& cfg) {
  const int n = set.n_items;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  double f = poe_bt_objective(set, s, cfg.gamma);
  double grad_norm = 0.0;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const Eigen::VectorXd g = poe_bt_gradient(set, s, cfg.gamma);
    grad_norm = g.cwiseAbs().maxCoeff();
    if (grad_norm < cfg.grad_tol) {
      mean_center(s);
      return s;
    }
    Eigen::MatrixXd h = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    for (const ComparisonRecord& r : set.records) {
      const double q = logistic(s[r.i] - s[r.j] - cfg.gamma);
      const double w = q * (1.0 - q);
      h(r.i, r.i) += w;
      h(r.j, r.j) += w;
      h(r.i, r.j) -= w;
      h(r.j, r.i) -= w;
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(h);
    Eigen::VectorXd dir;
    if (llt.info() == Eigen::Success) {
      dir = llt.solve(g);
    } else {
      dir = g;
    }
    double slope = dir.dot(g);
    if (!(slope > 0.0)) {
      dir = g;
      slope = g.squaredNorm();
    }
    double step = 1.0;
    for (;;) {
      const Eigen::VectorXd trial = s + step * dir;
      const double f_trial = poe_bt_objective(set, trial, cfg.gamma);
      if (f_trial >= f + 1e-4 * step * slope) {
        s = trial;
        f = f_trial;
        break;
      }
      step *= 0.5;
      if (step < 1e-18) {
        throw ConvergenceError("poe-bt line search stalled", grad_norm, iter);
      }
    }
  }
  throw ConvergenceError("poe-bt did not converge in " +
                             std::to_string(cfg.max_iters) + " iterations",
                         grad_norm, cfg.max_iters);
}

}  // namespace

Method method_from_string(const std::string& name) {
  if (name == "win-ratio") return Method::kWinRatio;
  if (name == "avg-prob") return Method::kAvgProb;
  if (name == "bt-hard") return Method::kBtHard;
  if (name == "poe-bt") return Method::kPoeBt;
  if (name == "poe-g") return Method::kPoeG;
  if (name == "poe-g-hard") return Method::kPoeGHard;
  throw ValidationError("unknown method \"" + name + "\"");
}

std::string method_to_string(Method m) {
  switch (m) {
    case Method::kWinRatio: return "win-ratio";
    case Method::kAvgProb: return "avg-prob";
    case Method::kBtHard: return "bt-hard";
    case Method::kPoeBt: return "poe-bt";
    case Method::kPoeG: return "poe-g";
    case Method::kPoeGHard: return "poe-g-hard";
  }
  throw ValidationError("unknown method enum value");
}

DebiasParams estimate_debias(const ComparisonSet& set) {
  double sum = 0.0;
  int count = 0;
  for (const ComparisonRecord& r : set.records) {
    if (r.p.has_value()) {
      sum += *r.p;
      ++count;
    }
  }
  if (count == 0) {
    throw ValidationError("debias estimation needs probabilities");
  }
  DebiasParams d;
  d.mean_p = sum / count;
  d.beta_g = d.mean_p;
  d.gamma_bt = -logit(d.mean_p);
  return d;
}

ScoreEstimate win_ratio(const ComparisonSet& set) {
  require_coverage(set, "win-ratio");
  Eigen::VectorXd wins = Eigen::VectorXd::Zero(set.n_items);
  Eigen::VectorXd games = Eigen::VectorXd::Zero(set.n_items);
  for (const ComparisonRecord& r : set.records) {
    const double o = hard_outcome(r);
    wins[r.i] += o;
    wins[r.j] += 1.0 - o;
    games[r.i] += 1.0;
    games[r.j] += 1.0;
  }
  ScoreEstimate est;
  est.scores = (wins.array() / games.array()).matrix();
  est.method = "win-ratio";
  return est;
}

ScoreEstimate avg_prob(const ComparisonSet& set) {
  require_probabilities(set, "avg-prob");
  require_coverage(set, "avg-prob");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(set.n_items);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(set.n_items);
  for (const ComparisonRecord& r : set.records) {
    sum[r.i] += *r.p;
    sum[r.j] += 1.0 - *r.p;
    count[r.i] += 1.0;
    count[r.j] += 1.0;
  }
  ScoreEstimate est;
  est.scores = (sum.array() / count.array()).matrix();
  est.method = "avg-prob";
  return est;
}

ScoreEstimate bt_hard(const ComparisonSet& set, const EstimatorConfig& config) {
  check_config(config);
  require_coverage(set, "bt-hard");
  const double prior =
      config.zermelo_prior ? *config.zermelo_prior : 1.0 / (set.n_items - 1);
  const std::vector<PairCounts> pairs =
      aggregate_pairs(set, /*hard=*/true, prior);
  ScoreEstimate est;
  est.scores = zermelo(set.n_items, pairs, config,
                       /*use_grad_stop=*/false, "bt-hard");
  mean_center(est.scores);
  est.method = "bt-hard";
  return est;
}

ScoreEstimate poe_bt(const ComparisonSet& set, const EstimatorConfig& config) {
  check_config(config);
  require_probabilities(set, "poe-bt");
  require_coverage(set, "poe-bt");
  ScoreEstimate est;
  if (config.gamma == 0.0) {
    const std::vector<PairCounts> pairs =
        aggregate_pairs(set, /*hard=*/false, /*prior=*/0.0);
    est.scores = zermelo(set.n_items, pairs, config,
                         /*use_grad_stop=*/true, "poe-bt");
  } else {
    est.scores = poe_bt_ascent(set, config);
  }
  mean_center(est.scores);
  est.method = "poe-bt";
  return est;
}

double soft_bt_log_density(double d, double p, double gamma) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("soft-BT density defined for p in (0, 1) only");
  }
  const double x = d - gamma;
  return p * x - softplus(x) + std::log(std::sin(kPi * p)) - std::log(kPi);
}

double bt_expert_mean(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("bt_expert_mean defined for p in (0, 1) only");
  }
  return -kPi * std::cos(kPi * p) / std::sin(kPi * p);
}

ScoreEstimate estimate(const ComparisonSet& set,
                       const EstimatorConfig& config) {
  check_config(config);
  EstimatorConfig cfg = config;
  if (config.debias) {
    const DebiasParams d = estimate_debias(set);
    switch (config.method) {
      case Method::kPoeG:
      case Method::kPoeGHard:
        cfg.beta = d.beta_g;
        break;
      case Method::kPoeBt:
        cfg.gamma = d.gamma_bt;
        break;
      default:
        break;  // baselines have no bias parameter
    }
  }

  ScoreEstimate est;
  switch (cfg.method) {
    case Method::kWinRatio:
      est = win_ratio(set);
      break;
    case Method::kAvgProb:
      est = avg_prob(set);
      break;
    case Method::kBtHard:
      est = bt_hard(set, cfg);
      break;
    case Method::kPoeBt:
      est = poe_bt(set, cfg);
      break;
    case Method::kPoeG:
    case Method::kPoeGHard: {
      const GaussianPosterior post =
          poe_g(set, cfg, cfg.method == Method::kPoeGHard);
      est.scores = post.mean;
      est.covariance = post.covariance;
      est.method = method_to_string(cfg.method);
      break;
    }
  }
  if (config.debias) est.method += "+debias";
  return est;
}

}  // namespace poe_rank
