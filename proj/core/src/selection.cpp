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

#include "poe_rank/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "poe_rank/errors.hpp"
#include "poe_rank/estimators.hpp"

namespace poe_rank {

namespace {

double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::pair<int, int> unordered_key(int i, int j) {
  return {std::min(i, j), std::max(i, j)};
}

void check_pair(int n, int i, int j) {
  if (i < 0 || i >= n || j < 0 || j >= n || i == j) {
    throw ValidationError("invalid pair (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") for n=" + std::to_string(n));
  }
}

// Shared argmax scan over unordered pairs. The strict > comparison makes
// ties resolve to the lexicographically smallest pair.
template <typename Objective>
std::pair<int, int> argmax_pair(int n, const std::set<std::pair<int, int>>& skip,
                                bool unique_pairs, const Objective& objective) {
  std::pair<int, int> best{-1, -1};
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (unique_pairs && skip.count({i, j})) continue;
      const double value = objective(i, j);
      if (value > best_value) {
        best_value = value;
        best = {i, j};
      }
    }
  }
  if (best.first < 0) {
    throw ValidationError("no admissible pair remains");
  }
  return best;
}

}  // namespace

SelectionState init_selection(int n, double sigma0_sq) {
  if (n < 2) {
    throw ValidationError("need at least 2 items, got n=" + std::to_string(n));
  }
  if (!(sigma0_sq > 0.0)) throw ValidationError("sigma0_sq must be > 0");

  SelectionState state;
  state.n_items = n;
  state.sigma0_sq = sigma0_sq;

  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  normal(0, 0) = 1.0 / sigma0_sq;
  for (int t = 0; t + 1 < n; ++t) {
    normal(t, t) += 1.0;
    normal(t + 1, t + 1) += 1.0;
    normal(t, t + 1) -= 1.0;
    normal(t + 1, t) -= 1.0;
    state.chosen.emplace_back(t, t + 1);
    state.chosen_pairs.insert({t, t + 1});
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("strip design matrix not positive definite");
  }
  state.a_inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  state.log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return state;
}

std::pair<int, int> next_pair_gaussian(const SelectionState& state,
                                       bool unique_pairs) {
  const Eigen::MatrixXd& a = state.a_inv;
  return argmax_pair(state.n_items, state.chosen_pairs, unique_pairs,
                     [&a](int i, int j) {
                       return a(i, i) + a(j, j) - 2.0 * a(i, j);
                     });
}

void commit_pair(SelectionState& state, int i, int j) {
  check_pair(state.n_items, i, j);
  const Eigen::VectorXd ar = state.a_inv.col(i) - state.a_inv.col(j);
  const double gain = ar[i] - ar[j];  // r^T A r
  const double denom = 1.0 + gain;
  if (!(denom > 0.0)) {
    throw NumericalError("rank-one update lost positive definiteness");
  }
  state.a_inv.noalias() -= (ar * ar.transpose()) / denom;
  state.log_det += std::log(denom);
  state.chosen.emplace_back(i, j);
  state.chosen_pairs.insert(unordered_key(i, j));
}

Eigen::MatrixXd laplace_hessian(const std::vector<std::pair<int, int>>& pairs,
                                const Eigen::VectorXd& s_hat,
                                double sigma0_sq) {
  if (!(sigma0_sq > 0.0)) throw ValidationError("sigma0_sq must be > 0");
  const int n = static_cast<int>(s_hat.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : pairs) {
    check_pair(n, i, j);
    const double sig = logistic(s_hat[i] - s_hat[j]);
    const double w = sig * (1.0 - sig);
    h(i, i) += w;
    h(j, j) += w;
    h(i, j) -= w;
    h(j, i) -= w;
  }
  h(0, 0) += 1.0 / sigma0_sq;
  return h;
}

Eigen::MatrixXd laplace_hessian(const ComparisonSet& set,
                                const Eigen::VectorXd& s_hat,
                                double sigma0_sq) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(set.records.size());
  for (const ComparisonRecord& r : set.records) pairs.emplace_back(r.i, r.j);
  return laplace_hessian(pairs, s_hat, sigma0_sq);
}

LaplaceApprox laplace_approx(const std::vector<std::pair<int, int>>& pairs,
                             const Eigen::VectorXd& s_hat, double sigma0_sq) {
  LaplaceApprox approx;
  approx.s_hat = s_hat;
  approx.hessian = laplace_hessian(pairs, s_hat, sigma0_sq);
  const int n = static_cast<int>(s_hat.size());
  const Eigen::LLT<Eigen::MatrixXd> llt(approx.hessian);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Laplace Hessian not positive definite");
  }
  approx.covariance = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return approx;
}

std::pair<int, int> next_pair_laplace_bt(const SelectionState& state,
                                         const Eigen::VectorXd& s_hat,
                                         bool unique_pairs) {
  if (static_cast<int>(s_hat.size()) != state.n_items) {
    throw ValidationError("score vector length " +
                          std::to_string(s_hat.size()) + " does not match n=" +
                          std::to_string(state.n_items));
  }
  const LaplaceApprox approx =
      laplace_approx(state.chosen, s_hat, state.sigma0_sq);
  const Eigen::MatrixXd& a = approx.covariance;
  return argmax_pair(state.n_items, state.chosen_pairs, unique_pairs,
                     [&](int i, int j) {
                       const double sig = logistic(s_hat[i] - s_hat[j]);
                       const double weight = sig * (1.0 - sig);
                       return weight * (a(i, i) + a(j, j) - 2.0 * a(i, j));
                     });
}

std::vector<std::pair<int, int>> select_batch(int n, int k, SelectionMode mode,
                                              const ProbLookup& probs,
                                              bool unique_pairs,
                                              double sigma0_sq) {
  if (k < n - 1) {
    throw ValidationError("k=" + std::to_string(k) +
                          " cannot cover n=" + std::to_string(n) +
                          " items; need k >= " + std::to_string(n - 1));
  }
  const long long max_unique = static_cast<long long>(n) * (n - 1) / 2;
  if (unique_pairs && k > max_unique) {
    throw ValidationError("k=" + std::to_string(k) +
                          " exceeds the " + std::to_string(max_unique) +
                          " distinct pairs of n=" + std::to_string(n));
  }
  if (mode == SelectionMode::kLaplaceBt && !probs) {
    throw ValidationError(
        "laplace-bt selection needs a probability lookup to refit scores");
  }

  SelectionState state = init_selection(n, sigma0_sq);

  std::vector<ComparisonRecord> records;
  if (mode == SelectionMode::kLaplaceBt) {
    for (const auto& [i, j] : state.chosen) {
      records.push_back({i, j, probs(i, j), std::nullopt});
    }
  }

  while (state.k() < k) {
    std::pair<int, int> pick;
    if (mode == SelectionMode::kGaussian) {
      pick = next_pair_gaussian(state, unique_pairs);
    } else {
      EstimatorConfig cfg;
      cfg.method = Method::kPoeBt;
      const ComparisonSet judged = validate_set(records, n);
      pick = next_pair_laplace_bt(state, poe_bt(judged, cfg).scores,
                                  unique_pairs);
      records.push_back({pick.first, pick.second,
                         probs(pick.first, pick.second), std::nullopt});
    }
    commit_pair(state, pick.first, pick.second);
  }
  return state.chosen;
}

double pairs_log_det(int n, const std::vector<std::pair<int, int>>& pairs,
                     double sigma0_sq) {
  if (n < 2) {
    throw ValidationError("need at least 2 items, got n=" + std::to_string(n));
  }
  if (!(sigma0_sq > 0.0)) throw ValidationError("sigma0_sq must be > 0");
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  normal(0, 0) = 1.0 / sigma0_sq;
  for (const auto& [i, j] : pairs) {
    check_pair(n, i, j);
    normal(i, i) += 1.0;
    normal(j, j) += 1.0;
    normal(i, j) -= 1.0;
    normal(j, i) -= 1.0;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "design is singular (pairs do not connect all items)");
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace poe_rank
