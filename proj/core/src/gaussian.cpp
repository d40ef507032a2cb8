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

#include "poe_rank/gaussian.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "poe_rank/errors.hpp"

namespace poe_rank {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

void check_connected(const ComparisonSet& set) {
  UnionFind uf(set.n_items);
  for (const ComparisonRecord& r : set.records) uf.unite(r.i, r.j);
  std::vector<std::vector<int>> components(set.n_items);
  for (int i = 0; i < set.n_items; ++i) components[uf.find(i)].push_back(i);
  std::vector<const std::vector<int>*> nonempty;
  for (const auto& c : components) {
    if (!c.empty()) nonempty.push_back(&c);
  }
  if (nonempty.size() <= 1) return;

  std::ostringstream os;
  os << "comparison graph is disconnected; components:";
  for (const auto* c : nonempty) {
    os << " [";
    for (std::size_t t = 0; t < c->size(); ++t) {
      if (t) os << " ";
      os << (*c)[t];
    }
    os << "]";
  }
  throw ValidationError(os.str());
}

void check_gaussian_config(const EstimatorConfig& c) {
  if (!(c.alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (!(c.beta > 0.0 && c.beta < 1.0)) {
    throw ValidationError("beta must be in (0, 1)");
  }
  if (!(c.sigma0_sq > 0.0)) throw ValidationError("sigma0_sq must be > 0");
}

}  // namespace

DesignSystem build_design(const ComparisonSet& set,
                          const EstimatorConfig& config, bool hard_outcomes) {
  check_gaussian_config(config);
  const int n = set.n_items;
  const int k = set.size();
  DesignSystem d;
  d.w_tilde = Eigen::MatrixXd::Zero(k + 1, n);
  d.mu_tilde = Eigen::VectorXd::Zero(k + 1);
  d.sigma_sq_tilde = Eigen::VectorXd::Ones(k + 1);

  d.w_tilde(0, 0) = 1.0;  // anchor row pins item 0 near zero
  d.sigma_sq_tilde[0] = config.sigma0_sq;

  for (int r = 0; r < k; ++r) {
    const ComparisonRecord& rec = set.records[r];
    double value;
    if (hard_outcomes) {
      if (!rec.y.has_value()) {
        throw ValidationError("hard-outcome design needs y on every record");
      }
      value = *rec.y;
    } else {
      if (!rec.p.has_value()) {
        throw ValidationError("design needs a probability on every record");
      }
      value = *rec.p;
    }
    d.w_tilde(r + 1, rec.i) = 1.0;
    d.w_tilde(r + 1, rec.j) = -1.0;
    d.mu_tilde[r + 1] = config.alpha * (value - config.beta);
  }
  return d;
}

GaussianPosterior posterior(const DesignSystem& design) {
  const int n = static_cast<int>(design.w_tilde.cols());
  // Scale rows by 1/sigma so the normal matrix is a plain Gram matrix.
  const Eigen::VectorXd inv_sd =
      design.sigma_sq_tilde.array().rsqrt().matrix();
  const Eigen::MatrixXd ws = inv_sd.asDiagonal() * design.w_tilde;
  const Eigen::VectorXd ms =
      (inv_sd.array() * design.mu_tilde.array()).matrix();

  const Eigen::MatrixXd normal = ws.transpose() * ws;
  const Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("normal matrix is not positive definite");
  }

  GaussianPosterior post;
  post.mean = llt.solve(ws.transpose() * ms);
  post.covariance = llt.solve(Eigen::MatrixXd::Identity(n, n));
  const double log_det =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  post.log_max_density = 0.5 * log_det - 0.5 * n * kLog2Pi;
  return post;
}

GaussianPosterior poe_g(const ComparisonSet& set, const EstimatorConfig& config,
                        bool hard_outcomes) {
  check_connected(set);
  return posterior(build_design(set, config, hard_outcomes));
}

Eigen::MatrixXd full_set_normal_matrix(int n) {
  if (n < 2) {
    throw ValidationError("need at least 2 items, got n=" + std::to_string(n));
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, -1.0);
  m.diagonal().setConstant(n - 1);
  m(0, 0) = n;
  return m;
}

}  // namespace poe_rank
