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

#ifndef POE_RANK_GAUSSIAN_HPP_
#define POE_RANK_GAUSSIAN_HPP_

#include <Eigen/Core>

#include "poe_rank/comparisons.hpp"
#include "poe_rank/estimators.hpp"

namespace poe_rank {

// Anchored linear system for the Gaussian product of experts. Row 0 is
// the anchor e_0 with target 0 and variance sigma0_sq; row k+1 encodes
// comparison k as +1 at column i, -1 at column j, target
// alpha * (p_k - beta), unit variance.
struct DesignSystem {
  Eigen::MatrixXd w_tilde;      // (K+1) x N
  Eigen::VectorXd mu_tilde;     // K+1
  Eigen::VectorXd sigma_sq_tilde;  // K+1
};

struct GaussianPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  // Log of the posterior density at its mode,
  //   0.5 * log det(W~^T Sigma~^-1 W~) - (N/2) * log(2 pi).
  // Depends on the design alone, so it doubles as the information
  // objective that pair selection maximizes.
  double log_max_density = 0.0;
};

// Builds the anchored design from a comparison set. Every record must
// carry p (use hard_outcomes to substitute y for p, which is what
// poe-g-hard does). Throws ValidationError when a needed field is
// missing.
DesignSystem build_design(const ComparisonSet& set,
                          const EstimatorConfig& config,
                          bool hard_outcomes = false);

// Solves the weighted least squares system
//   mean = (W~^T S^-1 W~)^-1 W~^T S^-1 mu~,  covariance = (W~^T S^-1 W~)^-1
// by Cholesky factorization. Throws NumericalError when the normal
// matrix is not positive definite (which cannot happen for an anchored
// design over a connected graph).
GaussianPosterior posterior(const DesignSystem& design);

// Convenience wrapper: validates connectivity, builds the design, and
// solves. This is the poe-g estimator (and poe-g-hard when
// hard_outcomes is set). Throws ValidationError when the comparison
// graph is disconnected, naming an item from each component.
GaussianPosterior poe_g(const ComparisonSet& set,
                        const EstimatorConfig& config,
                        bool hard_outcomes = false);

// Normal matrix W~^T W~ of the anchored full-set design over n items
// (every unordered pair once, lexicographic order, sigma0_sq = 1).
// Closed form: diagonal [n, n-1, ..., n-1] minus ones off-diagonal,
// with the extra +1 at (0,0) from the anchor row.
Eigen::MatrixXd full_set_normal_matrix(int n);

}  // namespace poe_rank

#endif  // POE_RANK_GAUSSIAN_HPP_
