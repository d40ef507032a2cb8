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

#ifndef POE_RANK_SELECTION_HPP_
#define POE_RANK_SELECTION_HPP_

#include <functional>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "poe_rank/comparisons.hpp"

namespace poe_rank {

// Incremental state for greedy determinant-maximizing pair selection.
// Maintains A = (W~^T W~)^-1 and log det(W~^T W~) across rank-one
// updates, so one greedy step costs O(n^2) to scan and O(n^2) to commit.
struct SelectionState {
  int n_items = 0;
  double sigma0_sq = 1.0;
  Eigen::MatrixXd a_inv;                       // (W~^T W~)^-1
  double log_det = 0.0;                        // log det(W~^T W~)
  std::vector<std::pair<int, int>> chosen;     // committed pairs in order
  std::set<std::pair<int, int>> chosen_pairs;  // unordered, for uniqueness

  int k() const { return static_cast<int>(chosen.size()); }
};

// Starts from the anchored strip design: the anchor row e_0 plus the
// chain pairs (0,1), (1,2), ..., (n-2,n-1). The chain guarantees a
// connected graph before any greedy choice, the square design has
// determinant one, and A^-1 is computed once directly. The chain pairs
// are recorded in `chosen` and count toward uniqueness.
SelectionState init_selection(int n, double sigma0_sq = 1.0);

// Greedy D-optimal choice: the pair (i, j), i < j, maximizing the
// determinant growth factor 1 + A_ii + A_jj - 2 A_ij. Ties break to
// the lexicographically smallest pair. Re-selecting an already chosen
// pair is legitimate (a repeat still adds information) unless
// unique_pairs is set, in which case chosen pairs are skipped; throws
// ValidationError when no candidate remains.
std::pair<int, int> next_pair_gaussian(const SelectionState& state,
                                       bool unique_pairs = false);

// Applies the rank-one update for pair (i, j):
//   A <- A - (A r)(A r)^T / (1 + r^T A r),  log det += log(1 + r^T A r)
// with r = e_i - e_j, and records the pair.
void commit_pair(SelectionState& state, int i, int j);

// Laplace approximation of the product of soft Bradley-Terry experts at
// scores s_hat: the negative Hessian of the log density, plus the
// anchor 1/sigma0_sq at (0,0) to remove the constant-shift null space.
// Entry (k,k) sums sigma(d) sigma(-d) over comparisons containing item
// k; entry (k,m) subtracts the same weight for comparisons pairing k
// with m. The weights do not involve the observed probabilities.
Eigen::MatrixXd laplace_hessian(const std::vector<std::pair<int, int>>& pairs,
                                const Eigen::VectorXd& s_hat,
                                double sigma0_sq = 1.0);
Eigen::MatrixXd laplace_hessian(const ComparisonSet& set,
                                const Eigen::VectorXd& s_hat,
                                double sigma0_sq = 1.0);

// The Gaussian that the Laplace approximation assigns to the soft
// Bradley-Terry posterior: mode s_hat, covariance = inverse of the
// anchored Hessian.
struct LaplaceApprox {
  Eigen::VectorXd s_hat;
  Eigen::MatrixXd hessian;     // anchored inverse covariance
  Eigen::MatrixXd covariance;  // its inverse, the A of the selection rule
};

LaplaceApprox laplace_approx(const std::vector<std::pair<int, int>>& pairs,
                             const Eigen::VectorXd& s_hat,
                             double sigma0_sq = 1.0);

// One step of uncertainty-weighted selection for the soft Bradley-Terry
// model: maximizes sigma(s_i - s_j) * sigma(s_j - s_i) *
// (A_ii + A_jj - 2 A_ij) with A the Laplace covariance of the
// comparisons committed so far, evaluated at the current estimate
// s_hat. The weights at every committed comparison move whenever s_hat
// does, so A is refactorized from scratch here rather than updated
// incrementally; state.a_inv is not consulted.
std::pair<int, int> next_pair_laplace_bt(const SelectionState& state,
                                         const Eigen::VectorXd& s_hat,
                                         bool unique_pairs = false);

enum class SelectionMode {
  kGaussian,
  kLaplaceBt,
};

// Looks up the judged probability for a directed pair. Required by
// laplace-bt selection, which refits scores between steps.
using ProbLookup = std::function<double(int, int)>;

// Strip initialization followed by k - (n-1) greedy steps; returns all
// k pairs in commit order (so k = n-1 reproduces the chain exactly).
// Gaussian mode never consults probabilities. Laplace-bt mode judges
// each committed pair through `probs` and refits the soft Bradley-Terry
// scores before every step.
std::vector<std::pair<int, int>> select_batch(int n, int k,
                                              SelectionMode mode,
                                              const ProbLookup& probs = {},
                                              bool unique_pairs = false,
                                              double sigma0_sq = 1.0);

// log det(W~^T W~) of the anchored design holding exactly the given
// pairs, computed by direct factorization. Lets any pair list (sampled
// or selected) be scored on the information objective.
double pairs_log_det(int n, const std::vector<std::pair<int, int>>& pairs,
                     double sigma0_sq = 1.0);

}  // namespace poe_rank

#endif  // POE_RANK_SELECTION_HPP_
