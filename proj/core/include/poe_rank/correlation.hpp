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

#ifndef POE_RANK_CORRELATION_HPP_
#define POE_RANK_CORRELATION_HPP_

#include <Eigen/Core>

namespace poe_rank {

// Pearson correlation coefficient. Throws ValidationError when the
// vectors differ in length, have fewer than two entries, or either is
// constant.
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Spearman rank correlation. Ties receive average (fractional) ranks.
// Without ties this uses the exact 1 - 6*sum(d^2)/(n(n^2-1)) form, so two
// identically ordered vectors score exactly 1.0; with ties it falls back
// to the Pearson correlation of the rank vectors. Throws ValidationError
// on length mismatch, fewer than two entries, or a constant input.
double spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Average ranks of the entries of v, 1-based, ties averaged. Exposed for
// testing.
Eigen::VectorXd average_ranks(const Eigen::VectorXd& v);

}  // namespace poe_rank

#endif  // POE_RANK_CORRELATION_HPP_
