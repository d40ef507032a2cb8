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

#include "poe_rank/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "poe_rank/errors.hpp"

namespace poe_rank {

namespace {

void check_inputs(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw ValidationError("correlation inputs differ in length: " +
                          std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw ValidationError("correlation needs at least 2 entries");
  }
  const auto constant = [](const Eigen::VectorXd& v) {
    return v.maxCoeff() == v.minCoeff();
  };
  if (constant(x) || constant(y)) {
    throw ValidationError("undefined correlation: constant input vector");
  }
}

bool has_ties(const Eigen::VectorXd& v) {
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) != s.end();
}

}  // namespace

Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return v[a] < v[b]; });
  Eigen::VectorXd ranks(n);
  int start = 0;
  while (start < n) {
    int stop = start;
    while (stop + 1 < n && v[idx[stop + 1]] == v[idx[start]]) ++stop;
    // 1-based ranks start+1 .. stop+1 averaged over the tie group.
    const double r = 0.5 * (start + stop) + 1.0;
    for (int t = start; t <= stop; ++t) ranks[idx[t]] = r;
    start = stop + 1;
  }
  return ranks;
}

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  check_inputs(x, y);
  const Eigen::VectorXd cx = x.array() - x.mean();
  const Eigen::VectorXd cy = y.array() - y.mean();
  const double denom_sq = cx.squaredNorm() * cy.squaredNorm();
  return cx.dot(cy) / std::sqrt(denom_sq);
}

double spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  check_inputs(x, y);
  const Eigen::VectorXd rx = average_ranks(x);
  const Eigen::VectorXd ry = average_ranks(y);
  if (has_ties(x) || has_ties(y)) {
    return pearson(rx, ry);
  }
  // Tie-free classical form; exact +-1.0 on identical / reversed orders.
  const double n = static_cast<double>(x.size());
  const double d2 = (rx - ry).squaredNorm();
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

}  // namespace poe_rank
