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

#ifndef POE_RANK_COMPARISONS_HPP_
#define POE_RANK_COMPARISONS_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace poe_rank {

// Probabilities are clamped into [kProbEpsilon, 1 - kProbEpsilon]; the
// soft Bradley-Terry density and the logit are undefined at {0, 1}.
inline constexpr double kProbEpsilon = 1e-6;

// One judged pair: the judge saw item `i` in the first position and item
// `j` in the second, and reported probability `p` that `i` is better.
// `y` is an optional hard outcome (1 = i wins). Both may be present and
// need not agree; they are retained as given.
struct ComparisonRecord {
  int i = 0;
  int j = 0;
  std::optional<double> p;
  std::optional<double> y;
};

// A validated collection of comparison records over `n_items` candidates.
// `directed` distinguishes sets where (i, j) and (j, i) are separate
// observations (raw judge output) from symmetrized sets holding one
// combined record per unordered pair. Immutable after construction;
// build through validate_set() or symmetrize().
struct ComparisonSet {
  int n_items = 0;
  std::vector<ComparisonRecord> records;
  bool directed = true;
  // Number of probabilities that had to be clamped during validation.
  int clamp_warnings = 0;

  int size() const { return static_cast<int>(records.size()); }
};

// Validates records against `n` and clamps probabilities into
// [kProbEpsilon, 1 - kProbEpsilon]. Duplicate pairs are kept: repeated
// observations are repeated experts, and the order of records is
// preserved for reproducibility.
//
// Throws ValidationError when n < 2, records is empty, an index is out of
// range, a record compares an item with itself, or a record carries
// neither p nor y.
ComparisonSet validate_set(std::vector<ComparisonRecord> records, int n,
                           bool directed = true);

// Combines both presentation orders of every pair into one record per
// matched (i,j)/(j,i) couple, using the average of p_ij and 1 - p_ji.
// The result satisfies p~_ij = 1 - p~_ji by construction and removes
// positional bias. Records pair up in order of appearance, so a set
// holding every pair in both orders m times yields m combined records
// per unordered pair.
//
// Throws ValidationError if any record lacks p or lacks a matching
// reversed record.
ComparisonSet symmetrize(const ComparisonSet& set);

// Samples `k` unique pairs over `n` items such that every item appears in
// at least one pair, deterministically for a given seed. With
// `directed` false the pairs are unordered (at most n(n-1)/2, each
// emitted with a random orientation); with `directed` true, (i, j) and
// (j, i) count as distinct pairs (at most n(n-1)).
//
// Coverage is established by a random permutation chain of n-1 pairs;
// the remaining k-(n-1) pairs are drawn uniformly without replacement
// from the pairs not yet chosen.
//
// Throws ValidationError when k is outside [n-1, max pairs].
std::vector<std::pair<int, int>> sample_subset(int n, int k,
                                               std::uint64_t rng_seed,
                                               bool directed = false);

}  // namespace poe_rank

#endif  // POE_RANK_COMPARISONS_HPP_
