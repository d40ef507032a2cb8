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

#include "poe_rank/comparisons.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "poe_rank/errors.hpp"
#include "poe_rank/rng.hpp"

namespace poe_rank {

namespace {

std::string pair_str(int i, int j) {
  std::ostringstream os;
  os << "(" << i << ", " << j << ")";
  return os.str();
}

}  // namespace

ComparisonSet validate_set(std::vector<ComparisonRecord> records, int n,
                           bool directed) {
  if (n < 2) {
    throw ValidationError("need at least 2 items, got n=" + std::to_string(n));
  }
  if (records.empty()) {
    throw ValidationError("comparison set is empty");
  }
  int clamped = 0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    ComparisonRecord& r = records[k];
    const std::string where = "record " + std::to_string(k);
    if (r.i < 0 || r.i >= n || r.j < 0 || r.j >= n) {
      throw ValidationError(where + ": index out of range " +
                            pair_str(r.i, r.j) + " for n=" +
                            std::to_string(n));
    }
    if (r.i == r.j) {
      throw ValidationError(where + ": self-comparison of item " +
                            std::to_string(r.i));
    }
    if (!r.p.has_value() && !r.y.has_value()) {
      throw ValidationError(where + ": needs p or y");
    }
    if (r.p.has_value()) {
      double p = *r.p;
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(where + ": p=" + std::to_string(p) +
                              " outside [0, 1]");
      }
      const double lo = kProbEpsilon;
      const double hi = 1.0 - kProbEpsilon;
      if (p < lo || p > hi) {
        p = std::clamp(p, lo, hi);
        ++clamped;
      }
      r.p = p;
    }
    if (r.y.has_value() && *r.y != 0.0 && *r.y != 1.0) {
      throw ValidationError(where + ": y=" + std::to_string(*r.y) +
                            " not in {0, 1}");
    }
  }
  ComparisonSet set;
  set.n_items = n;
  set.records = std::move(records);
  set.directed = directed;
  set.clamp_warnings = clamped;
  return set;
}

ComparisonSet symmetrize(const ComparisonSet& set) {
  // Queue up observed probabilities per unordered pair and direction,
  // preserving order so repeated observations match up first-to-first.
  std::map<std::pair<int, int>, std::pair<std::deque<double>,
                                          std::deque<double>>> by_pair;
  std::vector<std::pair<int, int>> order;
  for (const ComparisonRecord& r : set.records) {
    if (!r.p.has_value()) {
      throw ValidationError("symmetrize needs p on every record, missing on " +
                            pair_str(r.i, r.j));
    }
    const bool forward = r.i < r.j;
    const std::pair<int, int> key =
        forward ? std::make_pair(r.i, r.j) : std::make_pair(r.j, r.i);
    auto [it, inserted] = by_pair.try_emplace(key);
    if (inserted) order.push_back(key);
    (forward ? it->second.first : it->second.second).push_back(*r.p);
  }

  std::vector<ComparisonRecord> combined;
  for (const auto& key : order) {
    auto& [fwd, rev] = by_pair.at(key);
    if (fwd.size() != rev.size()) {
      throw ValidationError("pair " + pair_str(key.first, key.second) +
                            " observed " + std::to_string(fwd.size()) +
                            " times forward but " + std::to_string(rev.size()) +
                            " times reversed; cannot symmetrize");
    }
    while (!fwd.empty()) {
      ComparisonRecord r;
      r.i = key.first;
      r.j = key.second;
      r.p = 0.5 * (fwd.front() + (1.0 - rev.front()));
      fwd.pop_front();
      rev.pop_front();
      combined.push_back(r);
    }
  }
  ComparisonSet out = validate_set(std::move(combined), set.n_items,
                                   /*directed=*/false);
  out.clamp_warnings = 0;  // averages of clamped values need no clamping
  return out;
}

std::vector<std::pair<int, int>> sample_subset(int n, int k,
                                               std::uint64_t rng_seed,
                                               bool directed) {
  if (n < 2) {
    throw ValidationError("need at least 2 items, got n=" + std::to_string(n));
  }
  const long long max_pairs = directed
                                  ? static_cast<long long>(n) * (n - 1)
                                  : static_cast<long long>(n) * (n - 1) / 2;
  if (k < n - 1 || k > max_pairs) {
    throw ValidationError("k=" + std::to_string(k) + " infeasible for n=" +
                          std::to_string(n) + "; need " +
                          std::to_string(n - 1) + " <= k <= " +
                          std::to_string(max_pairs));
  }

  std::mt19937_64 rng(rng_seed);

  // Random permutation chain: covers every item with n-1 pairs.
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  shuffle_vector(perm, rng);

  std::vector<std::pair<int, int>> chosen;
  chosen.reserve(k);
  std::set<std::pair<int, int>> used;  // directed key, or (min,max) key
  auto key_of = [directed](int a, int b) {
    return directed ? std::make_pair(a, b)
                    : std::make_pair(std::min(a, b), std::max(a, b));
  };
  for (int t = 0; t + 1 < n; ++t) {
    chosen.emplace_back(perm[t], perm[t + 1]);
    used.insert(key_of(perm[t], perm[t + 1]));
  }

  // Remaining budget: uniform without replacement from the unused pool.
  std::vector<std::pair<int, int>> pool;
  for (int a = 0; a < n; ++a) {
    for (int b = directed ? 0 : a + 1; b < n; ++b) {
      if (a == b) continue;
      if (used.count(key_of(a, b))) continue;
      pool.emplace_back(a, b);
    }
  }
  shuffle_vector(pool, rng);
  for (int t = 0; t < k - (n - 1); ++t) {
    std::pair<int, int> pick = pool[t];
    if (!directed && bounded_uint64(rng, 2) == 1) {
      std::swap(pick.first, pick.second);
    }
    chosen.push_back(pick);
  }
  return chosen;
}

}  // namespace poe_rank
