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

#ifndef POE_RANK_IO_HPP_
#define POE_RANK_IO_HPP_

#include <string>
#include <utility>
#include <vector>

#include "poe_rank/comparisons.hpp"
#include "poe_rank/estimators.hpp"
#include "poe_rank/gaussian.hpp"
#include "poe_rank/simulate.hpp"

namespace poe_rank {

// Formats a double with 17 significant digits (%.17g), enough to
// round-trip any IEEE-754 double. All numeric output funnels through
// this so that identical runs produce identical bytes.
std::string format_double(double v);

// Reads comparison records from JSON-lines (one object per line, keys
// "i", "j", optional "p", optional "y") or, when the path ends in
// ".csv", from CSV with header i,j,p,y and empty cells for absent
// fields. Throws ValidationError on unreadable files or malformed rows,
// naming the line.
std::vector<ComparisonRecord> load_records(const std::string& path);

// Writes records in the JSON-lines form load_records reads.
void write_records_jsonl(const std::string& path,
                         const std::vector<ComparisonRecord>& records);

// Judge fixture: JSON object with keys "scores" (array), "temperature",
// "noise_sd", "position_bias" (all optional but scores).
JudgeModel load_judge(const std::string& path);
void write_judge(const std::string& path, const JudgeModel& judge);

// Scores as a JSON object: {"method": ..., "n_items": ..., "scores":
// [...]}, scores indexed by item.
void write_scores(const std::string& path, const ScoreEstimate& estimate,
                  int n_items);

// Posterior export: {"mean": [...], "log_max_density": ...} plus
// row-major "covariance" when include_covariance is set.
void write_posterior(const std::string& path, const GaussianPosterior& post,
                     bool include_covariance);

// Selected pairs as JSON-lines {"i": ..., "j": ..., "step": ...}, step
// counting from 0 in commit order.
void write_pairs_jsonl(const std::string& path,
                       const std::vector<std::pair<int, int>>& pairs);
std::vector<std::pair<int, int>> load_pairs_jsonl(const std::string& path);

// Efficiency-curve table: CSV with header method,k,mean,sd,trials,
// failures, one row per (k, method), and a JSON mirror carrying the
// same rows plus metric and requested trial count.
void write_curve_csv(const std::string& path, const CurveResult& result);
void write_curve_json(const std::string& path, const CurveResult& result);

}  // namespace poe_rank

#endif  // POE_RANK_IO_HPP_
