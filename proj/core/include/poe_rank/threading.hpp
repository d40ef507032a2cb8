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

#ifndef POE_RANK_THREADING_HPP_
#define POE_RANK_THREADING_HPP_

#include <functional>

namespace poe_rank {

// Worker count for parallel sections: `requested` if positive, otherwise
// hardware concurrency, in both cases capped by the POE_RANK_THREADS
// environment variable when set to a positive integer. Never less
// than 1.
int resolve_thread_count(int requested = 0);

// Runs fn(i) for i in [0, count) across `threads` workers. Exceptions
// are captured and the first one rethrown after all workers join.
// Callers make results deterministic by writing to slot i only.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace poe_rank

#endif  // POE_RANK_THREADING_HPP_
