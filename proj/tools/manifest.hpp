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

#ifndef POE_RANK_TOOLS_MANIFEST_HPP_
#define POE_RANK_TOOLS_MANIFEST_HPP_

#include <map>
#include <string>

namespace poe_rank {

// Every CLI run serializes its fully resolved options next to its
// outputs, so any run can be reproduced byte-for-byte by `replay`.
// Keys starting with "result." are informational (written after the
// run); replay ignores them when reconstructing the configuration and
// regenerates them identically. No timestamps or host details: the
// manifest must not change across identical runs.
struct RunManifest {
  std::string command;
  std::string version;
  std::map<std::string, std::string> options;
};

void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest load_manifest(const std::string& path);

}  // namespace poe_rank

#endif  // POE_RANK_TOOLS_MANIFEST_HPP_
