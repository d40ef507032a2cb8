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

#include "manifest.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "poe_rank/errors.hpp"

namespace poe_rank {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

void write_manifest(const std::string& path, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot write manifest \"" + path + "\"");
  }
  // std::map keeps keys sorted, so the byte layout is deterministic.
  out << "{\n  \"command\": \"" << json_escape(manifest.command) << "\",\n";
  out << "  \"version\": \"" << json_escape(manifest.version) << "\",\n";
  out << "  \"options\": {";
  bool first = true;
  for (const auto& [key, value] : manifest.options) {
    out << (first ? "\n" : ",\n") << "    \"" << json_escape(key) << "\": \""
        << json_escape(value) << "\"";
    first = false;
  }
  out << "\n  }\n}\n";
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot read manifest \"" + path + "\"");
  }
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(in);
    RunManifest m;
    m.command = obj.at("command").get<std::string>();
    m.version = obj.at("version").get<std::string>();
    for (const auto& [key, value] : obj.at("options").items()) {
      m.options[key] = value.get<std::string>();
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace poe_rank
