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

#include "poe_rank/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "poe_rank/errors.hpp"

namespace poe_rank {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot read \"" + path + "\"");
  }
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot write \"" + path + "\"");
  }
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r\n");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r\n");
  return s.substr(from, to - from + 1);
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(where + ": not a number: \"" + s + "\"");
  }
}

std::vector<ComparisonRecord> load_records_csv(std::ifstream& in,
                                               const std::string& path) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "i,j,p,y") {
    throw ValidationError(path + ": expected CSV header \"i,j,p,y\"");
  }
  std::vector<ComparisonRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    // A trailing empty y cell is eaten by getline; restore it.
    while (cells.size() < 4) cells.push_back("");
    if (cells.size() != 4) {
      throw ValidationError(where + ": expected 4 cells");
    }
    ComparisonRecord r;
    r.i = static_cast<int>(parse_double(cells[0], where));
    r.j = static_cast<int>(parse_double(cells[1], where));
    if (!cells[2].empty()) r.p = parse_double(cells[2], where);
    if (!cells[3].empty()) r.y = parse_double(cells[3], where);
    records.push_back(r);
  }
  return records;
}

std::vector<ComparisonRecord> load_records_jsonl(std::ifstream& in,
                                                 const std::string& path) {
  std::vector<ComparisonRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("i") || !obj.contains("j")) {
      throw ValidationError(where + ": need an object with \"i\" and \"j\"");
    }
    try {
      ComparisonRecord r;
      r.i = obj.at("i").get<int>();
      r.j = obj.at("j").get<int>();
      if (obj.contains("p") && !obj.at("p").is_null()) {
        r.p = obj.at("p").get<double>();
      }
      if (obj.contains("y") && !obj.at("y").is_null()) {
        r.y = obj.at("y").get<double>();
      }
      records.push_back(r);
    } catch (const json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return records;
}

void append_double_array(std::string& out, const double* data, int count) {
  out += "[";
  for (int t = 0; t < count; ++t) {
    if (t) out += ", ";
    out += format_double(data[t]);
  }
  out += "]";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<ComparisonRecord> load_records(const std::string& path) {
  std::ifstream in = open_in(path);
  return ends_with(path, ".csv") ? load_records_csv(in, path)
                                 : load_records_jsonl(in, path);
}

void write_records_jsonl(const std::string& path,
                         const std::vector<ComparisonRecord>& records) {
  std::ofstream out = open_out(path);
  for (const ComparisonRecord& r : records) {
    std::string line = "{\"i\": " + std::to_string(r.i) +
                       ", \"j\": " + std::to_string(r.j);
    if (r.p) line += ", \"p\": " + format_double(*r.p);
    if (r.y) line += ", \"y\": " + std::to_string(static_cast<int>(*r.y));
    line += "}\n";
    out << line;
  }
}

JudgeModel load_judge(const std::string& path) {
  std::ifstream in = open_in(path);
  json obj;
  try {
    obj = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  if (!obj.is_object() || !obj.contains("scores") ||
      !obj.at("scores").is_array()) {
    throw ValidationError(path + ": judge fixture needs a \"scores\" array");
  }
  JudgeModel judge;
  try {
    const auto& scores = obj.at("scores");
    judge.latent_scores.resize(static_cast<int>(scores.size()));
    for (std::size_t t = 0; t < scores.size(); ++t) {
      judge.latent_scores[static_cast<int>(t)] = scores.at(t).get<double>();
    }
    judge.temperature = obj.value("temperature", 1.0);
    judge.noise_sd = obj.value("noise_sd", 1.0);
    judge.position_bias = obj.value("position_bias", 0.0);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return judge;
}

void write_judge(const std::string& path, const JudgeModel& judge) {
  std::string body = "{\"scores\": ";
  append_double_array(body, judge.latent_scores.data(), judge.n_items());
  body += ", \"temperature\": " + format_double(judge.temperature);
  body += ", \"noise_sd\": " + format_double(judge.noise_sd);
  body += ", \"position_bias\": " + format_double(judge.position_bias);
  body += "}\n";
  open_out(path) << body;
}

void write_scores(const std::string& path, const ScoreEstimate& estimate,
                  int n_items) {
  std::string body = "{\"method\": \"" + estimate.method + "\"";
  body += ", \"n_items\": " + std::to_string(n_items);
  body += ", \"scores\": ";
  append_double_array(body, estimate.scores.data(),
                      static_cast<int>(estimate.scores.size()));
  body += "}\n";
  open_out(path) << body;
}

void write_posterior(const std::string& path, const GaussianPosterior& post,
                     bool include_covariance) {
  const int n = static_cast<int>(post.mean.size());
  std::string body = "{\"mean\": ";
  append_double_array(body, post.mean.data(), n);
  if (include_covariance) {
    // Flat row-major array, indexed explicitly since Eigen stores
    // column-major.
    body += ", \"covariance\": [";
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (r || c) body += ", ";
        body += format_double(post.covariance(r, c));
      }
    }
    body += "]";
  }
  body += ", \"log_max_density\": " + format_double(post.log_max_density);
  body += "}\n";
  open_out(path) << body;
}

void write_pairs_jsonl(const std::string& path,
                       const std::vector<std::pair<int, int>>& pairs) {
  std::ofstream out = open_out(path);
  for (std::size_t step = 0; step < pairs.size(); ++step) {
    out << "{\"i\": " << pairs[step].first << ", \"j\": " << pairs[step].second
        << ", \"step\": " << step << "}\n";
  }
}

std::vector<std::pair<int, int>> load_pairs_jsonl(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::pair<int, int>> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    try {
      const json obj = json::parse(line);
      pairs.emplace_back(obj.at("i").get<int>(), obj.at("j").get<int>());
    } catch (const json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return pairs;
}

void write_curve_csv(const std::string& path, const CurveResult& result) {
  std::ofstream out = open_out(path);
  out << "method,k,mean,sd,trials,failures\n";
  for (const CurveRow& row : result.rows) {
    out << row.method << "," << row.k << "," << format_double(row.mean) << ","
        << format_double(row.sd) << "," << row.trials << "," << row.failures
        << "\n";
  }
}

void write_curve_json(const std::string& path, const CurveResult& result) {
  std::string body = "{\"metric\": \"" + metric_to_string(result.metric) +
                     "\", \"trials\": " + std::to_string(result.trials) +
                     ", \"k_values\": [";
  for (std::size_t t = 0; t < result.k_values.size(); ++t) {
    if (t) body += ", ";
    body += std::to_string(result.k_values[t]);
  }
  body += "], \"rows\": [";
  for (std::size_t t = 0; t < result.rows.size(); ++t) {
    const CurveRow& row = result.rows[t];
    if (t) body += ", ";
    body += "{\"method\": \"" + row.method + "\", \"k\": " +
            std::to_string(row.k) + ", \"mean\": " + format_double(row.mean) +
            ", \"sd\": " + format_double(row.sd) + ", \"trials\": " +
            std::to_string(row.trials) + ", \"failures\": " +
            std::to_string(row.failures) + "}";
  }
  body += "]}\n";
  open_out(path) << body;
}

}  // namespace poe_rank
