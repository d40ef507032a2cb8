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
//
// Command-line front end: score comparison files, select informative
// pairs, run synthetic-judge simulations, and symmetrize data sets.
// Every run writes a manifest that `replay` reproduces byte-for-byte.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "poe_rank/comparisons.hpp"
#include "poe_rank/errors.hpp"
#include "poe_rank/estimators.hpp"
#include "poe_rank/gaussian.hpp"
#include "poe_rank/io.hpp"
#include "poe_rank/rng.hpp"
#include "poe_rank/selection.hpp"
#include "poe_rank/simulate.hpp"
#include "poe_rank/version.hpp"

namespace poe_rank {
namespace {

using OptionMap = std::map<std::string, std::string>;

// Seed coordinate separating the judge's latent-score draw from the
// per-trial streams.
constexpr std::uint64_t kJudgeScoreStream = 0x6a75646765ULL;

const std::string& require(const OptionMap& opts, const std::string& key) {
  const auto it = opts.find(key);
  if (it == opts.end() || it->second.empty()) {
    throw ValidationError("missing required option \"" + key + "\"");
  }
  return it->second;
}

std::string get_or(const OptionMap& opts, const std::string& key,
                   const std::string& fallback) {
  const auto it = opts.find(key);
  return it == opts.end() ? fallback : it->second;
}

int to_int(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("option \"" + key + "\": not an integer: " + s);
  }
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("option \"" + key + "\": not a number: " + s);
  }
}

std::uint64_t to_uint64(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("option \"" + key + "\": not an integer: " + s);
  }
}

bool to_bool(const std::string& s) { return s == "1" || s == "true"; }

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t from = 0;
  while (from <= s.size()) {
    const std::size_t to = s.find(',', from);
    if (to == std::string::npos) {
      out.push_back(s.substr(from));
      break;
    }
    out.push_back(s.substr(from, to - from));
    from = to + 1;
  }
  return out;
}

EstimatorConfig estimator_from_options(const OptionMap& opts) {
  EstimatorConfig cfg;
  cfg.alpha = to_double(get_or(opts, "alpha", "1"), "alpha");
  cfg.beta = to_double(get_or(opts, "beta", "0.5"), "beta");
  cfg.sigma0_sq = to_double(get_or(opts, "sigma0-sq", "1"), "sigma0-sq");
  cfg.gamma = to_double(get_or(opts, "gamma", "0"), "gamma");
  cfg.zermelo_tol =
      to_double(get_or(opts, "zermelo-tol", "0.0001"), "zermelo-tol");
  const std::string prior = get_or(opts, "zermelo-prior", "");
  if (!prior.empty()) cfg.zermelo_prior = to_double(prior, "zermelo-prior");
  cfg.grad_tol = to_double(get_or(opts, "grad-tol", "1e-06"), "grad-tol");
  cfg.max_iters = to_int(get_or(opts, "max-iters", "10000"), "max-iters");
  return cfg;
}

void store_estimator(OptionMap& opts, const EstimatorConfig& cfg) {
  opts["alpha"] = format_double(cfg.alpha);
  opts["beta"] = format_double(cfg.beta);
  opts["sigma0-sq"] = format_double(cfg.sigma0_sq);
  opts["gamma"] = format_double(cfg.gamma);
  opts["zermelo-tol"] = format_double(cfg.zermelo_tol);
  if (cfg.zermelo_prior) {
    opts["zermelo-prior"] = format_double(*cfg.zermelo_prior);
  }
  opts["grad-tol"] = format_double(cfg.grad_tol);
  opts["max-iters"] = std::to_string(cfg.max_iters);
}

void finish_manifest(const std::string& command, OptionMap opts) {
  RunManifest m;
  m.command = command;
  m.version = kVersion;
  m.options = std::move(opts);
  write_manifest(require(m.options, "manifest"), m);
}

// ---------------------------------------------------------------------------
// score

int run_score(OptionMap opts) {
  const std::string input = require(opts, "input");
  const int n = to_int(require(opts, "n"), "n");
  EstimatorConfig cfg = estimator_from_options(opts);
  cfg.method = method_from_string(require(opts, "method"));
  cfg.debias = to_bool(get_or(opts, "debias", "0"));
  const bool symmetric = to_bool(get_or(opts, "symmetric", "0"));
  const std::string out = get_or(opts, "out", "scores.json");
  opts["out"] = out;
  opts["debias"] = cfg.debias ? "1" : "0";
  opts["symmetric"] = symmetric ? "1" : "0";
  store_estimator(opts, cfg);
  if (opts.find("manifest") == opts.end()) {
    opts["manifest"] = out + ".manifest.json";
  }

  ComparisonSet set = validate_set(load_records(input), n);
  if (set.clamp_warnings > 0) {
    std::cerr << "warning: clamped " << set.clamp_warnings
              << " probabilities into the open unit interval\n";
  }
  if (symmetric) set = symmetrize(set);

  if (cfg.debias) {
    const DebiasParams d = estimate_debias(set);
    opts["result.mean-p"] = format_double(d.mean_p);
    opts["result.beta-g"] = format_double(d.beta_g);
    opts["result.gamma-bt"] = format_double(d.gamma_bt);
  }

  const ScoreEstimate est = estimate(set, cfg);
  write_scores(out, est, n);

  const std::string posterior_path = get_or(opts, "posterior", "");
  if (!posterior_path.empty()) {
    if (cfg.method != Method::kPoeG && cfg.method != Method::kPoeGHard) {
      throw ValidationError("--posterior requires a Gaussian method");
    }
    EstimatorConfig pc = cfg;
    if (cfg.debias) pc.beta = estimate_debias(set).beta_g;
    const GaussianPosterior post =
        poe_g(set, pc, cfg.method == Method::kPoeGHard);
    write_posterior(posterior_path, post, /*include_covariance=*/true);
  }

  finish_manifest("score", std::move(opts));
  std::cout << "wrote " << out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// select

// File-polling handshake for adaptive selection without a service: each
// round writes "<base>.request" holding the pair to judge and waits for
// "<base>.response" holding {"i", "j", "p"}; both files are removed
// before the next round.
double poll_probability(const std::string& base, int i, int j,
                        double timeout_s) {
  namespace fs = std::filesystem;
  const std::string request = base + ".request";
  const std::string response = base + ".response";
  write_pairs_jsonl(request, {{i, j}});

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_s);
  while (std::chrono::steady_clock::now() < deadline) {
    if (fs::exists(response)) {
      const std::vector<ComparisonRecord> records = load_records(response);
      if (records.size() != 1 || !records[0].p.has_value() ||
          records[0].i != i || records[0].j != j) {
        throw ValidationError("response " + response +
                              " does not answer pair (" + std::to_string(i) +
                              ", " + std::to_string(j) + ")");
      }
      fs::remove(request);
      fs::remove(response);
      return *records[0].p;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  throw ValidationError("timed out waiting for " + response);
}

int run_select(OptionMap opts) {
  const int n = to_int(require(opts, "n"), "n");
  const int k = to_int(require(opts, "k"), "k");
  const std::string mode_name = get_or(opts, "mode", "gaussian");
  const bool unique_pairs = to_bool(get_or(opts, "unique-pairs", "0"));
  const double sigma0_sq =
      to_double(get_or(opts, "sigma0-sq", "1"), "sigma0-sq");
  const std::string out = get_or(opts, "out", "pairs.jsonl");
  opts["mode"] = mode_name;
  opts["unique-pairs"] = unique_pairs ? "1" : "0";
  opts["sigma0-sq"] = format_double(sigma0_sq);
  opts["out"] = out;
  if (opts.find("manifest") == opts.end()) {
    opts["manifest"] = out + ".manifest.json";
  }

  SelectionMode mode;
  if (mode_name == "gaussian") {
    mode = SelectionMode::kGaussian;
  } else if (mode_name == "laplace-bt") {
    mode = SelectionMode::kLaplaceBt;
  } else {
    throw ValidationError("unknown mode \"" + mode_name + "\"");
  }

  ProbLookup lookup;
  if (mode == SelectionMode::kLaplaceBt) {
    const std::string input = get_or(opts, "input", "");
    const std::string interactive = get_or(opts, "interactive-file", "");
    if (!input.empty()) {
      // Probabilities come from a pre-judged file; selection may only
      // request pairs present there.
      auto table = std::make_shared<std::map<std::pair<int, int>, double>>();
      for (const ComparisonRecord& r : load_records(input)) {
        if (r.p.has_value()) table->try_emplace({r.i, r.j}, *r.p);
      }
      lookup = [table](int i, int j) {
        const auto it = table->find({i, j});
        if (it == table->end()) {
          throw ValidationError("input file has no probability for pair (" +
                                std::to_string(i) + ", " + std::to_string(j) +
                                ")");
        }
        return it->second;
      };
    } else if (!interactive.empty()) {
      const double timeout =
          to_double(get_or(opts, "poll-timeout", "60"), "poll-timeout");
      opts["poll-timeout"] = format_double(timeout);
      lookup = [interactive, timeout](int i, int j) {
        return poll_probability(interactive, i, j, timeout);
      };
    } else {
      throw ValidationError(
          "laplace-bt selection needs --input or --interactive-file");
    }
  }

  const std::vector<std::pair<int, int>> pairs =
      select_batch(n, k, mode, lookup, unique_pairs, sigma0_sq);
  write_pairs_jsonl(out, pairs);
  const double log_det = pairs_log_det(n, pairs, sigma0_sq);
  opts["result.log-det"] = format_double(log_det);

  finish_manifest("select", std::move(opts));
  std::cout << "log_det " << format_double(log_det) << "\n"
            << "wrote " << out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

int run_simulate(OptionMap opts) {
  CurveConfig config;
  config.estimator = estimator_from_options(opts);
  config.seed = to_uint64(get_or(opts, "seed", "0"), "seed");
  config.trials = to_int(get_or(opts, "trials", "100"), "trials");
  config.selection =
      curve_selection_from_string(get_or(opts, "selection", "random"));
  config.symmetric = !to_bool(get_or(opts, "non-symmetric", "0"));
  config.metric = metric_from_string(get_or(opts, "metric", "spearman"));
  config.threads = to_int(get_or(opts, "threads", "0"), "threads");
  config.methods = split_commas(
      get_or(opts, "methods", "win-ratio,avg-prob,poe-bt,poe-g"));

  const int k_min = to_int(require(opts, "k-min"), "k-min");
  const int k_max = to_int(require(opts, "k-max"), "k-max");
  const int k_step = to_int(get_or(opts, "k-step", "1"), "k-step");
  if (k_step < 1) throw ValidationError("k-step must be >= 1");
  if (k_max < k_min) throw ValidationError("k-max must be >= k-min");
  for (int k = k_min; k <= k_max; k += k_step) config.k_values.push_back(k);

  JudgeModel judge;
  const std::string judge_path = get_or(opts, "judge", "");
  if (!judge_path.empty()) {
    judge = load_judge(judge_path);
    // Explicit flags override fixture values; resolved values land in
    // the manifest either way.
    if (opts.count("temperature")) {
      judge.temperature = to_double(opts.at("temperature"), "temperature");
    }
    if (opts.count("noise-sd")) {
      judge.noise_sd = to_double(opts.at("noise-sd"), "noise-sd");
    }
    if (opts.count("position-bias")) {
      judge.position_bias =
          to_double(opts.at("position-bias"), "position-bias");
    }
  } else {
    const int n = to_int(require(opts, "n"), "n");
    judge = random_judge(
        n, derive_seed(config.seed, {kJudgeScoreStream}),
        to_double(get_or(opts, "temperature", "1"), "temperature"),
        to_double(get_or(opts, "noise-sd", "1"), "noise-sd"),
        to_double(get_or(opts, "position-bias", "0"), "position-bias"));
  }

  const std::string out = get_or(opts, "out", "curve.csv");
  const std::string json_out =
      out.size() > 4 && out.rfind(".csv") == out.size() - 4
          ? out.substr(0, out.size() - 4) + ".json"
          : out + ".json";

  opts["n"] = std::to_string(judge.n_items());
  opts["seed"] = std::to_string(config.seed);
  opts["trials"] = std::to_string(config.trials);
  opts["selection"] = curve_selection_to_string(config.selection);
  opts["non-symmetric"] = config.symmetric ? "0" : "1";
  opts["metric"] = metric_to_string(config.metric);
  opts["threads"] = std::to_string(config.threads);
  opts["k-min"] = std::to_string(k_min);
  opts["k-max"] = std::to_string(k_max);
  opts["k-step"] = std::to_string(k_step);
  opts["temperature"] = format_double(judge.temperature);
  opts["noise-sd"] = format_double(judge.noise_sd);
  opts["position-bias"] = format_double(judge.position_bias);
  opts["out"] = out;
  {
    std::string joined;
    for (std::size_t t = 0; t < config.methods.size(); ++t) {
      if (t) joined += ",";
      joined += config.methods[t];
    }
    opts["methods"] = joined;
  }
  store_estimator(opts, config.estimator);
  if (opts.find("manifest") == opts.end()) {
    opts["manifest"] = out + ".manifest.json";
  }

  const CurveResult result = run_curve(judge, config);
  write_curve_csv(out, result);
  write_curve_json(json_out, result);

  finish_manifest("simulate", std::move(opts));
  std::cout << "wrote " << out << " and " << json_out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// symmetrize

int run_symmetrize(OptionMap opts) {
  const std::string input = require(opts, "input");
  const int n = to_int(require(opts, "n"), "n");
  const std::string out = get_or(opts, "out", "symmetrized.jsonl");
  opts["out"] = out;
  if (opts.find("manifest") == opts.end()) {
    opts["manifest"] = out + ".manifest.json";
  }

  const ComparisonSet set = validate_set(load_records(input), n);
  const ComparisonSet sym = symmetrize(set);
  write_records_jsonl(out, sym.records);

  finish_manifest("symmetrize", std::move(opts));
  std::cout << "wrote " << out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// replay

int dispatch(const std::string& command, OptionMap opts);

int run_replay(const OptionMap& opts) {
  const RunManifest m = load_manifest(require(opts, "manifest"));
  OptionMap replayed;
  for (const auto& [key, value] : m.options) {
    if (key.rfind("result.", 0) == 0) continue;
    replayed[key] = value;
  }
  return dispatch(m.command, std::move(replayed));
}

int dispatch(const std::string& command, OptionMap opts) {
  if (command == "score") return run_score(std::move(opts));
  if (command == "select") return run_select(std::move(opts));
  if (command == "simulate") return run_simulate(std::move(opts));
  if (command == "symmetrize") return run_symmetrize(std::move(opts));
  throw ValidationError("unknown command \"" + command + "\"");
}

// ---------------------------------------------------------------------------
// flag wiring

// Records only options the user actually passed; runners fill in
// defaults and write the resolved values to the manifest.
struct OptionCapture {
  OptionMap opts;

  void add_flag(CLI::App* cmd, const std::string& flag,
                const std::string& key) {
    cmd->add_flag_callback(flag, [this, key] { opts[key] = "1"; });
  }
  void add_option(CLI::App* cmd, const std::string& flag,
                  const std::string& key, const std::string& help,
                  bool required = false) {
    auto* opt = cmd->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { opts[key] = v; }, help);
    if (required) opt->required();
  }
};

}  // namespace
}  // namespace poe_rank

int main(int argc, char** argv) {
  using namespace poe_rank;

  CLI::App app{"Pairwise-comparison ranking toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  OptionCapture score_opts, select_opts, simulate_opts, symmetrize_opts,
      replay_opts;

  CLI::App* score = app.add_subcommand("score", "Estimate item scores");
  score_opts.add_option(score, "--input", "input", "comparison file", true);
  score_opts.add_option(score, "--n", "n", "number of items", true);
  score_opts.add_option(score, "--method", "method", "estimator name", true);
  score_opts.add_flag(score, "--debias", "debias");
  score_opts.add_flag(score, "--symmetric", "symmetric");
  score_opts.add_option(score, "--alpha", "alpha", "expert mean scale");
  score_opts.add_option(score, "--beta", "beta", "expert mean offset");
  score_opts.add_option(score, "--sigma0-sq", "sigma0-sq", "anchor variance");
  score_opts.add_option(score, "--gamma", "gamma", "soft-BT shift");
  score_opts.add_option(score, "--zermelo-tol", "zermelo-tol",
                        "fixed-point tolerance");
  score_opts.add_option(score, "--zermelo-prior", "zermelo-prior",
                        "pseudo-win mass (default 1/(n-1))");
  score_opts.add_option(score, "--grad-tol", "grad-tol",
                        "gradient tolerance");
  score_opts.add_option(score, "--max-iters", "max-iters", "iteration cap");
  score_opts.add_option(score, "--out", "out", "scores output path");
  score_opts.add_option(score, "--posterior", "posterior",
                        "posterior output path (Gaussian methods)");
  score_opts.add_option(score, "--manifest", "manifest", "manifest path");

  CLI::App* select = app.add_subcommand("select", "Select informative pairs");
  select_opts.add_option(select, "--n", "n", "number of items", true);
  select_opts.add_option(select, "--k", "k", "pairs to select", true);
  select_opts.add_option(select, "--mode", "mode", "gaussian | laplace-bt");
  select_opts.add_flag(select, "--unique-pairs", "unique-pairs");
  select_opts.add_option(select, "--sigma0-sq", "sigma0-sq",
                         "anchor variance");
  select_opts.add_option(select, "--input", "input",
                         "pre-judged probabilities (laplace-bt)");
  select_opts.add_option(select, "--interactive-file", "interactive-file",
                         "base path for the request/response handshake");
  select_opts.add_option(select, "--poll-timeout", "poll-timeout",
                         "handshake timeout in seconds");
  select_opts.add_option(select, "--out", "out", "pair list output path");
  select_opts.add_option(select, "--manifest", "manifest", "manifest path");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run synthetic-judge efficiency curves");
  simulate_opts.add_option(simulate, "--n", "n", "number of items");
  simulate_opts.add_option(simulate, "--k-min", "k-min", "smallest budget",
                           true);
  simulate_opts.add_option(simulate, "--k-max", "k-max", "largest budget",
                           true);
  simulate_opts.add_option(simulate, "--k-step", "k-step", "budget step");
  simulate_opts.add_option(simulate, "--trials", "trials", "repeats per k");
  simulate_opts.add_option(simulate, "--methods", "methods",
                           "comma-separated estimators (suffix +debias)");
  simulate_opts.add_option(simulate, "--seed", "seed", "master seed");
  simulate_opts.add_option(simulate, "--judge", "judge",
                           "judge fixture JSON path");
  simulate_opts.add_option(simulate, "--selection", "selection",
                           "random | gaussian | laplace-bt");
  simulate_opts.add_flag(simulate, "--non-symmetric", "non-symmetric");
  simulate_opts.add_option(simulate, "--metric", "metric",
                           "spearman | pearson");
  simulate_opts.add_option(simulate, "--temperature", "temperature",
                           "judge temperature");
  simulate_opts.add_option(simulate, "--noise-sd", "noise-sd",
                           "judge logit-noise SD");
  simulate_opts.add_option(simulate, "--position-bias", "position-bias",
                           "judge logit offset");
  simulate_opts.add_option(simulate, "--threads", "threads",
                           "worker threads (0 = auto)");
  simulate_opts.add_option(simulate, "--alpha", "alpha", "expert mean scale");
  simulate_opts.add_option(simulate, "--beta", "beta", "expert mean offset");
  simulate_opts.add_option(simulate, "--sigma0-sq", "sigma0-sq",
                           "anchor variance");
  simulate_opts.add_option(simulate, "--zermelo-tol", "zermelo-tol",
                           "fixed-point tolerance");
  simulate_opts.add_option(simulate, "--zermelo-prior", "zermelo-prior",
                           "pseudo-win mass (default 1/(n-1))");
  simulate_opts.add_option(simulate, "--grad-tol", "grad-tol",
                           "gradient tolerance");
  simulate_opts.add_option(simulate, "--max-iters", "max-iters",
                           "iteration cap");
  simulate_opts.add_option(simulate, "--out", "out", "curve CSV path");
  simulate_opts.add_option(simulate, "--manifest", "manifest",
                           "manifest path");

  CLI::App* symmetrize_cmd =
      app.add_subcommand("symmetrize", "Combine both presentation orders");
  symmetrize_opts.add_option(symmetrize_cmd, "--input", "input",
                             "comparison file", true);
  symmetrize_opts.add_option(symmetrize_cmd, "--n", "n", "number of items",
                             true);
  symmetrize_opts.add_option(symmetrize_cmd, "--out", "out", "output path");
  symmetrize_opts.add_option(symmetrize_cmd, "--manifest", "manifest",
                             "manifest path");

  CLI::App* replay = app.add_subcommand("replay", "Re-run a manifest");
  replay_opts.add_option(replay, "--manifest", "manifest", "manifest path",
                         true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; anything else is a usage error.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (score->parsed()) return run_score(std::move(score_opts.opts));
    if (select->parsed()) return run_select(std::move(select_opts.opts));
    if (simulate->parsed()) return run_simulate(std::move(simulate_opts.opts));
    if (symmetrize_cmd->parsed()) {
      return run_symmetrize(std::move(symmetrize_opts.opts));
    }
    if (replay->parsed()) return run_replay(replay_opts.opts);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
