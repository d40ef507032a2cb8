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

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "poe_rank/comparisons.hpp"
#include "poe_rank/errors.hpp"
#include "poe_rank/estimators.hpp"
#include "poe_rank/gaussian.hpp"

namespace {

using poe_rank::ComparisonRecord;
using poe_rank::ComparisonSet;
using poe_rank::EstimatorConfig;
using poe_rank::ValidationError;

constexpr double kLog2Pi = 1.8378770664093454836;

ComparisonRecord rec(int i, int j, double p) {
  ComparisonRecord r;
  r.i = i;
  r.j = j;
  r.p = p;
  return r;
}

ComparisonRecord rec_y(int i, int j, double y) {
  ComparisonRecord r;
  r.i = i;
  r.j = j;
  r.y = y;
  return r;
}

ComparisonSet full_set(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ComparisonRecord> records;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      records.push_back(rec(i, j, 0.02 + 0.96 * poe_rank::uniform_double(rng)));
    }
  }
  return poe_rank::validate_set(std::move(records), n);
}

TEST_CASE("build_design stacks the anchor and one row per comparison") {
  const auto set = poe_rank::validate_set({rec(0, 1, 0.7)}, 2);
  const auto design = poe_rank::build_design(set, {});
  REQUIRE(design.w_tilde.rows() == 2);
  REQUIRE(design.w_tilde.cols() == 2);
  CHECK(design.w_tilde(0, 0) == 1.0);
  CHECK(design.w_tilde(0, 1) == 0.0);
  CHECK(design.w_tilde(1, 0) == 1.0);
  CHECK(design.w_tilde(1, 1) == -1.0);
  CHECK(design.mu_tilde[0] == 0.0);
  CHECK(design.mu_tilde[1] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(design.sigma_sq_tilde[0] == 1.0);
  CHECK(design.sigma_sq_tilde[1] == 1.0);
}

TEST_CASE("build_design on the full four-item set") {
  const int n = 4;
  std::vector<ComparisonRecord> records;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) records.push_back(rec(i, j, 0.5));
  }
  const auto design =
      poe_rank::build_design(poe_rank::validate_set(records, n), {});
  REQUIRE(design.w_tilde.rows() == 7);
  const double expected[7][4] = {
      {1, 0, 0, 0},  {1, -1, 0, 0}, {1, 0, -1, 0}, {1, 0, 0, -1},
      {0, 1, -1, 0}, {0, 1, 0, -1}, {0, 0, 1, -1}};
  for (int r = 0; r < 7; ++r) {
    for (int c = 0; c < n; ++c) CHECK(design.w_tilde(r, c) == expected[r][c]);
  }
  const Eigen::MatrixXd gram =
      design.w_tilde.transpose() * design.w_tilde;
  const Eigen::MatrixXd closed = poe_rank::full_set_normal_matrix(n);
  CHECK((gram - closed).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_design honors alpha, beta, and the anchor variance") {
  EstimatorConfig cfg;
  cfg.alpha = 4.0;
  cfg.beta = 0.25;
  cfg.sigma0_sq = 9.0;
  const auto set = poe_rank::validate_set({rec(0, 1, 0.75)}, 2);
  const auto design = poe_rank::build_design(set, cfg);
  CHECK(design.mu_tilde[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(design.sigma_sq_tilde[0] == 9.0);
}

TEST_CASE("build_design with hard outcomes maps wins to offset units") {
  ComparisonRecord both = rec(0, 1, 0.2);
  both.y = 1.0;
  ComparisonRecord loss = rec_y(1, 0, 0.0);
  const auto set = poe_rank::validate_set({both, loss}, 2);
  const auto design = poe_rank::build_design(set, {}, /*hard_outcomes=*/true);
  CHECK(design.mu_tilde[1] == 0.5);   // recorded outcome wins over p
  CHECK(design.mu_tilde[2] == -0.5);  // a loss lands below the offset
}

TEST_CASE("build_design requires the fields its mode consumes") {
  const auto hard_only = poe_rank::validate_set({rec_y(0, 1, 1.0)}, 2);
  CHECK_THROWS_AS(poe_rank::build_design(hard_only, {}), ValidationError);
  const auto soft_only = poe_rank::validate_set({rec(0, 1, 0.7)}, 2);
  CHECK_THROWS_AS(poe_rank::build_design(soft_only, {}, true),
                  ValidationError);
}

TEST_CASE("posterior solves the two-item system in closed form") {
  const auto set = poe_rank::validate_set({rec(0, 1, 0.7)}, 2);
  const auto post = poe_rank::posterior(poe_rank::build_design(set, {}));
  CHECK(post.mean[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(post.mean[1] == doctest::Approx(-0.2).epsilon(1e-13));
  CHECK(post.covariance(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(post.covariance(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(post.covariance(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  // Normal matrix has determinant one, so only the constant remains.
  CHECK(post.log_max_density == doctest::Approx(-kLog2Pi).epsilon(1e-12));
}

TEST_CASE("poe_g matches the worked two-item example") {
  const auto set = poe_rank::validate_set({rec(0, 1, 0.7)}, 2);
  const auto post = poe_rank::poe_g(set, {});
  CHECK(post.mean[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(post.mean[1] == doctest::Approx(-0.2).epsilon(1e-13));
}

TEST_CASE("poe_g with hard outcomes uses half-point encoding") {
  const auto set = poe_rank::validate_set({rec_y(0, 1, 1.0)}, 2);
  const auto post = poe_rank::poe_g(set, {}, /*hard_outcomes=*/true);
  CHECK(post.mean[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(post.mean[1] == doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("posterior mean agrees with a QR least-squares oracle") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 3 + static_cast<int>(seed % 10);
    const auto set =
        poe_rank_test::random_connected_set(n, 2 * n, 1000 + seed);
    const auto design = poe_rank::build_design(set, {});
    const auto post = poe_rank::posterior(design);

    Eigen::VectorXd scale =
        design.sigma_sq_tilde.array().rsqrt().matrix();
    const Eigen::MatrixXd a = scale.asDiagonal() * design.w_tilde;
    const Eigen::VectorXd b = scale.asDiagonal() * design.mu_tilde;
    const Eigen::VectorXd oracle = poe_rank_test::least_squares_qr(a, b);
    CHECK((post.mean - oracle).cwiseAbs().maxCoeff() < 1e-10);

    // Normal-equation residual of the reported mean.
    const Eigen::MatrixXd normal = a.transpose() * a;
    const Eigen::VectorXd resid = normal * post.mean - a.transpose() * b;
    CHECK(resid.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("duplicating a comparison raises the peak density") {
  auto set = poe_rank_test::random_connected_set(5, 3, 77);
  const auto base = poe_rank::poe_g(set, {});
  auto records = set.records;
  records.push_back(records.back());
  const auto widened = poe_rank::validate_set(records, 5);
  const auto dup = poe_rank::poe_g(widened, {});
  CHECK(dup.log_max_density > base.log_max_density);
}

TEST_CASE("scaling alpha scales the posterior mean exactly") {
  const auto set = poe_rank_test::random_connected_set(6, 6, 9);
  EstimatorConfig cfg;
  const auto base = poe_rank::poe_g(set, cfg);
  cfg.alpha = 2.0;
  const auto doubled = poe_rank::poe_g(set, cfg);
  for (int m = 0; m < 6; ++m) {
    CHECK(doubled.mean[m] == doctest::Approx(2.0 * base.mean[m]).epsilon(1e-15));
  }
  CHECK((doubled.covariance - base.covariance).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("beta cancels when both judged orders are present") {
  std::mt19937_64 rng(31);
  const int n = 5;
  std::vector<ComparisonRecord> records;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) {
        records.push_back(rec(i, j, 0.02 + 0.96 * poe_rank::uniform_double(rng)));
      }
    }
  }
  const auto set = poe_rank::validate_set(records, n);
  EstimatorConfig cfg;
  cfg.beta = 0.5;
  const auto base = poe_rank::poe_g(set, cfg);
  for (const double beta : {0.3, 0.7}) {
    cfg.beta = beta;
    const auto moved = poe_rank::poe_g(set, cfg);
    CHECK((moved.mean - base.mean).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sigma0 does not move relative scores on connected sets") {
  const auto set = poe_rank_test::random_connected_set(6, 8, 13);
  EstimatorConfig cfg;
  const auto base = poe_rank::poe_g(set, cfg);
  cfg.sigma0_sq = 100.0;
  const auto loose = poe_rank::poe_g(set, cfg);
  const Eigen::VectorXd db = base.mean.array() - base.mean[0];
  const Eigen::VectorXd dl = loose.mean.array() - loose.mean[0];
  CHECK((db - dl).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("poe_g rejects disconnected comparison graphs") {
  const auto set =
      poe_rank::validate_set({rec(0, 1, 0.7), rec(2, 3, 0.6)}, 4);
  try {
    poe_rank::poe_g(set, {});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("disconnected") != std::string::npos);
  }
}

TEST_CASE("full_set_normal_matrix matches the closed form") {
  const Eigen::MatrixXd m = poe_rank::full_set_normal_matrix(4);
  CHECK(m(0, 0) == 4.0);
  CHECK(m(1, 1) == 3.0);
  CHECK(m(0, 1) == -1.0);
  CHECK(m(2, 3) == -1.0);
  const Eigen::MatrixXd two = poe_rank::full_set_normal_matrix(2);
  CHECK(two(0, 0) == 2.0);
  CHECK(two(0, 1) == -1.0);
  CHECK(two(1, 1) == 1.0);
  CHECK_THROWS_AS(poe_rank::full_set_normal_matrix(1), ValidationError);
}

TEST_CASE("covariance stays symmetric") {
  const auto set = full_set(7, 55);
  const auto post = poe_rank::poe_g(set, {});
  const Eigen::MatrixXd diff =
      post.covariance - post.covariance.transpose();
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-12);
}

}  // namespace
