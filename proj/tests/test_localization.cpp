/* Copyright 2026 The swarmsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "swarmsim/errors.hpp"
#include "swarmsim/localization.hpp"
#include "swarmsim/rng.hpp"

using namespace swarmsim;

namespace {

ChannelParams default_channel() {
  ChannelParams p;
  p.tx_power_dbm = 20.0;
  p.ref_path_loss_db = 40.0;
  p.ref_distance_m = 1.0;
  p.path_loss_exponent = 2.0;
  p.shadow_variance_db2 = 2.0;
  return p;
}

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("raw distance inversion") {
  ChannelParams p = default_channel();
  CHECK(estimate_distance_raw(p.tx_power_dbm - p.ref_path_loss_db, p) ==
        doctest::Approx(p.ref_distance_m));
  CHECK(estimate_distance_raw(-40.0, p) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("log-normal shape parameter") {
  ChannelParams p = default_channel();
  double expect = std::sqrt(2.0) * std::log(10.0) / 20.0;
  CHECK(distance_log_sigma(p) == doctest::Approx(expect).epsilon(1e-12));

  p.shadow_variance_db2 = 0.0;
  CHECK(distance_log_sigma(p) == 0.0);

  p.shadow_variance_db2 = 2.0;
  double base = distance_log_sigma(p);
  p.path_loss_exponent = 4.0;
  CHECK(distance_log_sigma(p) == doctest::Approx(0.5 * base).epsilon(1e-12));
}

TEST_CASE("bias compensation") {
  CHECK(bias_compensate(7.3, 10.0, 0.0) == doctest::Approx(7.3));

  ChannelParams p = default_channel();
  double sigma = distance_log_sigma(p);
  double expected_bias = 10.0 * (std::exp(0.5 * sigma * sigma) - 1.0);
  CHECK(expected_bias == doctest::Approx(0.13343).epsilon(1e-3));
  CHECK(bias_compensate(10.5, 10.0, sigma) ==
        doctest::Approx(10.5 - expected_bias).epsilon(1e-12));

  bool clamped = false;
  double out = bias_compensate(0.05, 10.0, sigma, &clamped);
  CHECK(clamped);
  CHECK(out == doctest::Approx(0.1));

  CHECK_THROWS_AS(bias_compensate(1.0, 0.0, sigma), std::invalid_argument);
}

TEST_CASE("bias compensation centers the range estimate") {
  ChannelParams p = default_channel();
  double sigma = distance_log_sigma(p);
  double sigma_db = std::sqrt(p.shadow_variance_db2);
  Rng rng(808);
  const int n = 100000;
  const double true_d = 10.0;
  double sum_raw = 0.0, sum_comp = 0.0;
  for (int i = 0; i < n; ++i) {
    double rx = sample_rssi(true_d, p, sigma_db * rng.gaussian());
    double raw = estimate_distance_raw(rx, p);
    sum_raw += raw;
    sum_comp += bias_compensate(raw, true_d, sigma);
  }
  CHECK(sum_raw / n == doctest::Approx(10.1334).epsilon(2e-3));
  CHECK(sum_comp / n == doctest::Approx(10.0).epsilon(2e-3));
}

TEST_CASE("linear system on the worked three-anchor instance") {
  std::vector<Eigen::VectorXd> anchors = {vec2(0, 0), vec2(10, 0), vec2(0, 10)};
  std::vector<double> dists = {5.0, std::sqrt(65.0), std::sqrt(45.0)};
  MultilaterationProblem prob = build_linear_system(anchors, dists);

  CHECK(prob.coeff(0, 0) == doctest::Approx(20.0));
  CHECK(prob.coeff(0, 1) == doctest::Approx(0.0));
  CHECK(prob.coeff(1, 0) == doctest::Approx(0.0));
  CHECK(prob.coeff(1, 1) == doctest::Approx(20.0));
  CHECK(prob.rhs(0) == doctest::Approx(60.0));
  CHECK(prob.rhs(1) == doctest::Approx(80.0));

  WlsSolution sol = wls_position(prob);
  CHECK(sol.position(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.position(1) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("too few anchors is rejected") {
  std::vector<Eigen::VectorXd> anchors = {vec2(0, 0), vec2(10, 0)};
  std::vector<double> dists = {5.0, 5.0};
  CHECK_THROWS_AS(build_linear_system(anchors, dists), std::invalid_argument);
}

TEST_CASE("true position satisfies the constructed system exactly") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd truth = vec2(rng.uniform(-20, 20), rng.uniform(-20, 20));
    std::vector<Eigen::VectorXd> anchors;
    std::vector<double> dists;
    int m = 3 + static_cast<int>(rng.uniform() * 6);
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd a = vec2(rng.uniform(-30, 30), rng.uniform(-30, 30));
      anchors.push_back(a);
      dists.push_back((a - truth).norm());
    }
    MultilaterationProblem prob = build_linear_system(anchors, dists);
    Eigen::VectorXd residual = prob.coeff * truth - prob.rhs;
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("translation covariance of the solution") {
  std::vector<Eigen::VectorXd> anchors = {vec2(0, 0), vec2(10, 0), vec2(0, 10)};
  std::vector<double> dists = {5.0, std::sqrt(65.0), std::sqrt(45.0)};
  Eigen::VectorXd shift = vec2(7.5, -2.25);

  std::vector<Eigen::VectorXd> moved;
  for (const auto& a : anchors) moved.push_back(a + shift);

  Eigen::VectorXd base = wls_position(build_linear_system(anchors, dists)).position;
  Eigen::VectorXd trans = wls_position(build_linear_system(moved, dists)).position;
  CHECK((trans - (base + shift)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("hyperbolic weighting structure") {
  ChannelParams p = default_channel();
  double sigma = distance_log_sigma(p);
  double s2 = sigma * sigma;
  double v10 = 1e4 * (std::exp(8 * s2) - std::exp(4 * s2));
  CHECK(v10 == doctest::Approx(1243.78).epsilon(1e-3));

  std::vector<double> dists = {10.0, 10.0, 10.0, 10.0};
  Eigen::MatrixXd w = hyperbolic_weighting(dists, sigma);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double expect = (i == j) ? 2.0 * v10 : v10;
      CHECK(w(i, j) == doctest::Approx(expect).epsilon(1e-9));
    }
  }

  // off-diagonal block equals the pivot variance everywhere
  std::vector<double> mixed = {4.0, 9.0, 16.0, 25.0};
  Eigen::MatrixXd wm = hyperbolic_weighting(mixed, sigma);
  double v_pivot = std::pow(4.0, 4) * (std::exp(8 * s2) - std::exp(4 * s2));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) CHECK(wm(i, j) == doctest::Approx(v_pivot).epsilon(1e-9));
    }
    double vi = std::pow(mixed[i + 1], 4) * (std::exp(8 * s2) - std::exp(4 * s2));
    CHECK(wm(i, i) == doctest::Approx(v_pivot + vi).epsilon(1e-9));
  }
}

TEST_CASE("zero shadowing weighting falls back to identity") {
  std::vector<double> dists = {5.0, 6.0, 7.0};
  bool degenerate = false;
  Eigen::MatrixXd w = hyperbolic_weighting(dists, 0.0, &degenerate);
  CHECK(degenerate);
  CHECK(w.isIdentity(0.0));
}

TEST_CASE("exact distances make the weighting irrelevant") {
  std::vector<Eigen::VectorXd> anchors = {vec2(0, 0), vec2(10, 0), vec2(0, 10)};
  std::vector<double> dists = {5.0, std::sqrt(65.0), std::sqrt(45.0)};
  MultilaterationProblem prob = build_linear_system(anchors, dists);
  prob.weight = hyperbolic_weighting(dists, 0.25);
  WlsSolution sol = wls_position(prob);
  CHECK(sol.position(0) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(sol.position(1) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("collinear anchors are singular") {
  std::vector<Eigen::VectorXd> anchors = {vec2(0, 0), vec2(5, 0), vec2(10, 0)};
  std::vector<double> dists = {3.0, 4.0, 5.0};
  MultilaterationProblem prob = build_linear_system(anchors, dists);
  CHECK_THROWS_AS(wls_position(prob), NumericError);
}

TEST_CASE("weighted solve matches a derivative-free minimizer") {
  Rng rng(2718);
  ChannelParams p = default_channel();
  double sigma = distance_log_sigma(p);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd truth = vec2(rng.uniform(-10, 10), rng.uniform(-10, 10));
    int m = 4 + static_cast<int>(rng.uniform() * 5);
    std::vector<Eigen::VectorXd> anchors;
    std::vector<double> dists;
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd a = vec2(rng.uniform(-25, 25), rng.uniform(-25, 25));
      anchors.push_back(a);
      // noisy ranges
      dists.push_back((a - truth).norm() * std::exp(sigma * rng.gaussian()));
    }
    MultilaterationProblem prob = build_linear_system(anchors, dists);
    prob.weight = hyperbolic_weighting(dists, sigma);
    WlsSolution sol = wls_position(prob);

    Eigen::MatrixXd w_chol = prob.weight.llt().matrixL();
    auto objective = [&](const Eigen::Vector2d& q) {
      Eigen::VectorXd r = prob.coeff * q - prob.rhs;
      Eigen::VectorXd scaled = w_chol.triangularView<Eigen::Lower>().solve(r);
      return scaled.squaredNorm();
    };
    Eigen::Vector2d found = oracles::nelder_mead_2d(
        objective, Eigen::Vector2d(truth(0), truth(1)), 2.0);
    CHECK(std::fabs(found(0) - sol.position(0)) < 1e-6);
    CHECK(std::fabs(found(1) - sol.position(1)) < 1e-6);
  }
}

TEST_CASE("fix pipeline with exact geometry recovers the true position") {
  ChannelParams p = default_channel();
  p.shadow_variance_db2 = 0.0;
  Eigen::VectorXd truth = vec2(3, 4);
  std::vector<AnchorBroadcast> candidates;
  std::vector<Eigen::VectorXd> anchor_pos = {vec2(0, 0), vec2(10, 0),
                                             vec2(0, 10)};
  for (int i = 0; i < 3; ++i) {
    AnchorBroadcast ab;
    ab.id = i;
    ab.position = anchor_pos[i];
    ab.rx_power_dbm =
        sample_rssi((anchor_pos[i] - truth).norm(), p, 0.0);
    candidates.push_back(ab);
  }
  std::vector<char> trusted(3, 1);
  FixResult fix = rssi_position_fix(truth, candidates, trusted, p, false);
  REQUIRE(fix.status == FixStatus::ok);
  CHECK((fix.position - truth).norm() < 1e-3);  // < 1 mm
  CHECK(fix.weight_fallback);  // zero shadowing
}

TEST_CASE("distrusted anchors are excluded and can starve the fix") {
  ChannelParams p = default_channel();
  Eigen::VectorXd truth = vec2(3, 4);
  std::vector<AnchorBroadcast> candidates;
  std::vector<Eigen::VectorXd> anchor_pos = {vec2(0, 0), vec2(10, 0),
                                             vec2(0, 10)};
  for (int i = 0; i < 3; ++i) {
    AnchorBroadcast ab;
    ab.id = i;
    ab.position = anchor_pos[i];
    ab.rx_power_dbm = sample_rssi((anchor_pos[i] - truth).norm(), p, 0.0);
    candidates.push_back(ab);
  }
  std::vector<char> trusted(3, 1);
  trusted[2] = 0;
  FixResult fix = rssi_position_fix(truth, candidates, trusted, p, false);
  CHECK(fix.status == FixStatus::insufficient_anchors);
  CHECK(fix.anchors_used == 2);
}

TEST_CASE("hyperbolic weighting beats identity weighting on average") {
  ChannelParams p = default_channel();
  double sigma = distance_log_sigma(p);
  Rng rng(31415);
  Eigen::VectorXd truth = vec2(3, 4);

  // heterogeneous anchor ring: some close, some far
  std::vector<Eigen::VectorXd> anchor_pos;
  for (int i = 0; i < 11; ++i) {
    double angle = 2.0 * std::acos(-1.0) * i / 11.0;
    double radius = (i % 2 == 0) ? 6.0 : 40.0;
    anchor_pos.push_back(
        vec2(3 + radius * std::cos(angle), 4 + radius * std::sin(angle)));
  }

  double mse_weighted = 0.0, mse_identity = 0.0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> dists;
    for (const auto& a : anchor_pos) {
      double true_d = (a - truth).norm();
      double rx = sample_rssi(true_d, p, std::sqrt(2.0) * rng.gaussian());
      double raw = estimate_distance_raw(rx, p);
      dists.push_back(bias_compensate(raw, true_d, sigma));
    }
    MultilaterationProblem prob = build_linear_system(anchor_pos, dists);
    prob.weight = hyperbolic_weighting(dists, sigma);
    mse_weighted += (wls_position(prob).position - truth).squaredNorm();
    prob.weight =
        Eigen::MatrixXd::Identity(prob.coeff.rows(), prob.coeff.rows());
    mse_identity += (wls_position(prob).position - truth).squaredNorm();
  }
  CHECK(mse_weighted < mse_identity);
}

TEST_CASE("solution does not depend on non-pivot anchor order") {
  ChannelParams p = default_channel();
  std::vector<Eigen::VectorXd> anchors = {vec2(1, 1), vec2(12, 0), vec2(0, 11),
                                          vec2(-8, 3)};
  Eigen::VectorXd truth = vec2(2, 5);
  std::vector<double> dists;
  for (const auto& a : anchors) dists.push_back((a - truth).norm());

  MultilaterationProblem base = build_linear_system(anchors, dists);
  Eigen::VectorXd base_pos = wls_position(base).position;

  // swap the order of the tail anchors; keep the pivot in front
  std::vector<Eigen::VectorXd> reordered = {anchors[0], anchors[3], anchors[1],
                                            anchors[2]};
  std::vector<double> rd = {dists[0], dists[3], dists[1], dists[2]};
  Eigen::VectorXd swapped = wls_position(build_linear_system(reordered, rd)).position;
  CHECK((base_pos - swapped).cwiseAbs().maxCoeff() < 1e-9);

  // a different pivot changes the linearization but not the exact solution
  std::vector<Eigen::VectorXd> repivot = {anchors[2], anchors[0], anchors[1],
                                          anchors[3]};
  std::vector<double> pd = {dists[2], dists[0], dists[1], dists[3]};
  Eigen::VectorXd other = wls_position(build_linear_system(repivot, pd)).position;
  CHECK((base_pos - other).cwiseAbs().maxCoeff() < 1e-9);
}
