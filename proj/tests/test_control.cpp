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

#include <algorithm>
#include <random>

#include "swarmsim/control.hpp"
#include "swarmsim/rng.hpp"

using namespace swarmsim;

namespace {

Eigen::VectorXd state(double px, double py, double vx = 0, double vy = 0) {
  Eigen::VectorXd x(4);
  x << px, py, vx, vy;
  return x;
}

ControlParams params_no_goal() {
  ControlParams p;
  p.desired_spacing = 8.0;
  p.spring_gain = 1.0;
  p.damper_gain = 2.0;
  p.goal_gain = 0.0;
  p.velocity_damping = 0.0;
  p.max_accel = 100.0;
  return p;
}

}  // namespace

TEST_CASE("control graph edges by range") {
  std::vector<Eigen::Vector2d> pos = {{0, 0}, {5, 0}};
  ProximityGraph g = build_control_graph(pos, 10.0);
  CHECK(g.edges.size() == 1);

  pos[1] = {15, 0};
  g = build_control_graph(pos, 10.0);
  CHECK(g.edges.empty());
}

TEST_CASE("control graph matches brute force on random layouts") {
  Rng rng(99);
  std::vector<Eigen::Vector2d> pos;
  for (int i = 0; i < 12; ++i) {
    pos.emplace_back(rng.uniform(-20, 20), rng.uniform(-20, 20));
  }
  double range = 11.0;
  ProximityGraph g = build_control_graph(pos, range);
  std::vector<std::pair<int, int>> expect;
  for (int i = 0; i < 12; ++i) {
    for (int j = i + 1; j < 12; ++j) {
      if ((pos[i] - pos[j]).norm() <= range) expect.emplace_back(i, j);
    }
  }
  CHECK(g.edges == expect);
  // symmetry of neighbor sets
  for (int i = 0; i < 12; ++i) {
    for (int j : g.neighbors[i]) {
      CHECK(std::count(g.neighbors[j].begin(), g.neighbors[j].end(), i) == 1);
    }
  }
}

TEST_CASE("spring at rest length gives zero input") {
  ControlParams p = params_no_goal();
  ControlCommand cmd = spring_damper_control(
      state(0, 0), {state(8, 0)}, state(0, 0), p);
  CHECK(cmd.accel.norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("compressed spring repels") {
  ControlParams p = params_no_goal();
  ControlCommand cmd = spring_damper_control(
      state(0, 0), {state(4, 0)}, state(0, 0), p);
  CHECK(cmd.accel(0) < 0.0);
  CHECK(cmd.accel(1) == doctest::Approx(0.0));
}

TEST_CASE("goal attraction without neighbors") {
  ControlParams p;
  p.goal_gain = 0.5;
  p.velocity_damping = 0.0;
  p.max_accel = 100.0;
  ControlCommand cmd =
      spring_damper_control(state(0, 0), {}, state(10, 0), p);
  CHECK(cmd.accel(0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(cmd.accel(1) == doctest::Approx(0.0));
}

TEST_CASE("permutation invariance over neighbors") {
  ControlParams p = params_no_goal();
  p.goal_gain = 0.3;
  std::vector<Eigen::VectorXd> nbrs = {state(5, 1, 0.2, 0), state(-3, 6, 0, -1),
                                       state(2, -9, 1, 1)};
  Eigen::VectorXd self = state(0.5, -0.5, 0.1, 0.3);
  Eigen::VectorXd ref = state(20, 5);
  Eigen::VectorXd base = spring_damper_control(self, nbrs, ref, p).accel;

  std::sort(nbrs.begin(), nbrs.end(),
            [](const auto& a, const auto& b) { return a(0) < b(0); });
  do {
    Eigen::VectorXd u = spring_damper_control(self, nbrs, ref, p).accel;
    CHECK((u - base).cwiseAbs().maxCoeff() < 1e-12);
  } while (std::next_permutation(
      nbrs.begin(), nbrs.end(),
      [](const auto& a, const auto& b) { return a(0) < b(0); }));
}

TEST_CASE("inter-agent terms are translation invariant") {
  ControlParams p = params_no_goal();
  p.goal_gain = 0.4;
  p.velocity_damping = 0.7;
  Eigen::VectorXd shift = state(13.7, -4.2);

  std::vector<Eigen::VectorXd> nbrs = {state(5, 1), state(-3, 6)};
  Eigen::VectorXd self = state(1, 2, 0.5, -0.5);
  Eigen::VectorXd ref = state(10, 10);

  Eigen::VectorXd base = spring_damper_control(self, nbrs, ref, p).accel;
  std::vector<Eigen::VectorXd> nbrs_shifted;
  for (const auto& nb : nbrs) nbrs_shifted.push_back(nb + shift);
  Eigen::VectorXd moved =
      spring_damper_control(self + shift, nbrs_shifted, ref + shift, p).accel;
  CHECK((base - moved).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-agent forces are antisymmetric") {
  ControlParams p = params_no_goal();
  Eigen::VectorXd a = state(1, 2, 0.3, -0.1);
  Eigen::VectorXd b = state(6, -1, -0.4, 0.2);
  Eigen::VectorXd ua = spring_damper_control(a, {b}, state(0, 0), p).accel;
  Eigen::VectorXd ub = spring_damper_control(b, {a}, state(0, 0), p).accel;
  CHECK((ua + ub).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("saturation clamps every axis") {
  ControlParams p;
  p.goal_gain = 10.0;
  p.max_accel = 2.0;
  ControlCommand cmd =
      spring_damper_control(state(0, 0), {}, state(100, -100), p);
  CHECK(cmd.accel(0) == 2.0);
  CHECK(cmd.accel(1) == -2.0);

  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<Eigen::VectorXd> nbrs;
    for (int i = 0; i < 3; ++i) {
      nbrs.push_back(state(rng.uniform(-30, 30), rng.uniform(-30, 30),
                           rng.uniform(-2, 2), rng.uniform(-2, 2)));
    }
    ControlParams q;
    q.max_accel = 1.5;
    Eigen::VectorXd u =
        spring_damper_control(state(0, 0), nbrs, state(50, 50), q).accel;
    CHECK(u.cwiseAbs().maxCoeff() <= 1.5);
  }
}

TEST_CASE("coincident neighbor falls back to +x and is flagged") {
  ControlParams p = params_no_goal();
  ControlCommand cmd = spring_damper_control(
      state(1, 1), {state(1, 1)}, state(0, 0), p);
  CHECK(cmd.coincident);
  // compressed to zero length: repulsion along -x
  CHECK(cmd.accel(0) < 0.0);
}
