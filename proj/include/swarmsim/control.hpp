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

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "swarmsim/graph.hpp"

namespace swarmsim {

/// Gains for the virtual spring-damper formation law.
struct ControlParams {
  double desired_spacing = 8.0;    // rest length between neighbors (m)
  double neighbor_range = 10.0;    // neighbor selection radius (m)
  double spring_gain = 1.0;        // 1/s^2
  double damper_gain = 2.0;        // 1/s
  double goal_gain = 0.3;          // 1/s^2
  double velocity_damping = 1.0;   // 1/s
  double max_accel = 2.0;          // per-axis saturation (m/s^2)
};

struct ControlCommand {
  Eigen::VectorXd accel;    // pos_dim entries, each in [-max_accel, max_accel]
  bool coincident = false;  // a neighbor sat on top of us; +x fallback used
};

/// Neighbor graph for control, built from broadcast position estimates.
ProximityGraph build_control_graph(
    const std::vector<Eigen::Vector2d>& estimated_positions,
    double neighbor_range);

/// Spring-damper consensus input for one agent.
///
/// Each neighbor contributes a spring force along the line between the two
/// estimated positions (rest length = desired_spacing) plus a damper on the
/// velocity difference. A goal term attracts toward the reference position
/// and the agent's own velocity is damped. Every axis is saturated at
/// max_accel. State vectors are [position; velocity].
ControlCommand spring_damper_control(
    const Eigen::VectorXd& self_estimate,
    const std::vector<Eigen::VectorXd>& neighbor_estimates,
    const Eigen::VectorXd& reference_state, const ControlParams& params);

}  // namespace swarmsim
