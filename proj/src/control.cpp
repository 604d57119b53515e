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

#include "swarmsim/control.hpp"

#include <algorithm>
#include <stdexcept>

namespace swarmsim {

namespace {
constexpr double kCoincidentTol = 1e-9;  // meters
}

ProximityGraph build_control_graph(
    const std::vector<Eigen::Vector2d>& estimated_positions,
    double neighbor_range) {
  if (estimated_positions.empty()) {
    throw std::invalid_argument("build_control_graph: need at least 1 agent");
  }
  return build_proximity_graph(estimated_positions, neighbor_range);
}

ControlCommand spring_damper_control(
    const Eigen::VectorXd& self_estimate,
    const std::vector<Eigen::VectorXd>& neighbor_estimates,
    const Eigen::VectorXd& reference_state, const ControlParams& params) {
  const Eigen::Index n = self_estimate.size();
  if (n % 2 != 0 || n == 0) {
    throw std::invalid_argument(
        "spring_damper_control: state must be [position; velocity]");
  }
  const Eigen::Index d = n / 2;
  if (reference_state.size() != n) {
    throw std::invalid_argument(
        "spring_damper_control: reference dimension mismatch");
  }

  const auto self_pos = self_estimate.head(d);
  const auto self_vel = self_estimate.tail(d);

  ControlCommand cmd;
  cmd.accel = Eigen::VectorXd::Zero(d);

  for (const Eigen::VectorXd& nb : neighbor_estimates) {
    if (nb.size() != n) {
      throw std::invalid_argument(
          "spring_damper_control: neighbor dimension mismatch");
    }
    Eigen::VectorXd offset = nb.head(d) - self_pos;
    double dist = offset.norm();
    Eigen::VectorXd dir;
    if (dist < kCoincidentTol) {
      dir = Eigen::VectorXd::Zero(d);
      dir(0) = 1.0;
      cmd.coincident = true;
    } else {
      dir = offset / dist;
    }
    cmd.accel += params.spring_gain * (dist - params.desired_spacing) * dir;
    cmd.accel += params.damper_gain * (nb.tail(d) - self_vel);
  }

  cmd.accel += params.goal_gain * (reference_state.head(d) - self_pos);
  cmd.accel -= params.velocity_damping * self_vel;

  for (Eigen::Index q = 0; q < d; ++q) {
    cmd.accel(q) = std::clamp(cmd.accel(q), -params.max_accel,
                              params.max_accel);
  }
  return cmd;
}

}  // namespace swarmsim
