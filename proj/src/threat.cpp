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

#include "swarmsim/threat.hpp"

#include <stdexcept>

namespace swarmsim {

Eigen::VectorXd apply_compromise(const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& x_true,
                                 const CompromiseSpec& spec, long k,
                                 const Eigen::VectorXd& position_noise,
                                 CompromiseState& state, int pos_dim) {
  if (k < 0) {
    throw std::invalid_argument("apply_compromise: step must be >= 0");
  }
  if (k < spec.start_step) return y;

  Eigen::VectorXd out = y;
  const Eigen::Index d = pos_dim;

  switch (spec.kind) {
    case CompromiseKind::bias:
      if (spec.bias.size() != d) {
        throw std::invalid_argument("apply_compromise: bias dimension");
      }
      out.head(d) += spec.bias;
      break;

    case CompromiseKind::ramp_divert: {
      if (spec.divert_target.size() != d || !(spec.rate > 0.0)) {
        throw std::invalid_argument(
            "apply_compromise: ramp_divert needs a target and rate > 0");
      }
      Eigen::VectorXd offset = x_true.head(d) - spec.divert_target;
      double dist = offset.norm();
      Eigen::VectorXd dir;
      if (dist < 1e-9) {
        dir = Eigen::VectorXd::Zero(d);
        dir(0) = 1.0;
      } else {
        dir = offset / dist;
      }
      double magnitude =
          spec.rate * static_cast<double>(k - spec.start_step + 1);
      out.head(d) += magnitude * dir;
      break;
    }

    case CompromiseKind::stuck:
      if (!state.frozen_position) {
        state.frozen_position = y.head(d).eval();
      }
      out.head(d) = *state.frozen_position;
      break;

    case CompromiseKind::noise_inflation:
      if (!(spec.noise_scale > 1.0)) {
        throw std::invalid_argument(
            "apply_compromise: noise_scale must be > 1");
      }
      if (position_noise.size() != d) {
        throw std::invalid_argument(
            "apply_compromise: position_noise dimension");
      }
      out.head(d) += (spec.noise_scale - 1.0) * position_noise;
      break;

    default:
      throw std::invalid_argument("apply_compromise: unknown kind");
  }
  return out;
}

}  // namespace swarmsim
