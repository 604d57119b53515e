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
#include <optional>

#include "swarmsim/lti_model.hpp"

namespace swarmsim {

enum class CompromiseKind { bias, ramp_divert, stuck, noise_inflation };

/// One attack or fault applied to an agent's position measurements from
/// start_step onward. Only the fields relevant to `kind` are used.
struct CompromiseSpec {
  int target = -1;
  long start_step = 0;
  CompromiseKind kind = CompromiseKind::bias;
  Eigen::VectorXd bias;           // bias: constant measurement offset (m)
  Eigen::VectorXd divert_target;  // ramp_divert: point the true state is
                                  // steered toward (m)
  double rate = 0.0;              // ramp_divert: offset growth (m per step)
  double noise_scale = 1.0;       // noise_inflation: multiplier > 1
};

/// Per-target mutable attack state, owned by the simulation engine.
struct CompromiseState {
  std::optional<Eigen::VectorXd> frozen_position;  // stuck: captured readings
};

/// Applies the compromise to output vector y measured at step k. Entries
/// beyond the position block are never touched. `position_noise` is the
/// measurement-noise realization already folded into the position rows of y
/// (needed by noise_inflation). Before start_step the output equals y.
///
/// ramp_divert grows the offset by `rate` per step, directed away from
/// divert_target along unit(p_true - divert_target): the falsified reading
/// makes the feedback loop drive the true position toward the target point.
Eigen::VectorXd apply_compromise(const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& x_true,
                                 const CompromiseSpec& spec, long k,
                                 const Eigen::VectorXd& position_noise,
                                 CompromiseState& state, int pos_dim);

}  // namespace swarmsim
