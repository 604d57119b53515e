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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmsim/channel.hpp"
#include "swarmsim/control.hpp"
#include "swarmsim/threat.hpp"

namespace swarmsim {

/// Which recovery path a run exercises after detection.
enum class Variant {
  no_recovery,           // detectors traced, no response
  recovery_no_R_update,  // reconfigure, keep the nominal covariance
  recovery_nonrobust_R,  // innovation-driven covariance adaptation
  recovery_robust_R,     // fix-difference covariance adaptation
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct DetectorParams {
  double target_alarm_rate = 0.05;
  double significance = 0.01;  // per-step rate-bound significance
  int window = 100;
  // Latching an agent into recovered mode (or flagging a neighbor) requires
  // the rate estimate to sit outside a wider band, at latch_significance,
  // for latch_persistence consecutive steps. Keeps one-off excursions of
  // the autocorrelated rate estimate from permanently latching.
  double latch_significance = 1e-5;
  int latch_persistence = 20;
};

struct GoalSpec {
  double x = 60.0;
  double y = 0.0;
  double radius = 16.0;
};

struct InitRegion {
  double x_min = -15.0;
  double x_max = 15.0;
  double y_min = -15.0;
  double y_max = 15.0;
};

struct ScenarioConfig {
  int n_agents = 12;
  double dt = 0.1;
  long max_steps = 700;
  std::uint64_t seed = 1;

  // model noise intensities (per-axis variances)
  double q_pos = 1e-4;
  double q_vel = 1e-3;
  double r_pos = 0.01;
  double r_vel = 0.01;

  ControlParams control;
  ChannelParams channel;
  DetectorParams detector;

  double forgetting = 0.01;      // covariance adaptation weight
  double meas_cov_floor = 1e-4;  // eigenvalue floor for adapted covariances

  GoalSpec goal;
  InitRegion init_region;
  // When non-empty, overrides random placement (one [x, y] per agent).
  std::vector<std::array<double, 2>> initial_positions;
  std::vector<CompromiseSpec> attacks;
};

/// The shipped 12-agent scenario: goal run with five diverted sensors and
/// two faulted ones starting at step 350.
ScenarioConfig default_config();

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_config(const std::string& path);

/// Hard invariant violations (run refuses to start).
std::vector<std::string> validate_config(const ScenarioConfig& cfg);
/// Soft feasibility issues (run proceeds, caller should warn).
std::vector<std::string> config_warnings(const ScenarioConfig& cfg);

/// Applies "dotted.path=value" to a config JSON tree. The value is parsed
/// as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace swarmsim
