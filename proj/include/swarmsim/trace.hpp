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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace swarmsim {

/// One agent's row in the per-step trace. Column meanings are documented in
/// docs/trace_format.md.
struct AgentRecord {
  int id = 0;
  int mode = 0;  // 0 nominal, 1 recovered
  double true_px = 0, true_py = 0, true_vx = 0, true_vy = 0;
  double est_px = 0, est_py = 0, est_vx = 0, est_vy = 0;
  double u_x = 0, u_y = 0;
  double meas_px = 0, meas_py = 0;  // position rows of the (possibly
                                    // compromised) sensor output
  double test_measure = 0;          // on-board chi-squared statistic
  int alarm = 0;
  double alarm_rate = 0;
  int rate_out_of_bounds = 0;  // outside the configured-significance band
  int flagged_neighbors = 0;   // size of the local distrust set
  int fix_valid = 0;
  double fix_x = 0, fix_y = 0;
  int fix_anchors = 0;
  double fix_condition = 0;
  int fix_clamped = 0;
  int fix_weight_fallback = 0;
  int predict_only = 0;  // recovered agent skipped its update this step
  int coincident = 0;    // control fell back to the +x direction
  double rbar_xx = 0, rbar_yy = 0;  // adapted position-measurement variance
};

struct StepRecord {
  long k = 0;
  std::vector<AgentRecord> agents;
  std::optional<double> formation_error;
};

/// Header line matching write_step's column order.
std::string trace_csv_header();

/// One CSV line per agent; floats printed with %.17g so equal traces
/// compare equal as text. A missing formation error prints as an empty
/// field.
void write_step_csv(std::ostream& out, const StepRecord& rec);

}  // namespace swarmsim
