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

#include "swarmsim/trace.hpp"

#include <cstdio>
#include <ostream>

namespace swarmsim {

std::string trace_csv_header() {
  return "k,agent,mode,true_px,true_py,true_vx,true_vy,"
         "est_px,est_py,est_vx,est_vy,u_x,u_y,meas_px,meas_py,"
         "test_measure,alarm,alarm_rate,rate_out_of_bounds,"
         "flagged_neighbors,fix_valid,fix_x,fix_y,fix_anchors,"
         "fix_condition,fix_clamped,fix_weight_fallback,predict_only,"
         "coincident,rbar_xx,rbar_yy,formation_error";
}

namespace {

void append_double(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), ",%.17g", v);
  line += buf;
}

void append_int(std::string& line, long v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), ",%ld", v);
  line += buf;
}

}  // namespace

void write_step_csv(std::ostream& out, const StepRecord& rec) {
  for (const AgentRecord& a : rec.agents) {
    std::string line = std::to_string(rec.k);
    append_int(line, a.id);
    append_int(line, a.mode);
    append_double(line, a.true_px);
    append_double(line, a.true_py);
    append_double(line, a.true_vx);
    append_double(line, a.true_vy);
    append_double(line, a.est_px);
    append_double(line, a.est_py);
    append_double(line, a.est_vx);
    append_double(line, a.est_vy);
    append_double(line, a.u_x);
    append_double(line, a.u_y);
    append_double(line, a.meas_px);
    append_double(line, a.meas_py);
    append_double(line, a.test_measure);
    append_int(line, a.alarm);
    append_double(line, a.alarm_rate);
    append_int(line, a.rate_out_of_bounds);
    append_int(line, a.flagged_neighbors);
    append_int(line, a.fix_valid);
    append_double(line, a.fix_x);
    append_double(line, a.fix_y);
    append_int(line, a.fix_anchors);
    append_double(line, a.fix_condition);
    append_int(line, a.fix_clamped);
    append_int(line, a.fix_weight_fallback);
    append_int(line, a.predict_only);
    append_int(line, a.coincident);
    append_double(line, a.rbar_xx);
    append_double(line, a.rbar_yy);
    if (rec.formation_error) {
      append_double(line, *rec.formation_error);
    } else {
      line += ",";
    }
    out << line << '\n';
  }
}

}  // namespace swarmsim
