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

/// Log-distance path loss channel with log-normal shadowing.
struct ChannelParams {
  double tx_power_dbm = 20.0;      // common transmit power
  double ref_path_loss_db = 40.0;  // path loss at the reference distance
  double ref_distance_m = 1.0;
  double path_loss_exponent = 2.0;
  double shadow_variance_db2 = 2.0;  // variance of the shadowing term (dB^2)
  double comm_range_m = 60.0;        // maximum communication range
};

struct RssiSample {
  double rx_power_dbm = 0.0;
  int tx_id = -1;
  int rx_id = -1;
  long step = 0;
};

/// Received power at distance d with a given shadowing realization (dB):
///   rx = tx_power - ref_path_loss - 10*exponent*log10(d/d0) + shadow
double sample_rssi(double distance_m, const ChannelParams& params,
                   double shadow_db);

/// Communication graph over TRUE positions; range test is inclusive.
ProximityGraph build_comm_graph(const std::vector<Eigen::Vector2d>& positions,
                                double comm_range_m);

}  // namespace swarmsim
