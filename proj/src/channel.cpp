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

#include "swarmsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmsim {

double sample_rssi(double distance_m, const ChannelParams& params,
                   double shadow_db) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("sample_rssi: distance must be > 0");
  }
  return params.tx_power_dbm - params.ref_path_loss_db -
         10.0 * params.path_loss_exponent *
             std::log10(distance_m / params.ref_distance_m) +
         shadow_db;
}

ProximityGraph build_comm_graph(const std::vector<Eigen::Vector2d>& positions,
                                double comm_range_m) {
  return build_proximity_graph(positions, comm_range_m);
}

}  // namespace swarmsim
