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

#include "swarmsim/graph.hpp"

#include <stdexcept>

namespace swarmsim {

ProximityGraph build_proximity_graph(
    const std::vector<Eigen::Vector2d>& positions, double range) {
  if (!(range > 0.0)) {
    throw std::invalid_argument("build_proximity_graph: range must be > 0");
  }
  const int n = static_cast<int>(positions.size());
  ProximityGraph g;
  g.neighbors.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((positions[i] - positions[j]).norm() <= range) {
        g.edges.emplace_back(i, j);
        g.neighbors[i].push_back(j);
        g.neighbors[j].push_back(i);
      }
    }
  }
  return g;
}

}  // namespace swarmsim
