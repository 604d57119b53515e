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
#include <utility>
#include <vector>

namespace swarmsim {

/// Undirected proximity graph over agent indices. Edge (i, j) with i < j is
/// present iff the two agents are within `range` of each other (inclusive).
struct ProximityGraph {
  std::vector<std::pair<int, int>> edges;   // i < j, lexicographic order
  std::vector<std::vector<int>> neighbors;  // per agent, ascending ids
};

ProximityGraph build_proximity_graph(
    const std::vector<Eigen::Vector2d>& positions, double range);

}  // namespace swarmsim
