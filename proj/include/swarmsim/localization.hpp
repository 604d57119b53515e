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

#include "swarmsim/channel.hpp"

namespace swarmsim {

/// Range to one anchor derived from RSSI.
struct DistanceEstimate {
  int anchor_id = -1;
  double compensated_m = 0.0;  // bias-compensated distance
  double raw_m = 0.0;          // direct path-loss inversion
  double sigma = 0.0;          // log-normal shape parameter (unitless)
  Eigen::VectorXd anchor_pos;  // received anchor position estimate
  bool clamped = false;        // compensation clamped away from <= 0
};

/// Linearized multilateration instance: coeff * p = rhs, weighted by
/// `weight` (covariance of rhs). Row m corresponds to anchor m+1 minus the
/// pivot anchor 0.
struct MultilaterationProblem {
  Eigen::MatrixXd coeff;   // (M-1) x D
  Eigen::VectorXd rhs;     // M-1
  Eigen::MatrixXd weight;  // (M-1) x (M-1), SPD
  int anchor_count = 0;
};

/// Inverts the path loss law: rx power -> distance.
double estimate_distance_raw(double rx_power_dbm, const ChannelParams& params);

/// Shape parameter of the log-normal distance estimate:
/// sqrt(shadow_variance) * ln(10) / (10 * path_loss_exponent).
double distance_log_sigma(const ChannelParams& params);

/// Removes the expected multiplicative bias of the log-normal range
/// estimate: subtracts d_ref*(exp(sigma^2/2) - 1). A result <= 0 is clamped
/// to 0.01*d_ref and reported via `clamped`.
double bias_compensate(double d_raw, double d_ref, double sigma,
                       bool* clamped = nullptr);

/// Builds the (M-1)-row linear system by subtracting the first (pivot)
/// circle equation from the others. The weight is set to identity; callers
/// overwrite it with hyperbolic_weighting when shadowing is present.
MultilaterationProblem build_linear_system(
    const std::vector<Eigen::VectorXd>& anchors,
    const std::vector<double>& distances);

/// Covariance of the squared-distance difference vector. Diagonal entries
/// are V[d_0^2] + V[d_{m}^2], off-diagonal entries V[d_0^2], with
/// V[d^2] = d^4 (exp(8 sigma^2) - exp(4 sigma^2)).
/// sigma = 0 makes the matrix zero; identity is returned instead and
/// `degenerate` is set.
Eigen::MatrixXd hyperbolic_weighting(const std::vector<double>& distances,
                                     double sigma, bool* degenerate = nullptr);

struct WlsSolution {
  Eigen::VectorXd position;
  double condition = 0.0;        // condition number of the normal matrix
  bool ill_conditioned = false;  // condition > 1e12
};

/// Weighted least squares solve of the multilateration system:
/// p = (coeff' W^-1 coeff)^-1 coeff' W^-1 rhs.
WlsSolution wls_position(const MultilaterationProblem& problem);

/// Anchor candidate assembled by the engine: a neighbor's broadcast position
/// estimate plus the RSSI measured on its transmission.
struct AnchorBroadcast {
  int id = -1;
  Eigen::VectorXd position;
  double rx_power_dbm = 0.0;
};

enum class FixStatus { ok, insufficient_anchors, singular_geometry };

struct FixResult {
  FixStatus status = FixStatus::insufficient_anchors;
  Eigen::VectorXd position;
  int anchors_used = 0;
  double condition = 0.0;
  bool bias_clamped = false;
  bool weight_fallback = false;
  bool ill_conditioned = false;
};

/// Full position fix pipeline for one agent: filter candidates to trusted
/// anchors, invert RSSI to distances, compensate bias (reference distance
/// from the position estimates, or the raw distance itself on the bootstrap
/// step when the agent's own estimate is untrusted), pivot on the nearest
/// anchor, assemble the weighted system, and solve.
///
/// `trusted` is indexed by agent id; candidates flagged untrusted are
/// dropped. Requires at least D+1 usable anchors.
FixResult rssi_position_fix(const Eigen::VectorXd& self_position_estimate,
                            const std::vector<AnchorBroadcast>& candidates,
                            const std::vector<char>& trusted,
                            const ChannelParams& params, bool bootstrap);

}  // namespace swarmsim
