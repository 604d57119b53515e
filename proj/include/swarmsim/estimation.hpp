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

#include "swarmsim/lti_model.hpp"

namespace swarmsim {

enum class EstimatorMode { nominal, recovered };

/// Kalman filter state for one agent. C_eff/R_eff are the output model in
/// effect: the nominal C/R, or the reconfigured pair after the position
/// sensor has been replaced.
struct KalmanState {
  Eigen::VectorXd xhat;
  Eigen::MatrixXd P;
  EstimatorMode mode = EstimatorMode::nominal;
  Eigen::MatrixXd C_eff;
  Eigen::MatrixXd R_eff;
};

/// xhat <- A xhat + B u;  P <- A P A' + Q.
void kf_predict(KalmanState& state, const LtiModel& model,
                const Eigen::VectorXd& u);

/// Measurement update with C_eff/R_eff; P is re-symmetrized afterwards.
/// Returns the innovation y - C_eff*xhat_pred.
Eigen::VectorXd kf_update(KalmanState& state, const Eigen::VectorXd& y);

/// Output matrix with the position rows replaced by [I_D 0]; the remaining
/// rows are copied from the model. Idempotent.
Eigen::MatrixXd reconfigure_output(const LtiModel& model);

/// Rolling estimate of the replacement-measurement residual covariance,
/// plus the bookkeeping needed to form the residual from consecutive fixes.
struct AdaptiveCovState {
  Eigen::MatrixXd residual_cov;          // D x D rolling estimate
  double forgetting = 0.01;              // EMA weight on the newest sample
  Eigen::MatrixXd process_pos_cov;       // position block of Q
  Eigen::VectorXd prev_correction_state;  // [prev fix; prev non-position
                                          // estimate rows]
  bool has_prev = false;                 // false until a fix has been seen
  double cov_floor = 1e-4;               // eigenvalue floor for extract (m^2)
};

/// Residual between the current fix and the propagation of the previous
/// correction state: fix - [A*prev + B*u_applied]_pos. Requires has_prev.
Eigen::VectorXd rssi_residual(const Eigen::VectorXd& fix,
                              const AdaptiveCovState& adaptive,
                              const LtiModel& model,
                              const Eigen::VectorXd& u_applied);

/// residual_cov <- (1-g)*residual_cov + g*r*r'.
void update_residual_covariance(AdaptiveCovState& adaptive,
                                const Eigen::VectorXd& residual);

/// Position measurement covariance (residual_cov - 2*process_pos_cov)/2,
/// with eigenvalues floored at cov_floor.
Eigen::MatrixXd extract_measurement_cov(const AdaptiveCovState& adaptive);

/// Block-diagonal assembly [pos_block 0; 0 rest_block].
Eigen::MatrixXd assemble_measurement_cov(const Eigen::MatrixXd& pos_block,
                                         const Eigen::MatrixXd& rest_block);

/// Floors the eigenvalues of a symmetric matrix at `floor_value` and
/// reconstructs. Used wherever an adapted covariance can go indefinite.
Eigen::MatrixXd floor_eigenvalues(const Eigen::MatrixXd& sym,
                                  double floor_value);

}  // namespace swarmsim
