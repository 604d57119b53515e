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

namespace swarmsim {

/// Discrete-time LTI agent model, shared by every agent in the swarm.
///
///   x(k+1) = A x(k) + B u(k) + v(k),   v ~ N(0, Q)
///   y(k)   = C x(k) + w(k),            w ~ N(0, R)
///
/// The first pos_dim entries of the state are position coordinates.
struct LtiModel {
  Eigen::MatrixXd A;  // state_dim x state_dim
  Eigen::MatrixXd B;  // state_dim x input_dim
  Eigen::MatrixXd C;  // output_dim x state_dim
  Eigen::MatrixXd Q;  // process noise covariance
  Eigen::MatrixXd R;  // measurement noise covariance
  int state_dim = 0;
  int input_dim = 0;
  int output_dim = 0;
  int pos_dim = 0;
};

/// Planar double integrator sampled at dt: state [px py vx vy], full-state
/// output (position and velocity both sensed), acceleration input per axis.
/// Noise intensities are per-axis variances.
LtiModel build_double_integrator(double dt, double q_pos, double q_vel,
                                 double r_pos, double r_vel);

/// A*x + B*u + noise.
Eigen::VectorXd propagate(const LtiModel& model, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& u,
                          const Eigen::VectorXd& noise);

/// C*x + noise.
Eigen::VectorXd measure(const LtiModel& model, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& noise);

/// True iff m is symmetric and positive definite (Cholesky succeeds).
bool is_symmetric_positive_definite(const Eigen::MatrixXd& m,
                                    double symmetry_tol = 1e-12);

}  // namespace swarmsim
