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

struct DetectorBounds {
  double lower = 0.0;
  double upper = 1.0;
};

/// Runtime state of one chi-squared alarm-rate detector.
struct DetectorState {
  double target_alarm_rate = 0.05;  // designed false alarm rate
  double threshold = 0.0;           // test-measure threshold
  double significance = 0.01;       // significance of the rate bounds
  int window = 100;                 // moving-average window parameter
  double alarm_rate = 0.05;         // current rate estimate
  DetectorBounds bounds;
};

/// Detector with the threshold tuned for `dof` degrees of freedom and the
/// rate bounds at the given significance. The rate estimate starts at the
/// target rate.
DetectorState make_detector(double target_alarm_rate, double significance,
                            int window, int dof);

/// Residual covariances used by the detectors, all derived from the shared
/// model at the filter's steady state.
struct ResidualCovariances {
  Eigen::MatrixXd full;        // innovation covariance, output_dim^2
  Eigen::MatrixXd pos;         // its position block
  Eigen::MatrixXd interagent;  // diagonal, state_dim^2
  Eigen::MatrixXd interagent_pos;
};

/// Steady-state one-step prediction covariance: fixed point of the filter
/// covariance recursion P <- A(P - P C'(C P C' + R)^-1 C P)A' + Q, iterated
/// until the relative change drops below 1e-12.
Eigen::MatrixXd steady_state_prediction_covariance(const LtiModel& model);

/// Steady-state Kalman gain K = P C'(C P C' + R)^-1.
Eigen::MatrixXd steady_state_kalman_gain(const LtiModel& model,
                                         const Eigen::MatrixXd& p_inf);

/// Innovation covariance C P C' + R and the derived blocks.
ResidualCovariances residual_covariances(const LtiModel& model,
                                         const Eigen::MatrixXd& p_inf);

/// Quadratic test measure z = r' cov^-1 r.
double chi_square_test_measure(const Eigen::VectorXd& residual,
                               const Eigen::MatrixXd& cov);

/// One-step prediction of a neighbor's broadcast estimate: A*xhat + B*u.
Eigen::VectorXd inter_agent_predict(const LtiModel& model,
                                    const Eigen::VectorXd& xhat,
                                    const Eigen::VectorXd& u);

/// Diagonal covariance of the neighbor-estimate residual: entry q equals
/// sum_s (K(q,s) * sigma_s)^2 with sigma_s^2 the s-th sensor variance.
Eigen::MatrixXd inter_agent_covariance(const Eigen::MatrixXd& gain,
                                       const Eigen::VectorXd& sensor_variances);

/// Threshold such that a chi-squared(dof) variable exceeds it with
/// probability target_alarm_rate.
double tune_threshold(double target_alarm_rate, int dof);

/// Moving-average alarm rate update: a + (alarm - a)/window.
double update_alarm_rate(double alarm_rate, bool alarm, int window);

/// Confidence band for the alarm-rate estimate around the target rate.
DetectorBounds detection_bounds(double target_alarm_rate, double significance,
                                int window);

/// True iff the rate estimate falls outside the closed interval.
bool is_anomalous(double alarm_rate, const DetectorBounds& bounds);

}  // namespace swarmsim
