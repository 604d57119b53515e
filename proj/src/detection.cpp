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

#include "swarmsim/detection.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "swarmsim/errors.hpp"
#include "swarmsim/special_functions.hpp"

namespace swarmsim {

DetectorState make_detector(double target_alarm_rate, double significance,
                            int window, int dof) {
  DetectorState d;
  d.target_alarm_rate = target_alarm_rate;
  d.significance = significance;
  d.window = window;
  d.threshold = tune_threshold(target_alarm_rate, dof);
  d.alarm_rate = target_alarm_rate;
  d.bounds = detection_bounds(target_alarm_rate, significance, window);
  return d;
}

Eigen::MatrixXd steady_state_prediction_covariance(const LtiModel& model) {
  const Eigen::MatrixXd& A = model.A;
  const Eigen::MatrixXd& C = model.C;
  const Eigen::MatrixXd& Q = model.Q;
  const Eigen::MatrixXd& R = model.R;

  Eigen::MatrixXd P = Q;
  for (long it = 0; it < 1000000; ++it) {
    Eigen::MatrixXd S = C * P * C.transpose() + R;
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
      throw NumericError(
          "steady_state_prediction_covariance: singular innovation");
    }
    Eigen::MatrixXd K = llt.solve(C * P).transpose();
    Eigen::MatrixXd next = A * (P - K * C * P) * A.transpose() + Q;
    next = 0.5 * (next + next.transpose());
    double denom = std::max(1.0, P.cwiseAbs().maxCoeff());
    double delta = (next - P).cwiseAbs().maxCoeff() / denom;
    P = next;
    if (delta < 1e-12) return P;
  }
  throw NumericError(
      "steady_state_prediction_covariance: no convergence in 1e6 iterations");
}

Eigen::MatrixXd steady_state_kalman_gain(const LtiModel& model,
                                         const Eigen::MatrixXd& p_inf) {
  Eigen::MatrixXd S = model.C * p_inf * model.C.transpose() + model.R;
  return S.llt().solve(model.C * p_inf).transpose();
}

ResidualCovariances residual_covariances(const LtiModel& model,
                                         const Eigen::MatrixXd& p_inf) {
  ResidualCovariances rc;
  rc.full = model.C * p_inf * model.C.transpose() + model.R;
  rc.full = 0.5 * (rc.full + rc.full.transpose());
  rc.pos = rc.full.topLeftCorner(model.pos_dim, model.pos_dim);
  Eigen::MatrixXd K = steady_state_kalman_gain(model, p_inf);
  rc.interagent = inter_agent_covariance(K, rc.full.diagonal());
  rc.interagent_pos = rc.interagent.topLeftCorner(model.pos_dim, model.pos_dim);
  return rc;
}

double chi_square_test_measure(const Eigen::VectorXd& residual,
                               const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericError("chi_square_test_measure: covariance not invertible");
  }
  return residual.dot(llt.solve(residual));
}

Eigen::VectorXd inter_agent_predict(const LtiModel& model,
                                    const Eigen::VectorXd& xhat,
                                    const Eigen::VectorXd& u) {
  if (xhat.size() != model.state_dim || u.size() != model.input_dim) {
    throw std::invalid_argument("inter_agent_predict: dimension mismatch");
  }
  return model.A * xhat + model.B * u;
}

Eigen::MatrixXd inter_agent_covariance(
    const Eigen::MatrixXd& gain, const Eigen::VectorXd& sensor_variances) {
  if (gain.cols() != sensor_variances.size()) {
    throw std::invalid_argument("inter_agent_covariance: dimension mismatch");
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(gain.rows());
  for (Eigen::Index q = 0; q < gain.rows(); ++q) {
    double acc = 0.0;
    for (Eigen::Index s = 0; s < gain.cols(); ++s) {
      double term = gain(q, s) * std::sqrt(sensor_variances(s));
      acc += term * term;
    }
    diag(q) = acc;
  }
  return diag.asDiagonal();
}

double tune_threshold(double target_alarm_rate, int dof) {
  if (!(target_alarm_rate > 0.0 && target_alarm_rate < 1.0)) {
    throw std::invalid_argument("tune_threshold: rate must be in (0, 1)");
  }
  if (dof < 1) {
    throw std::invalid_argument("tune_threshold: dof must be >= 1");
  }
  return 2.0 * inv_lower_regularized_gamma(0.5 * dof, 1.0 - target_alarm_rate);
}

double update_alarm_rate(double alarm_rate, bool alarm, int window) {
  if (window < 1) {
    throw std::invalid_argument("update_alarm_rate: window must be >= 1");
  }
  double zeta = alarm ? 1.0 : 0.0;
  return alarm_rate + (zeta - alarm_rate) / static_cast<double>(window);
}

DetectorBounds detection_bounds(double target_alarm_rate, double significance,
                                int window) {
  if (!(significance > 0.0 && significance < 1.0)) {
    throw std::invalid_argument("detection_bounds: significance in (0, 1)");
  }
  if (window < 1) {
    throw std::invalid_argument("detection_bounds: window must be >= 1");
  }
  double z = std::fabs(probit(0.5 * significance));
  double margin = z * std::sqrt(target_alarm_rate * (1.0 - target_alarm_rate) /
                                (2.0 * window - 1.0));
  return DetectorBounds{target_alarm_rate - margin, target_alarm_rate + margin};
}

bool is_anomalous(double alarm_rate, const DetectorBounds& bounds) {
  return alarm_rate < bounds.lower || alarm_rate > bounds.upper;
}

}  // namespace swarmsim
