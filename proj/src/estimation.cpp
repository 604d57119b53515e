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

#include "swarmsim/estimation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "swarmsim/errors.hpp"

namespace swarmsim {

void kf_predict(KalmanState& state, const LtiModel& model,
                const Eigen::VectorXd& u) {
  state.xhat = model.A * state.xhat + model.B * u;
  state.P = model.A * state.P * model.A.transpose() + model.Q;
  state.P = 0.5 * (state.P + state.P.transpose());
}

Eigen::VectorXd kf_update(KalmanState& state, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd& C = state.C_eff;
  Eigen::MatrixXd S = C * state.P * C.transpose() + state.R_eff;
  S = 0.5 * (S + S.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    throw NumericError("kf_update: singular innovation covariance");
  }
  Eigen::MatrixXd gain = llt.solve(C * state.P).transpose();
  Eigen::VectorXd innovation = y - C * state.xhat;
  state.xhat += gain * innovation;
  Eigen::MatrixXd ikc =
      Eigen::MatrixXd::Identity(state.P.rows(), state.P.cols()) - gain * C;
  state.P = ikc * state.P;
  state.P = 0.5 * (state.P + state.P.transpose());
  return innovation;
}

Eigen::MatrixXd reconfigure_output(const LtiModel& model) {
  Eigen::MatrixXd c_bar = model.C;
  c_bar.topRows(model.pos_dim).setZero();
  c_bar.topLeftCorner(model.pos_dim, model.pos_dim) =
      Eigen::MatrixXd::Identity(model.pos_dim, model.pos_dim);
  return c_bar;
}

Eigen::VectorXd rssi_residual(const Eigen::VectorXd& fix,
                              const AdaptiveCovState& adaptive,
                              const LtiModel& model,
                              const Eigen::VectorXd& u_applied) {
  if (!adaptive.has_prev) {
    throw std::logic_error("rssi_residual: no previous correction state");
  }
  Eigen::VectorXd predicted =
      model.A * adaptive.prev_correction_state + model.B * u_applied;
  return fix - predicted.head(model.pos_dim);
}

void update_residual_covariance(AdaptiveCovState& adaptive,
                                const Eigen::VectorXd& residual) {
  if (!(adaptive.forgetting > 0.0 && adaptive.forgetting < 1.0)) {
    throw std::invalid_argument(
        "update_residual_covariance: forgetting must be in (0, 1)");
  }
  adaptive.residual_cov = (1.0 - adaptive.forgetting) * adaptive.residual_cov +
                          adaptive.forgetting * residual * residual.transpose();
  adaptive.residual_cov =
      0.5 * (adaptive.residual_cov + adaptive.residual_cov.transpose());
}

Eigen::MatrixXd floor_eigenvalues(const Eigen::MatrixXd& sym,
                                  double floor_value) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd ev = es.eigenvalues();
  bool needs_floor = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < floor_value) {
      ev(i) = floor_value;
      needs_floor = true;
    }
  }
  if (!needs_floor) return sym;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd extract_measurement_cov(const AdaptiveCovState& adaptive) {
  Eigen::MatrixXd r_bar =
      0.5 * (adaptive.residual_cov - 2.0 * adaptive.process_pos_cov);
  return floor_eigenvalues(r_bar, adaptive.cov_floor);
}

Eigen::MatrixXd assemble_measurement_cov(const Eigen::MatrixXd& pos_block,
                                         const Eigen::MatrixXd& rest_block) {
  const Eigen::Index d = pos_block.rows();
  const Eigen::Index rest = rest_block.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d + rest, d + rest);
  out.topLeftCorner(d, d) = pos_block;
  if (rest > 0) out.bottomRightCorner(rest, rest) = rest_block;
  return out;
}

}  // namespace swarmsim
