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

#include "swarmsim/lti_model.hpp"

#include <Eigen/Cholesky>
#include <stdexcept>

namespace swarmsim {

LtiModel build_double_integrator(double dt, double q_pos, double q_vel,
                                 double r_pos, double r_vel) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("build_double_integrator: dt must be > 0");
  }
  if (!(q_pos > 0.0 && q_vel > 0.0 && r_pos > 0.0 && r_vel > 0.0)) {
    throw std::invalid_argument(
        "build_double_integrator: noise intensities must be > 0");
  }

  LtiModel m;
  m.state_dim = 4;
  m.input_dim = 2;
  m.output_dim = 4;
  m.pos_dim = 2;

  m.A = Eigen::MatrixXd::Identity(4, 4);
  m.A(0, 2) = dt;
  m.A(1, 3) = dt;

  m.B = Eigen::MatrixXd::Zero(4, 2);
  m.B(0, 0) = 0.5 * dt * dt;
  m.B(1, 1) = 0.5 * dt * dt;
  m.B(2, 0) = dt;
  m.B(3, 1) = dt;

  m.C = Eigen::MatrixXd::Identity(4, 4);
  m.Q = Eigen::Vector4d(q_pos, q_pos, q_vel, q_vel).asDiagonal();
  m.R = Eigen::Vector4d(r_pos, r_pos, r_vel, r_vel).asDiagonal();
  return m;
}

Eigen::VectorXd propagate(const LtiModel& model, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& u,
                          const Eigen::VectorXd& noise) {
  if (x.size() != model.state_dim || u.size() != model.input_dim ||
      noise.size() != model.state_dim) {
    throw std::invalid_argument("propagate: dimension mismatch");
  }
  return model.A * x + model.B * u + noise;
}

Eigen::VectorXd measure(const LtiModel& model, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& noise) {
  if (x.size() != model.state_dim || noise.size() != model.output_dim) {
    throw std::invalid_argument("measure: dimension mismatch");
  }
  return model.C * x + noise;
}

bool is_symmetric_positive_definite(const Eigen::MatrixXd& m,
                                    double symmetry_tol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * scale) {
    return false;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

}  // namespace swarmsim
