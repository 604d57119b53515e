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

#include "swarmsim/localization.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "swarmsim/errors.hpp"

namespace swarmsim {

double estimate_distance_raw(double rx_power_dbm,
                             const ChannelParams& params) {
  double path_loss = params.tx_power_dbm - rx_power_dbm;
  return params.ref_distance_m *
         std::pow(10.0, (path_loss - params.ref_path_loss_db) /
                            (10.0 * params.path_loss_exponent));
}

double distance_log_sigma(const ChannelParams& params) {
  if (!(params.path_loss_exponent > 0.0)) {
    throw std::invalid_argument(
        "distance_log_sigma: path loss exponent must be > 0");
  }
  return std::sqrt(params.shadow_variance_db2) * std::log(10.0) /
         (10.0 * params.path_loss_exponent);
}

double bias_compensate(double d_raw, double d_ref, double sigma,
                       bool* clamped) {
  if (!(d_ref > 0.0)) {
    throw std::invalid_argument("bias_compensate: reference distance <= 0");
  }
  double out = d_raw - d_ref * (std::exp(0.5 * sigma * sigma) - 1.0);
  if (out <= 0.0) {
    out = 0.01 * d_ref;
    if (clamped) *clamped = true;
  }
  return out;
}

MultilaterationProblem build_linear_system(
    const std::vector<Eigen::VectorXd>& anchors,
    const std::vector<double>& distances) {
  const int m = static_cast<int>(anchors.size());
  if (m == 0 || distances.size() != anchors.size()) {
    throw std::invalid_argument("build_linear_system: size mismatch");
  }
  const Eigen::Index d = anchors.front().size();
  if (m < d + 1) {
    throw std::invalid_argument(
        "build_linear_system: need at least D+1 anchors");
  }

  MultilaterationProblem prob;
  prob.anchor_count = m;
  prob.coeff.resize(m - 1, d);
  prob.rhs.resize(m - 1);

  const Eigen::VectorXd& pivot = anchors[0];
  const double pivot_sq = pivot.squaredNorm();
  const double pivot_dist_sq = distances[0] * distances[0];
  for (int row = 0; row < m - 1; ++row) {
    const Eigen::VectorXd& a = anchors[row + 1];
    prob.coeff.row(row) = 2.0 * (a - pivot).transpose();
    prob.rhs(row) = pivot_dist_sq - distances[row + 1] * distances[row + 1] +
                    a.squaredNorm() - pivot_sq;
  }
  prob.weight = Eigen::MatrixXd::Identity(m - 1, m - 1);
  return prob;
}

Eigen::MatrixXd hyperbolic_weighting(const std::vector<double>& distances,
                                     double sigma, bool* degenerate) {
  const int m = static_cast<int>(distances.size());
  if (m < 2) {
    throw std::invalid_argument("hyperbolic_weighting: need >= 2 distances");
  }
  for (double d : distances) {
    if (!(d > 0.0)) {
      throw std::invalid_argument("hyperbolic_weighting: distances must be > 0");
    }
  }
  if (sigma == 0.0) {
    if (degenerate) *degenerate = true;
    return Eigen::MatrixXd::Identity(m - 1, m - 1);
  }

  const double spread =
      std::exp(8.0 * sigma * sigma) - std::exp(4.0 * sigma * sigma);
  auto variance = [&](double d) { return d * d * d * d * spread; };

  const double v_pivot = variance(distances[0]);
  Eigen::MatrixXd w = Eigen::MatrixXd::Constant(m - 1, m - 1, v_pivot);
  for (int p = 0; p < m - 1; ++p) {
    w(p, p) = v_pivot + variance(distances[p + 1]);
  }
  return w;
}

WlsSolution wls_position(const MultilaterationProblem& problem) {
  const Eigen::MatrixXd& omega = problem.coeff;
  const Eigen::Index d = omega.cols();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(omega);
  lu.setThreshold(1e-10);
  if (lu.rank() < d) {
    throw NumericError("wls_position: anchor geometry is rank deficient");
  }

  Eigen::LLT<Eigen::MatrixXd> wllt(problem.weight);
  if (wllt.info() != Eigen::Success) {
    throw NumericError("wls_position: weighting matrix not positive definite");
  }
  Eigen::MatrixXd w_inv_omega = wllt.solve(omega);
  Eigen::MatrixXd normal = omega.transpose() * w_inv_omega;
  normal = 0.5 * (normal + normal.transpose());
  Eigen::VectorXd rhs = w_inv_omega.transpose() * problem.rhs;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normal);
  double ev_min = es.eigenvalues().minCoeff();
  double ev_max = es.eigenvalues().maxCoeff();
  if (!(ev_min > 0.0)) {
    throw NumericError("wls_position: singular normal equations");
  }

  WlsSolution sol;
  sol.condition = ev_max / ev_min;
  sol.ill_conditioned = sol.condition > 1e12;
  sol.position = normal.llt().solve(rhs);
  return sol;
}

FixResult rssi_position_fix(const Eigen::VectorXd& self_position_estimate,
                            const std::vector<AnchorBroadcast>& candidates,
                            const std::vector<char>& trusted,
                            const ChannelParams& params, bool bootstrap) {
  const Eigen::Index d = self_position_estimate.size();
  const double sigma = distance_log_sigma(params);

  std::vector<DistanceEstimate> ranges;
  ranges.reserve(candidates.size());
  FixResult result;

  for (const AnchorBroadcast& cand : candidates) {
    if (cand.id >= 0 && cand.id < static_cast<int>(trusted.size()) &&
        !trusted[cand.id]) {
      continue;
    }
    DistanceEstimate est;
    est.anchor_id = cand.id;
    est.anchor_pos = cand.position;
    est.raw_m = estimate_distance_raw(cand.rx_power_dbm, params);
    est.sigma = sigma;
    double d_ref = bootstrap
                       ? est.raw_m
                       : (self_position_estimate - cand.position).norm();
    if (!(d_ref > 0.0)) d_ref = est.raw_m;  // coincident estimates
    bool clamped = false;
    est.compensated_m = bias_compensate(est.raw_m, d_ref, sigma, &clamped);
    est.clamped = clamped;
    result.bias_clamped |= clamped;
    ranges.push_back(std::move(est));
  }

  if (static_cast<Eigen::Index>(ranges.size()) < d + 1) {
    result.status = FixStatus::insufficient_anchors;
    result.anchors_used = static_cast<int>(ranges.size());
    return result;
  }

  // Pivot on the nearest anchor: its row enters every equation of the
  // differenced system, so it should carry the smallest range variance.
  auto nearest = std::min_element(
      ranges.begin(), ranges.end(),
      [](const DistanceEstimate& a, const DistanceEstimate& b) {
        return a.compensated_m < b.compensated_m;
      });
  std::iter_swap(ranges.begin(), nearest);

  std::vector<Eigen::VectorXd> anchors;
  std::vector<double> distances;
  anchors.reserve(ranges.size());
  distances.reserve(ranges.size());
  for (const DistanceEstimate& r : ranges) {
    anchors.push_back(r.anchor_pos);
    distances.push_back(r.compensated_m);
  }

  MultilaterationProblem prob = build_linear_system(anchors, distances);
  bool degenerate = false;
  prob.weight = hyperbolic_weighting(distances, sigma, &degenerate);
  result.weight_fallback = degenerate;

  try {
    WlsSolution sol = wls_position(prob);
    result.status = FixStatus::ok;
    result.position = sol.position;
    result.condition = sol.condition;
    result.ill_conditioned = sol.ill_conditioned;
    result.anchors_used = static_cast<int>(ranges.size());
  } catch (const NumericError&) {
    result.status = FixStatus::singular_geometry;
    result.anchors_used = static_cast<int>(ranges.size());
  }
  return result;
}

}  // namespace swarmsim
