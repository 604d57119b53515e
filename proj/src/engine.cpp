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

#include "swarmsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarmsim/channel.hpp"
#include "swarmsim/control.hpp"
#include "swarmsim/errors.hpp"
#include "swarmsim/parallel.hpp"

namespace swarmsim {

namespace {
constexpr std::uint64_t kSaltInit = 0x1317;
constexpr std::uint64_t kSaltDynamics = 0xD7;
constexpr std::uint64_t kSaltChannel = 0xC4;
}  // namespace

std::optional<double> formation_error(
    const std::vector<Eigen::Vector2d>& positions, const ProximityGraph& graph,
    double desired_spacing) {
  if (graph.edges.empty()) return std::nullopt;
  double acc = 0.0;
  for (const auto& [i, j] : graph.edges) {
    acc += std::fabs((positions[i] - positions[j]).norm() - desired_spacing);
  }
  return acc / static_cast<double>(graph.edges.size());
}

World::World(const ScenarioConfig& cfg, Variant variant,
             std::uint64_t run_seed, bool parallel_agents)
    : cfg_(cfg), variant_(variant), parallel_(parallel_agents) {
  auto errs = validate_config(cfg_);
  if (!errs.empty()) throw ConfigError("invalid config: " + errs.front());

  model_ = build_double_integrator(cfg_.dt, cfg_.q_pos, cfg_.q_vel, cfg_.r_pos,
                                   cfg_.r_vel);
  p_inf_ = steady_state_prediction_covariance(model_);
  residual_cov_ = residual_covariances(model_, p_inf_);
  Eigen::MatrixXd gain = steady_state_kalman_gain(model_, p_inf_);
  p0_posterior_ = (Eigen::MatrixXd::Identity(model_.state_dim,
                                             model_.state_dim) -
                   gain * model_.C) *
                  p_inf_;
  p0_posterior_ = 0.5 * (p0_posterior_ + p0_posterior_.transpose());
  c_bar_ = reconfigure_output(model_);
  chol_q_ = cholesky_lower(model_.Q);
  chol_r_ = cholesky_lower(model_.R);
  shadow_sigma_db_ = std::sqrt(cfg_.channel.shadow_variance_db2);

  reference_state_ = Eigen::VectorXd::Zero(model_.state_dim);
  reference_state_(0) = cfg_.goal.x;
  reference_state_(1) = cfg_.goal.y;

  latch_bounds_ = detection_bounds(cfg_.detector.target_alarm_rate,
                                   cfg_.detector.latch_significance,
                                   cfg_.detector.window);

  init_agents(run_seed);
  bcast_xhat_.resize(agents_.size());
  bcast_u_prev_.resize(agents_.size());
  record_.agents.resize(agents_.size());
}

void World::init_agents(std::uint64_t run_seed) {
  const int n = cfg_.n_agents;
  const int d = model_.pos_dim;
  agents_.clear();
  agents_.reserve(n);

  // Initial positions: explicit placement when configured, otherwise
  // uniform in the init region with a minimum pairwise spacing of half the
  // desired formation distance.
  std::vector<Eigen::Vector2d> positions;
  if (!cfg_.initial_positions.empty()) {
    for (const auto& p : cfg_.initial_positions) {
      positions.emplace_back(p[0], p[1]);
    }
  } else {
    Rng init_rng(derive_stream(run_seed, kSaltInit));
    const double min_spacing = 0.5 * cfg_.control.desired_spacing;
    for (int i = 0; i < n; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
        Eigen::Vector2d cand(
            init_rng.uniform(cfg_.init_region.x_min, cfg_.init_region.x_max),
            init_rng.uniform(cfg_.init_region.y_min, cfg_.init_region.y_max));
        placed = true;
        for (const Eigen::Vector2d& p : positions) {
          if ((p - cand).norm() < min_spacing) {
            placed = false;
            break;
          }
        }
        if (placed) positions.push_back(cand);
      }
      if (!placed) {
        throw NumericError(
            "init_agents: could not place agents with the required spacing; "
            "enlarge init_region");
      }
    }
  }

  DetectorState proto =
      make_detector(cfg_.detector.target_alarm_rate, cfg_.detector.significance,
                    cfg_.detector.window, d);

  for (int i = 0; i < n; ++i) {
    AgentRuntime a;
    a.x_true = Eigen::VectorXd::Zero(model_.state_dim);
    a.x_true.head(d) = positions[i];

    a.kf.xhat = a.x_true;
    a.kf.P = p0_posterior_;
    a.kf.mode = EstimatorMode::nominal;
    a.kf.C_eff = model_.C;
    a.kf.R_eff = model_.R;

    a.u = Eigen::VectorXd::Zero(model_.input_dim);
    a.u_prev = Eigen::VectorXd::Zero(model_.input_dim);
    a.y_meas = Eigen::VectorXd::Zero(model_.output_dim);

    a.onboard = proto;
    a.monitors.resize(n);
    for (NeighborMonitor& m : a.monitors) m.det = proto;

    for (const CompromiseSpec& s : cfg_.attacks) {
      if (s.target == i) a.attacks.emplace_back(&s, CompromiseState{});
    }

    a.adaptive.forgetting = cfg_.forgetting;
    a.adaptive.process_pos_cov = model_.Q.topLeftCorner(d, d);
    a.adaptive.cov_floor = cfg_.meas_cov_floor;

    a.dyn_rng = Rng(derive_stream(run_seed, kSaltDynamics, i));
    a.rf_rng = Rng(derive_stream(run_seed, kSaltChannel, i));
    agents_.push_back(std::move(a));
  }
}

void World::compute_control(int i) {
  AgentRuntime& a = agents_[i];
  std::vector<Eigen::VectorXd> neighbor_ests;
  neighbor_ests.reserve(control_graph_.neighbors[i].size());
  // Distrust flags gate anchor selection only. Dropping flagged agents from
  // the spring mesh as well leaves the recovered ones mutually unregulated
  // and they collapse onto each other under the goal pull.
  for (int j : control_graph_.neighbors[i]) {
    neighbor_ests.push_back(bcast_xhat_[j]);
  }
  ControlCommand cmd = spring_damper_control(a.kf.xhat, neighbor_ests,
                                             reference_state_, cfg_.control);
  a.u = cmd.accel;
  a.rec.coincident = cmd.coincident ? 1 : 0;
}

void World::propagate_and_measure(int i, long t_next) {
  AgentRuntime& a = agents_[i];
  Eigen::VectorXd process_noise = a.dyn_rng.gaussian_with_factor(chol_q_);
  a.x_true = propagate(model_, a.x_true, a.u, process_noise);

  Eigen::VectorXd meas_noise = a.dyn_rng.gaussian_with_factor(chol_r_);
  Eigen::VectorXd y = measure(model_, a.x_true, meas_noise);
  for (auto& [spec, state] : a.attacks) {
    y = apply_compromise(y, a.x_true, *spec, t_next,
                         meas_noise.head(model_.pos_dim), state,
                         model_.pos_dim);
  }
  a.y_meas = y;
}

void World::nominal_update(int i, long t_next) {
  AgentRuntime& a = agents_[i];
  const int d = model_.pos_dim;

  Eigen::VectorXd innovation = kf_update(a.kf, a.y_meas);
  double z = chi_square_test_measure(innovation.head(d), residual_cov_.pos);
  bool alarm = z > a.onboard.threshold;
  a.onboard.alarm_rate =
      update_alarm_rate(a.onboard.alarm_rate, alarm, a.onboard.window);

  a.rec.test_measure = z;
  a.rec.alarm = alarm ? 1 : 0;
  a.rec.alarm_rate = a.onboard.alarm_rate;
  a.rec.rate_out_of_bounds =
      is_anomalous(a.onboard.alarm_rate, a.onboard.bounds) ? 1 : 0;

  if (is_anomalous(a.onboard.alarm_rate, latch_bounds_)) {
    ++a.onboard_streak;
  } else {
    a.onboard_streak = 0;
  }
  if (response_enabled() &&
      a.onboard_streak >= cfg_.detector.latch_persistence) {
    switch_to_recovered(i, t_next);
  }
}

void World::switch_to_recovered(int i, long t_next) {
  AgentRuntime& a = agents_[i];
  const int d = model_.pos_dim;

  a.kf.mode = EstimatorMode::recovered;
  a.kf.C_eff = c_bar_;
  a.detection_step = t_next;
  a.onboard.alarm_rate = a.onboard.target_alarm_rate;
  a.onboard_streak = 0;

  a.adaptive.residual_cov = 2.0 * residual_cov_.pos;
  a.adaptive.has_prev = false;
  a.innovation_cov = 2.0 * residual_cov_.pos;

  Eigen::MatrixXd rest = model_.R.bottomRightCorner(model_.output_dim - d,
                                                    model_.output_dim - d);
  switch (variant_) {
    case Variant::recovery_no_R_update:
      a.kf.R_eff = model_.R;
      break;
    case Variant::recovery_robust_R:
    case Variant::recovery_nonrobust_R:
      a.kf.R_eff =
          assemble_measurement_cov(extract_measurement_cov(a.adaptive), rest);
      break;
    case Variant::no_recovery:
      break;
  }
}

void World::recovered_update(int i, long t_next) {
  AgentRuntime& a = agents_[i];
  const int d = model_.pos_dim;

  // Anchor candidates: everything heard this round, positions taken from
  // the broadcasts, ranges from RSSI sampled on the true geometry.
  std::vector<AnchorBroadcast> candidates;
  std::vector<char> trusted(agents_.size(), 1);
  candidates.reserve(comm_graph_.neighbors[i].size());
  for (int j : comm_graph_.neighbors[i]) {
    double dist = (agents_[j].x_true.head(d) - a.x_true.head(d)).norm();
    dist = std::max(dist, 1e-3);
    double shadow = a.rf_rng.gaussian() * shadow_sigma_db_;
    AnchorBroadcast ab;
    ab.id = j;
    ab.position = bcast_xhat_[j].head(d);
    ab.rx_power_dbm = sample_rssi(dist, cfg_.channel, shadow);
    candidates.push_back(std::move(ab));
    trusted[j] = a.monitors[j].flagged ? 0 : 1;
  }

  bool bootstrap = !a.adaptive.has_prev;
  FixResult fix = rssi_position_fix(a.kf.xhat.head(d), candidates, trusted,
                                    cfg_.channel, bootstrap);

  a.rec.fix_valid = fix.status == FixStatus::ok ? 1 : 0;
  a.rec.fix_anchors = fix.anchors_used;
  a.rec.fix_condition = fix.condition;
  a.rec.fix_clamped = fix.bias_clamped ? 1 : 0;
  a.rec.fix_weight_fallback = fix.weight_fallback ? 1 : 0;

  if (fix.status != FixStatus::ok) {
    // Not enough trusted anchors (or degenerate geometry): hold the
    // prediction and restart the residual pairing at the next good fix.
    a.rec.predict_only = 1;
    a.adaptive.has_prev = false;
    a.rec.alarm_rate = a.onboard.alarm_rate;
    return;
  }

  a.rec.fix_x = fix.position(0);
  a.rec.fix_y = fix.position(1);

  Eigen::MatrixXd rest = model_.R.bottomRightCorner(model_.output_dim - d,
                                                    model_.output_dim - d);
  if (variant_ == Variant::recovery_robust_R) {
    if (a.adaptive.has_prev) {
      Eigen::VectorXd resid = rssi_residual(fix.position, a.adaptive, model_,
                                            a.u);
      update_residual_covariance(a.adaptive, resid);
    }
    a.kf.R_eff =
        assemble_measurement_cov(extract_measurement_cov(a.adaptive), rest);
  } else if (variant_ == Variant::recovery_nonrobust_R) {
    // Classic innovation-based adaptation: driven by the predicted state,
    // which is exactly what the attack corrupted.
    Eigen::VectorXd innov_pos =
        fix.position - (c_bar_ * a.kf.xhat).head(d);
    a.innovation_cov = (1.0 - cfg_.forgetting) * a.innovation_cov +
                       cfg_.forgetting * innov_pos * innov_pos.transpose();
    a.innovation_cov = 0.5 * (a.innovation_cov + a.innovation_cov.transpose());
    Eigen::MatrixXd s_pred =
        (c_bar_ * a.kf.P * c_bar_.transpose()).topLeftCorner(d, d);
    Eigen::MatrixXd r_bar =
        floor_eigenvalues(a.innovation_cov - s_pred, cfg_.meas_cov_floor);
    a.kf.R_eff = assemble_measurement_cov(r_bar, rest);
  }
  // recovery_no_R_update keeps the nominal R_eff.

  Eigen::VectorXd y_rec = a.y_meas;
  y_rec.head(d) = fix.position;

  Eigen::MatrixXd s_pos = (c_bar_ * a.kf.P * c_bar_.transpose() + a.kf.R_eff)
                              .topLeftCorner(d, d);
  Eigen::VectorXd innovation = kf_update(a.kf, y_rec);
  double z = chi_square_test_measure(innovation.head(d), s_pos);
  bool alarm = z > a.onboard.threshold;
  a.onboard.alarm_rate =
      update_alarm_rate(a.onboard.alarm_rate, alarm, a.onboard.window);

  a.rec.test_measure = z;
  a.rec.alarm = alarm ? 1 : 0;
  a.rec.alarm_rate = a.onboard.alarm_rate;
  a.rec.rate_out_of_bounds =
      is_anomalous(a.onboard.alarm_rate, a.onboard.bounds) ? 1 : 0;

  a.adaptive.prev_correction_state = a.kf.xhat;
  a.adaptive.prev_correction_state.head(d) = fix.position;
  a.adaptive.prev_correction_state.tail(model_.state_dim - d) =
      a.kf.xhat.tail(model_.state_dim - d);
  a.adaptive.has_prev = true;
}

void World::estimate(int i, long t_next) {
  AgentRuntime& a = agents_[i];
  kf_predict(a.kf, model_, a.u);
  if (a.kf.mode == EstimatorMode::nominal) {
    nominal_update(i, t_next);
  } else {
    recovered_update(i, t_next);
  }
}

void World::update_monitors(int i, long t_now) {
  AgentRuntime& a = agents_[i];
  for (int j : comm_graph_.neighbors[i]) {
    NeighborMonitor& m = a.monitors[j];
    if (m.last_step == t_now - 1) {
      Eigen::VectorXd predicted =
          inter_agent_predict(model_, m.last_xhat, bcast_u_prev_[j]);
      Eigen::VectorXd resid = bcast_xhat_[j] - predicted;
      double z = chi_square_test_measure(resid.head(model_.pos_dim),
                                         residual_cov_.interagent_pos);
      bool alarm = z > m.det.threshold;
      m.det.alarm_rate = update_alarm_rate(m.det.alarm_rate, alarm,
                                           m.det.window);
      if (is_anomalous(m.det.alarm_rate, latch_bounds_)) {
        ++m.streak;
      } else {
        m.streak = 0;
      }
      if (response_enabled() && !m.flagged &&
          m.streak >= cfg_.detector.latch_persistence) {
        m.flagged = true;
      }
    }
    m.last_xhat = bcast_xhat_[j];
    m.last_step = t_now;
  }
}

void World::step() {
  const int n = agent_count();
  const int d = model_.pos_dim;
  const long t_now = step_index_;
  const long t_next = step_index_ + 1;

  for (int i = 0; i < n; ++i) {
    bcast_xhat_[i] = agents_[i].kf.xhat;
    bcast_u_prev_[i] = agents_[i].u_prev;
    agents_[i].rec = AgentRecord{};
    agents_[i].rec.id = i;
  }

  std::vector<Eigen::Vector2d> true_pos(n), est_pos(n);
  for (int i = 0; i < n; ++i) {
    true_pos[i] = agents_[i].x_true.head(d);
    est_pos[i] = bcast_xhat_[i].head(d);
  }
  comm_graph_ = build_comm_graph(true_pos, cfg_.channel.comm_range_m);
  control_graph_ = build_control_graph(est_pos, cfg_.control.neighbor_range);

  for_each_index(n, parallel_, [&](int i) { compute_control(i); });
  for_each_index(n, parallel_,
                 [&](int i) { propagate_and_measure(i, t_next); });
  for_each_index(n, parallel_, [&](int i) { estimate(i, t_next); });
  for_each_index(n, parallel_, [&](int i) { update_monitors(i, t_now); });

  for (int i = 0; i < n; ++i) {
    AgentRuntime& a = agents_[i];
    AgentRecord& r = a.rec;
    r.mode = a.kf.mode == EstimatorMode::recovered ? 1 : 0;
    r.true_px = a.x_true(0);
    r.true_py = a.x_true(1);
    r.true_vx = a.x_true(2);
    r.true_vy = a.x_true(3);
    r.est_px = a.kf.xhat(0);
    r.est_py = a.kf.xhat(1);
    r.est_vx = a.kf.xhat(2);
    r.est_vy = a.kf.xhat(3);
    r.u_x = a.u(0);
    r.u_y = a.u(1);
    r.meas_px = a.y_meas(0);
    r.meas_py = a.y_meas(1);
    r.flagged_neighbors = flagged_count(i);
    r.rbar_xx = a.kf.R_eff(0, 0);
    r.rbar_yy = a.kf.R_eff(1, 1);
    record_.agents[i] = r;
    a.u_prev = a.u;
  }

  std::vector<Eigen::Vector2d> new_true(n);
  for (int i = 0; i < n; ++i) new_true[i] = agents_[i].x_true.head(d);
  ProximityGraph metric_graph =
      build_proximity_graph(new_true, cfg_.control.neighbor_range);
  record_.k = t_next;
  record_.formation_error =
      formation_error(new_true, metric_graph, cfg_.control.desired_spacing);

  step_index_ = t_next;
}

void World::run(const std::function<void(const StepRecord&)>& sink) {
  for (long s = 0; s < cfg_.max_steps; ++s) {
    step();
    if (sink) sink(record_);
  }
}

int World::flagged_count(int i) const {
  int count = 0;
  for (const NeighborMonitor& m : agents_[i].monitors) {
    if (m.flagged) ++count;
  }
  return count;
}

double World::distance_to_goal(int i) const {
  Eigen::Vector2d goal(cfg_.goal.x, cfg_.goal.y);
  return (agents_[i].x_true.head(2) - goal).norm();
}

void run_scenario(const ScenarioConfig& cfg, Variant variant,
                  std::uint64_t run_seed, bool parallel_agents,
                  const std::function<void(const StepRecord&)>& sink) {
  World world(cfg, variant, run_seed, parallel_agents);
  world.run(sink);
}

PerRunStats run_stats(const ScenarioConfig& cfg, Variant variant,
                      std::uint64_t run_seed, bool parallel_agents) {
  World world(cfg, variant, run_seed, parallel_agents);

  long attack_start = std::numeric_limits<long>::max();
  for (const CompromiseSpec& s : cfg.attacks) {
    attack_start = std::min(attack_start, s.start_step);
  }

  PerRunStats stats;
  stats.formation_error_by_step.reserve(cfg.max_steps);
  double pre_sum = 0, post_sum = 0;
  long pre_count = 0, post_count = 0;

  world.run([&](const StepRecord& rec) {
    double e = rec.formation_error
                   ? *rec.formation_error
                   : std::numeric_limits<double>::quiet_NaN();
    stats.formation_error_by_step.push_back(e);
    if (rec.formation_error) {
      if (rec.k < attack_start) {
        pre_sum += e;
        ++pre_count;
      } else {
        post_sum += e;
        ++post_count;
      }
    }
    for (const AgentRecord& a : rec.agents) {
      if (a.mode == 1) {
        // recovered-mode estimation error of compromised agents
        if (world.is_compromised(a.id)) {
          double ex = a.true_px - a.est_px;
          double ey = a.true_py - a.est_py;
          stats.err_sum_x += ex;
          stats.err_sq_x += ex * ex;
          stats.err_sum_y += ey;
          stats.err_sq_y += ey * ey;
          ++stats.err_count;
        }
      }
    }
  });

  stats.pre_attack_mean_error =
      pre_count > 0 ? pre_sum / pre_count
                    : std::numeric_limits<double>::quiet_NaN();
  stats.post_attack_mean_error =
      post_count > 0 ? post_sum / post_count
                     : std::numeric_limits<double>::quiet_NaN();

  stats.all_within_goal = true;
  for (int i = 0; i < world.agent_count(); ++i) {
    double dist = world.distance_to_goal(i);
    if (dist > cfg.goal.radius) stats.all_within_goal = false;
    if (world.is_compromised(i)) {
      stats.detection_steps.push_back(world.detection_step(i));
      if (dist > 2.0 * cfg.goal.radius) {
        ++stats.compromised_beyond_twice_radius;
      }
    }
  }
  return stats;
}

MonteCarloSummary monte_carlo(const ScenarioConfig& cfg,
                              const std::vector<Variant>& variants, int runs,
                              bool parallel_runs) {
  if (runs < 1) throw std::invalid_argument("monte_carlo: runs must be >= 1");

  MonteCarloSummary summary;
  summary.runs = runs;
  summary.variants = variants;
  summary.stats.resize(variants.size());

  for (size_t v = 0; v < variants.size(); ++v) {
    VariantStats& vs = summary.stats[v];
    vs.runs.resize(runs);
    for_each_index(runs, parallel_runs, [&](int r) {
      vs.runs[r] = run_stats(cfg, variants[v],
                             cfg.seed + static_cast<std::uint64_t>(r), false);
    });

    // serial reductions in run order
    vs.mean_formation_error_by_step.assign(cfg.max_steps, 0.0);
    std::vector<long> counts(cfg.max_steps, 0);
    double sx = 0, sqx = 0, sy = 0, sqy = 0;
    long ec = 0;
    for (const PerRunStats& rs : vs.runs) {
      for (size_t k = 0; k < rs.formation_error_by_step.size(); ++k) {
        double e = rs.formation_error_by_step[k];
        if (std::isfinite(e)) {
          vs.mean_formation_error_by_step[k] += e;
          ++counts[k];
        }
      }
      sx += rs.err_sum_x;
      sqx += rs.err_sq_x;
      sy += rs.err_sum_y;
      sqy += rs.err_sq_y;
      ec += rs.err_count;
    }
    for (size_t k = 0; k < vs.mean_formation_error_by_step.size(); ++k) {
      vs.mean_formation_error_by_step[k] =
          counts[k] > 0 ? vs.mean_formation_error_by_step[k] / counts[k]
                        : std::numeric_limits<double>::quiet_NaN();
    }
    if (ec > 1) {
      double mx = sx / ec, my = sy / ec;
      vs.error_variance_x = sqx / ec - mx * mx;
      vs.error_variance_y = sqy / ec - my * my;
    }
  }
  return summary;
}

}  // namespace swarmsim
