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
#include <functional>
#include <optional>
#include <vector>

#include "swarmsim/detection.hpp"
#include "swarmsim/estimation.hpp"
#include "swarmsim/graph.hpp"
#include "swarmsim/localization.hpp"
#include "swarmsim/rng.hpp"
#include "swarmsim/scenario.hpp"
#include "swarmsim/threat.hpp"
#include "swarmsim/trace.hpp"

namespace swarmsim {

/// Mean absolute deviation of neighbor distances from the desired spacing,
/// over the given edge set. Empty edge set -> no value (the metric is
/// undefined, not zero).
std::optional<double> formation_error(
    const std::vector<Eigen::Vector2d>& positions, const ProximityGraph& graph,
    double desired_spacing);

/// Closed-loop synchronous-round simulation of one scenario.
///
/// Round ordering: broadcast previous estimates/inputs, build graphs,
/// compute control, propagate true states, measure (with compromises),
/// estimate (nominal filter or recovery path), update neighbor monitors,
/// record. Each agent owns private RNG streams, so stepping agents in
/// parallel reproduces the serial trace bit for bit.
class World {
 public:
  World(const ScenarioConfig& cfg, Variant variant, std::uint64_t run_seed,
        bool parallel_agents = false);

  /// Advances one round; record() then describes the new step.
  void step();

  /// Runs all configured steps, invoking sink after each (sink may be null).
  void run(const std::function<void(const StepRecord&)>& sink = nullptr);

  const StepRecord& record() const { return record_; }
  long current_step() const { return step_index_; }

  const LtiModel& model() const { return model_; }
  const ResidualCovariances& residual_cov() const { return residual_cov_; }
  const Eigen::MatrixXd& prediction_cov() const { return p_inf_; }

  int agent_count() const { return static_cast<int>(agents_.size()); }
  const Eigen::VectorXd& true_state(int i) const { return agents_[i].x_true; }
  const KalmanState& kalman(int i) const { return agents_[i].kf; }
  long detection_step(int i) const { return agents_[i].detection_step; }
  int flagged_count(int i) const;
  bool is_compromised(int i) const { return !agents_[i].attacks.empty(); }
  double distance_to_goal(int i) const;

 private:
  struct NeighborMonitor {
    DetectorState det;
    Eigen::VectorXd last_xhat;
    long last_step = -2;
    int streak = 0;
    bool flagged = false;
  };

  struct AgentRuntime {
    Eigen::VectorXd x_true;
    KalmanState kf;
    Eigen::VectorXd u;       // input chosen this round
    Eigen::VectorXd u_prev;  // input broadcast alongside the estimate
    Eigen::VectorXd y_meas;  // sensor output after compromises
    DetectorState onboard;
    int onboard_streak = 0;
    long detection_step = -1;
    std::vector<NeighborMonitor> monitors;
    std::vector<std::pair<const CompromiseSpec*, CompromiseState>> attacks;
    AdaptiveCovState adaptive;
    Eigen::MatrixXd innovation_cov;  // nonrobust adaptation state
    Rng dyn_rng{0};
    Rng rf_rng{0};
    AgentRecord rec;
  };

  void init_agents(std::uint64_t run_seed);
  void compute_control(int i);
  void propagate_and_measure(int i, long t_next);
  void estimate(int i, long t_next);
  void nominal_update(int i, long t_next);
  void recovered_update(int i, long t_next);
  void switch_to_recovered(int i, long t_next);
  void update_monitors(int i, long t_now);
  bool response_enabled() const { return variant_ != Variant::no_recovery; }

  ScenarioConfig cfg_;
  Variant variant_;
  bool parallel_;
  LtiModel model_;
  Eigen::MatrixXd p_inf_;
  Eigen::MatrixXd p0_posterior_;
  ResidualCovariances residual_cov_;
  Eigen::MatrixXd c_bar_;
  Eigen::MatrixXd chol_q_;
  Eigen::MatrixXd chol_r_;
  Eigen::VectorXd reference_state_;
  DetectorBounds latch_bounds_;
  double shadow_sigma_db_ = 0.0;

  std::vector<AgentRuntime> agents_;
  std::vector<Eigen::VectorXd> bcast_xhat_;
  std::vector<Eigen::VectorXd> bcast_u_prev_;
  ProximityGraph comm_graph_;
  ProximityGraph control_graph_;
  long step_index_ = 0;
  StepRecord record_;
};

/// Runs a scenario end to end; convenience wrapper over World.
void run_scenario(const ScenarioConfig& cfg, Variant variant,
                  std::uint64_t run_seed, bool parallel_agents,
                  const std::function<void(const StepRecord&)>& sink);

/// Per-run reductions used by Monte Carlo batches and the CLI summary.
struct PerRunStats {
  std::vector<double> formation_error_by_step;  // NaN where undefined
  double pre_attack_mean_error = 0.0;
  double post_attack_mean_error = 0.0;
  bool all_within_goal = false;
  int compromised_beyond_twice_radius = 0;
  std::vector<long> detection_steps;  // per compromised agent id order
  // pooled position estimation error sums over recovered-mode steps of
  // compromised agents
  double err_sum_x = 0, err_sq_x = 0, err_sum_y = 0, err_sq_y = 0;
  long err_count = 0;
};

PerRunStats run_stats(const ScenarioConfig& cfg, Variant variant,
                      std::uint64_t run_seed, bool parallel_agents = false);

struct VariantStats {
  std::vector<PerRunStats> runs;
  std::vector<double> mean_formation_error_by_step;
  double error_variance_x = 0.0;  // pooled recovered-mode estimation error
  double error_variance_y = 0.0;
};

struct MonteCarloSummary {
  int runs = 0;
  std::vector<Variant> variants;
  std::vector<VariantStats> stats;  // parallel to variants
};

/// Runs `runs` seeds (cfg.seed + run index) for each variant. Runs execute
/// in parallel when requested; reductions happen serially in run order so
/// the summary is deterministic.
MonteCarloSummary monte_carlo(const ScenarioConfig& cfg,
                              const std::vector<Variant>& variants, int runs,
                              bool parallel_runs = true);

}  // namespace swarmsim
