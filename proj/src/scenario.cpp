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

#include "swarmsim/scenario.hpp"

#include <fstream>
#include <sstream>

#include "swarmsim/errors.hpp"

namespace swarmsim {

namespace {

using nlohmann::json;

std::string kind_to_string(CompromiseKind k) {
  switch (k) {
    case CompromiseKind::bias:
      return "bias";
    case CompromiseKind::ramp_divert:
      return "ramp_divert";
    case CompromiseKind::stuck:
      return "stuck";
    case CompromiseKind::noise_inflation:
      return "noise_inflation";
  }
  throw ConfigError("unknown compromise kind");
}

CompromiseKind kind_from_string(const std::string& s) {
  if (s == "bias") return CompromiseKind::bias;
  if (s == "ramp_divert") return CompromiseKind::ramp_divert;
  if (s == "stuck") return CompromiseKind::stuck;
  if (s == "noise_inflation") return CompromiseKind::noise_inflation;
  throw ConfigError("unknown compromise kind: " + s);
}

Eigen::VectorXd vec2_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(std::string(field) + " must be a 2-element array");
  }
  Eigen::VectorXd v(2);
  v << j[0].get<double>(), j[1].get<double>();
  return v;
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::no_recovery:
      return "no_recovery";
    case Variant::recovery_no_R_update:
      return "recovery_no_R_update";
    case Variant::recovery_nonrobust_R:
      return "recovery_nonrobust_R";
    case Variant::recovery_robust_R:
      return "recovery_robust_R";
  }
  throw ConfigError("unknown variant");
}

Variant variant_from_string(const std::string& name) {
  if (name == "no_recovery") return Variant::no_recovery;
  if (name == "recovery_no_R_update" || name == "no_update")
    return Variant::recovery_no_R_update;
  if (name == "recovery_nonrobust_R" || name == "nonrobust")
    return Variant::recovery_nonrobust_R;
  if (name == "recovery_robust_R" || name == "robust")
    return Variant::recovery_robust_R;
  throw ConfigError("unknown variant: " + name);
}

ScenarioConfig default_config() {
  ScenarioConfig cfg;  // field defaults are the shipped scenario
  Eigen::VectorXd divert(2);
  divert << 20.0, -60.0;
  for (int id = 0; id < 5; ++id) {
    CompromiseSpec s;
    s.target = id;
    s.start_step = 350;
    s.kind = CompromiseKind::ramp_divert;
    s.divert_target = divert;
    s.rate = 0.25;
    cfg.attacks.push_back(s);
  }
  CompromiseSpec stuck;
  stuck.target = 5;
  stuck.start_step = 350;
  stuck.kind = CompromiseKind::stuck;
  cfg.attacks.push_back(stuck);

  CompromiseSpec noisy;
  noisy.target = 6;
  noisy.start_step = 350;
  noisy.kind = CompromiseKind::noise_inflation;
  noisy.noise_scale = 3.0;
  cfg.attacks.push_back(noisy);
  return cfg;
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig cfg;
  cfg.attacks.clear();
  try {
    read_if(j, "n_agents", cfg.n_agents);
    read_if(j, "dt", cfg.dt);
    read_if(j, "max_steps", cfg.max_steps);
    read_if(j, "seed", cfg.seed);

    if (j.contains("model")) {
      const json& m = j.at("model");
      read_if(m, "q_pos", cfg.q_pos);
      read_if(m, "q_vel", cfg.q_vel);
      read_if(m, "r_pos", cfg.r_pos);
      read_if(m, "r_vel", cfg.r_vel);
    }
    if (j.contains("control")) {
      const json& c = j.at("control");
      read_if(c, "desired_spacing", cfg.control.desired_spacing);
      read_if(c, "neighbor_range", cfg.control.neighbor_range);
      read_if(c, "spring_gain", cfg.control.spring_gain);
      read_if(c, "damper_gain", cfg.control.damper_gain);
      read_if(c, "goal_gain", cfg.control.goal_gain);
      read_if(c, "velocity_damping", cfg.control.velocity_damping);
      read_if(c, "max_accel", cfg.control.max_accel);
    }
    if (j.contains("channel")) {
      const json& c = j.at("channel");
      read_if(c, "tx_power_dbm", cfg.channel.tx_power_dbm);
      read_if(c, "ref_path_loss_db", cfg.channel.ref_path_loss_db);
      read_if(c, "ref_distance_m", cfg.channel.ref_distance_m);
      read_if(c, "path_loss_exponent", cfg.channel.path_loss_exponent);
      read_if(c, "shadow_variance_db2", cfg.channel.shadow_variance_db2);
      read_if(c, "comm_range_m", cfg.channel.comm_range_m);
    }
    if (j.contains("detector")) {
      const json& d = j.at("detector");
      read_if(d, "target_alarm_rate", cfg.detector.target_alarm_rate);
      read_if(d, "significance", cfg.detector.significance);
      read_if(d, "window", cfg.detector.window);
      read_if(d, "latch_significance", cfg.detector.latch_significance);
      read_if(d, "latch_persistence", cfg.detector.latch_persistence);
    }
    read_if(j, "forgetting", cfg.forgetting);
    read_if(j, "meas_cov_floor", cfg.meas_cov_floor);

    if (j.contains("goal")) {
      const json& g = j.at("goal");
      read_if(g, "x", cfg.goal.x);
      read_if(g, "y", cfg.goal.y);
      read_if(g, "radius", cfg.goal.radius);
    }
    if (j.contains("init_region")) {
      const json& r = j.at("init_region");
      read_if(r, "x_min", cfg.init_region.x_min);
      read_if(r, "x_max", cfg.init_region.x_max);
      read_if(r, "y_min", cfg.init_region.y_min);
      read_if(r, "y_max", cfg.init_region.y_max);
    }
    if (j.contains("initial_positions")) {
      for (const json& p : j.at("initial_positions")) {
        if (!p.is_array() || p.size() != 2) {
          throw ConfigError("initial_positions entries must be [x, y]");
        }
        cfg.initial_positions.push_back(
            {p[0].get<double>(), p[1].get<double>()});
      }
    }
    if (j.contains("attacks")) {
      for (const json& a : j.at("attacks")) {
        CompromiseSpec s;
        s.target = a.at("target").get<int>();
        s.start_step = a.at("start_step").get<long>();
        s.kind = kind_from_string(a.at("kind").get<std::string>());
        if (a.contains("bias")) s.bias = vec2_from_json(a.at("bias"), "bias");
        if (a.contains("divert_target")) {
          s.divert_target =
              vec2_from_json(a.at("divert_target"), "divert_target");
        }
        if (a.contains("rate")) s.rate = a.at("rate").get<double>();
        if (a.contains("noise_scale")) {
          s.noise_scale = a.at("noise_scale").get<double>();
        }
        cfg.attacks.push_back(std::move(s));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["n_agents"] = cfg.n_agents;
  j["dt"] = cfg.dt;
  j["max_steps"] = cfg.max_steps;
  j["seed"] = cfg.seed;
  j["model"] = {{"q_pos", cfg.q_pos},
                {"q_vel", cfg.q_vel},
                {"r_pos", cfg.r_pos},
                {"r_vel", cfg.r_vel}};
  j["control"] = {{"desired_spacing", cfg.control.desired_spacing},
                  {"neighbor_range", cfg.control.neighbor_range},
                  {"spring_gain", cfg.control.spring_gain},
                  {"damper_gain", cfg.control.damper_gain},
                  {"goal_gain", cfg.control.goal_gain},
                  {"velocity_damping", cfg.control.velocity_damping},
                  {"max_accel", cfg.control.max_accel}};
  j["channel"] = {{"tx_power_dbm", cfg.channel.tx_power_dbm},
                  {"ref_path_loss_db", cfg.channel.ref_path_loss_db},
                  {"ref_distance_m", cfg.channel.ref_distance_m},
                  {"path_loss_exponent", cfg.channel.path_loss_exponent},
                  {"shadow_variance_db2", cfg.channel.shadow_variance_db2},
                  {"comm_range_m", cfg.channel.comm_range_m}};
  j["detector"] = {{"target_alarm_rate", cfg.detector.target_alarm_rate},
                   {"significance", cfg.detector.significance},
                   {"window", cfg.detector.window},
                   {"latch_significance", cfg.detector.latch_significance},
                   {"latch_persistence", cfg.detector.latch_persistence}};
  j["forgetting"] = cfg.forgetting;
  j["meas_cov_floor"] = cfg.meas_cov_floor;
  j["goal"] = {{"x", cfg.goal.x}, {"y", cfg.goal.y}, {"radius", cfg.goal.radius}};
  j["init_region"] = {{"x_min", cfg.init_region.x_min},
                      {"x_max", cfg.init_region.x_max},
                      {"y_min", cfg.init_region.y_min},
                      {"y_max", cfg.init_region.y_max}};
  if (!cfg.initial_positions.empty()) {
    j["initial_positions"] = json::array();
    for (const auto& p : cfg.initial_positions) {
      j["initial_positions"].push_back({p[0], p[1]});
    }
  }
  j["attacks"] = json::array();
  for (const CompromiseSpec& s : cfg.attacks) {
    json a;
    a["target"] = s.target;
    a["start_step"] = s.start_step;
    a["kind"] = kind_to_string(s.kind);
    if (s.bias.size() == 2) a["bias"] = {s.bias(0), s.bias(1)};
    if (s.divert_target.size() == 2) {
      a["divert_target"] = {s.divert_target(0), s.divert_target(1)};
    }
    if (s.kind == CompromiseKind::ramp_divert) a["rate"] = s.rate;
    if (s.kind == CompromiseKind::noise_inflation) {
      a["noise_scale"] = s.noise_scale;
    }
    j["attacks"].push_back(a);
  }
  return j;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
  std::vector<std::string> errs;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) errs.push_back(msg);
  };

  need(cfg.n_agents >= 1, "n_agents must be >= 1");
  need(cfg.dt > 0.0, "dt must be > 0");
  need(cfg.max_steps > 0, "max_steps must be > 0");
  need(cfg.q_pos > 0.0 && cfg.q_vel > 0.0, "process noise must be > 0");
  need(cfg.r_pos > 0.0 && cfg.r_vel > 0.0, "measurement noise must be > 0");

  need(cfg.control.desired_spacing > 0.0, "control.desired_spacing must be > 0");
  need(cfg.control.neighbor_range >= cfg.control.desired_spacing,
       "control.neighbor_range must be >= desired_spacing");
  need(cfg.control.spring_gain >= 0.0 && cfg.control.damper_gain >= 0.0 &&
           cfg.control.goal_gain >= 0.0 && cfg.control.velocity_damping >= 0.0,
       "control gains must be >= 0");
  need(cfg.control.max_accel > 0.0, "control.max_accel must be > 0");

  need(cfg.channel.ref_distance_m > 0.0, "channel.ref_distance_m must be > 0");
  need(cfg.channel.path_loss_exponent > 0.0,
       "channel.path_loss_exponent must be > 0");
  need(cfg.channel.shadow_variance_db2 >= 0.0,
       "channel.shadow_variance_db2 must be >= 0");
  need(cfg.channel.comm_range_m > 0.0, "channel.comm_range_m must be > 0");

  need(cfg.detector.target_alarm_rate > 0.0 &&
           cfg.detector.target_alarm_rate < 1.0,
       "detector.target_alarm_rate must be in (0, 1)");
  need(cfg.detector.significance > 0.0 && cfg.detector.significance < 1.0,
       "detector.significance must be in (0, 1)");
  need(cfg.detector.latch_significance > 0.0 &&
           cfg.detector.latch_significance < 1.0,
       "detector.latch_significance must be in (0, 1)");
  need(cfg.detector.window >= 1, "detector.window must be >= 1");
  need(cfg.detector.latch_persistence >= 1,
       "detector.latch_persistence must be >= 1");

  need(cfg.forgetting > 0.0 && cfg.forgetting < 1.0,
       "forgetting must be in (0, 1)");
  need(cfg.meas_cov_floor > 0.0, "meas_cov_floor must be > 0");
  need(cfg.goal.radius > 0.0, "goal.radius must be > 0");
  need(cfg.init_region.x_max > cfg.init_region.x_min &&
           cfg.init_region.y_max > cfg.init_region.y_min,
       "init_region must be non-empty");
  need(cfg.initial_positions.empty() ||
           cfg.initial_positions.size() == static_cast<size_t>(cfg.n_agents),
       "initial_positions must list one [x, y] per agent");

  for (const CompromiseSpec& s : cfg.attacks) {
    std::string tag = "attack on agent " + std::to_string(s.target) + ": ";
    need(s.target >= 0 && s.target < cfg.n_agents, tag + "target out of range");
    need(s.start_step >= 0, tag + "start_step must be >= 0");
    need(s.start_step < cfg.max_steps, tag + "start_step beyond max_steps");
    if (s.kind == CompromiseKind::ramp_divert) {
      need(s.rate > 0.0, tag + "rate must be > 0");
      need(s.divert_target.size() == 2, tag + "divert_target missing");
    }
    if (s.kind == CompromiseKind::bias) {
      need(s.bias.size() == 2, tag + "bias vector missing");
    }
    if (s.kind == CompromiseKind::noise_inflation) {
      need(s.noise_scale > 1.0, tag + "noise_scale must be > 1");
    }
  }
  return errs;
}

std::vector<std::string> config_warnings(const ScenarioConfig& cfg) {
  std::vector<std::string> warns;
  // A compromised agent needs D+1 = 3 trusted in-range anchors to relocalize.
  if (cfg.n_agents < 4) {
    warns.push_back(
        "n_agents < 4: a compromised agent cannot gather the 3 anchors "
        "required for a position fix");
  }
  int compromised = static_cast<int>(cfg.attacks.size());
  if (cfg.n_agents - compromised < 3 && compromised > 0) {
    warns.push_back(
        "fewer than 3 uncompromised agents remain; recovery fixes will "
        "be starved of anchors");
  }
  if (cfg.channel.comm_range_m < cfg.control.neighbor_range) {
    warns.push_back("comm_range_m below neighbor_range: broadcasts will not "
                    "reach all control neighbors");
  }
  return warns;
}

void apply_override(json& j, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key.path=value: " + assignment);
  }
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);

  json* node = &j;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError("bad override path: " + path);
    parts.push_back(part);
  }
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    node = &(*node)[parts[i]];
  }
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) {
    (*node)[parts.back()] = value;  // plain string value
  } else {
    (*node)[parts.back()] = parsed;
  }
}

}  // namespace swarmsim
