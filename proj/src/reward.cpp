#include "strider/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace strider::reward {

double RewardConfig::beta_lat() const { return k_lat * std::pow(delta, alpha_lat); }

void validate(const AxisParams& p) {
  if (!(p.k > 0.0)) throw std::invalid_argument("reward: k must be > 0");
  if (!(p.alpha > 0.0)) throw std::invalid_argument("reward: alpha must be > 0");
  if (!(p.gamma >= 0.0 && p.gamma <= 1.0)) throw std::invalid_argument("reward: gamma must be in [0, 1]");
  if (!std::isfinite(p.beta)) throw std::invalid_argument("reward: beta must be finite");
}

void validate(const RewardConfig& c) {
  for (const auto& a : c.axes) validate(a);
  if (!(c.fall_penalty < 0.0)) throw std::invalid_argument("reward: fall_penalty must be < 0");
  if (!(c.omega_f > 0.0)) throw std::invalid_argument("reward: omega_f must be > 0");
  if (!(c.theta_u >= 0.0)) throw std::invalid_argument("reward: theta_u must be >= 0");
  if (!(c.delta >= 0.0)) throw std::invalid_argument("reward: delta must be >= 0");
  if (!(c.k_lat >= 0.0)) throw std::invalid_argument("reward: k_lat must be >= 0");
  if (!(c.alpha_lat > 0.0)) throw std::invalid_argument("reward: alpha_lat must be > 0");
}

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::ramp_run:
      return "ramp_run";
    case TaskKind::stair_run:
      return "stair_run";
    case TaskKind::spiral_climb:
      return "spiral_climb";
  }
  return "ramp_run";
}

TaskKind parse_task_kind(std::string_view name) {
  if (name == "ramp_run") return TaskKind::ramp_run;
  if (name == "stair_run") return TaskKind::stair_run;
  if (name == "spiral_climb") return TaskKind::spiral_climb;
  throw std::invalid_argument("reward: unknown task '" + std::string(name) + "'");
}

void validate(const TaskSpec& t) {
  if (!(t.required[0] || t.required[1] || t.required[2]))
    throw std::invalid_argument("reward: task needs at least one required axis");
  if (!(t.forward_ref_m_s > 0.0 && t.vertical_ref_m_s > 0.0 && t.yaw_ref_rad_s > 0.0))
    throw std::invalid_argument("reward: reference scales must be > 0");
  for (double v : t.target)
    if (!std::isfinite(v)) throw std::invalid_argument("reward: targets must be finite");
}

TaskSpec default_task(const sim::Terrain& terrain) {
  TaskSpec t;
  const auto& p = terrain.params();
  switch (terrain.kind()) {
    case sim::TerrainKind::flat:
    case sim::TerrainKind::ramp:
      t.kind = TaskKind::ramp_run;
      break;
    case sim::TerrainKind::stairs:
      t.kind = TaskKind::stair_run;
      t.target[kZ] = p.step_height_m / p.step_depth_m * t.forward_ref_m_s / t.vertical_ref_m_s;
      break;
    case sim::TerrainKind::spiral_stairs: {
      t.kind = TaskKind::spiral_climb;
      t.required = {true, false, true};
      t.yaw_ref_rad_s = t.forward_ref_m_s / p.spiral_path_radius_m;
      t.target[kX] = 1.0;
      t.target[kY] = 0.0;
      const double run = p.spiral_step_angle_rad * p.spiral_path_radius_m;
      t.target[kZ] = p.spiral_step_height_m / run * t.forward_ref_m_s / t.vertical_ref_m_s;
      break;
    }
  }
  return t;
}

RewardConfig default_reward_config(const TaskSpec& task) {
  RewardConfig c;
  for (int i = 0; i < 3; ++i) {
    auto& a = c.axes[static_cast<std::size_t>(i)];
    a.beta = -0.5 * task.target[static_cast<std::size_t>(i)];
    a.required = task.required[static_cast<std::size_t>(i)];
  }
  return c;
}

StrideMeasurement measure(const sim::StrideKinematics& kin, const TaskSpec& task, int fall_axis) {
  if (!(kin.duration_s > 0.0)) throw std::invalid_argument("reward: stride duration must be > 0");
  if (fall_axis < 0 || fall_axis > 2) throw std::invalid_argument("reward: fall axis must be 0, 1 or 2");
  StrideMeasurement m;
  const double inv_t = 1.0 / kin.duration_s;
  m.s_x = kin.yaw_change_rad * inv_t / task.yaw_ref_rad_s;
  m.s_y = kin.forward_progress_m * inv_t / task.forward_ref_m_s;
  m.s_z = kin.climb_m * inv_t / task.vertical_ref_m_s;
  m.omega_d = kin.peak_gyro[static_cast<std::size_t>(fall_axis)];
  m.heading_change_rad = kin.heading_change_rad;
  m.lateral_disp_m = kin.lateral_offset_m;
  return m;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double sub_reward(double s, const AxisParams& p) {
  if (!p.required) return 0.0;
  return p.k * (sigmoid(p.alpha * (s + p.beta)) - p.gamma);
}

double sub_reward_derivative(double s, const AxisParams& p) {
  if (!p.required) return 0.0;
  const double sg = sigmoid(p.alpha * (s + p.beta));
  return p.k * p.alpha * sg * (1.0 - sg);
}

double loss_heading(double theta_d, double theta_u) {
  if (!(theta_d >= 0.0)) throw std::invalid_argument("reward: heading change must be >= 0");
  return theta_d > theta_u ? -1.0 : 0.0;
}

double loss_lateral(double l_x, const RewardConfig& c) {
  return -c.k_lat * std::pow(std::abs(l_x) + c.delta, c.alpha_lat) + c.beta_lat();
}

RewardBreakdown evaluate(const StrideMeasurement& m, const TaskSpec& task, const RewardConfig& cfg) {
  for (double v : {m.s_x, m.s_y, m.s_z, m.omega_d, m.heading_change_rad, m.lateral_disp_m})
    if (!std::isfinite(v)) throw std::invalid_argument("reward: non-finite measurement");
  RewardBreakdown b;
  if (std::abs(m.omega_d) > cfg.omega_f) {
    b.total = cfg.fall_penalty;
    b.terminal = true;
    return b;
  }
  const std::array<double, 3> s{m.s_x, m.s_y, m.s_z};
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!task.required[i]) continue;
    AxisParams p = cfg.axes[i];
    p.required = true;
    b.sub[i] = sub_reward(s[i], p);
    sum += b.sub[i];
  }
  b.heading = loss_heading(m.heading_change_rad, cfg.theta_u);
  b.lateral = loss_lateral(m.lateral_disp_m, cfg);
  b.total = sum + b.heading + b.lateral;
  return b;
}

RewardResult total_reward(const StrideMeasurement& m, const TaskSpec& task, const RewardConfig& cfg) {
  const auto b = evaluate(m, task, cfg);
  return {b.total, b.terminal};
}

}  // namespace strider::reward
