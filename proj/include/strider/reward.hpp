#pragma once
// Per-stride reward: sigmoid sub-rewards on the task axes, a heading
// penalty, a lateral-deviation penalty, and a flat penalty on falls.

#include <array>
#include <string>
#include <string_view>

#include "strider/sim.hpp"

namespace strider::reward {

enum Axis : int { kX = 0, kY = 1, kZ = 2 };

struct AxisParams {
  double k = 1.0;
  double alpha = 10.0;
  double beta = 0.0;
  double gamma = 0.5;
  bool required = false;
};

struct RewardConfig {
  double fall_penalty = -10.0;
  double omega_f = 3.0;  // rad/s
  std::array<AxisParams, 3> axes{};
  double theta_u = 0.2;  // rad
  double k_lat = 10.0;
  double alpha_lat = 2.0;
  double delta = 0.01;

  // Pins the lateral loss to zero at l_x = 0.
  double beta_lat() const;
};

void validate(const AxisParams& p);
void validate(const RewardConfig& cfg);

enum class TaskKind { ramp_run, stair_run, spiral_climb };
std::string_view to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view name);

// Maps a stride of simulator kinematics to the three sensed axes.
// ramp_run / stair_run: s_y = forward speed, s_z = vertical speed.
// spiral_climb:         s_x = yaw rate (left turn positive), s_z = vertical speed.
// Speeds are divided by the reference scales so a target of 1 means
// "reference speed".
struct TaskSpec {
  TaskKind kind = TaskKind::ramp_run;
  std::array<bool, 3> required{false, true, true};
  std::array<double, 3> target{0.0, 1.0, 0.0};
  double forward_ref_m_s = 0.05;
  double vertical_ref_m_s = 0.01;
  double yaw_ref_rad_s = 0.05 / 0.6;
};

void validate(const TaskSpec& task);

// Task defaults for a terrain: the vertical target follows the terrain's
// rise over run at the reference forward speed (zero for flat and for the
// up-then-down ramp).
TaskSpec default_task(const sim::Terrain& terrain);

// k = 1, alpha = 10, gamma = 0.5, beta = -target / 2 on each axis, required
// flags copied from the task.
RewardConfig default_reward_config(const TaskSpec& task);

struct StrideMeasurement {
  double s_x = 0.0;
  double s_y = 0.0;
  double s_z = 0.0;
  double omega_d = 0.0;
  double heading_change_rad = 0.0;
  double lateral_disp_m = 0.0;
};

StrideMeasurement measure(const sim::StrideKinematics& kin, const TaskSpec& task, int fall_axis = 0);

double sigmoid(double x);
// k * (sigmoid(alpha * (s + beta)) - gamma) if required, else 0.
double sub_reward(double s, const AxisParams& p);
// d sub_reward / ds
double sub_reward_derivative(double s, const AxisParams& p);
// -1 if theta_d > theta_u else 0. Throws on theta_d < 0.
double loss_heading(double theta_d, double theta_u);
double loss_lateral(double l_x, const RewardConfig& cfg);

struct RewardBreakdown {
  std::array<double, 3> sub{};
  double heading = 0.0;
  double lateral = 0.0;
  double total = 0.0;
  bool terminal = false;
};

RewardBreakdown evaluate(const StrideMeasurement& m, const TaskSpec& task, const RewardConfig& cfg);

struct RewardResult {
  double reward = 0.0;
  bool terminal = false;
};
RewardResult total_reward(const StrideMeasurement& m, const TaskSpec& task, const RewardConfig& cfg);

}  // namespace strider::reward
