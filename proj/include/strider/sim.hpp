#pragma once
// Kinematics-first quadruped simulator.
//
// The body is driven by the sole trajectories rather than by forces: stance
// feet push the body along (their backward sweep becomes forward motion, a
// left/right mismatch becomes yaw), the body height and tilt track a
// least-squares plane through the hip heights the stance feet imply, lagged
// by a first-order filter, and swing feet that strike rising terrain early in
// swing trigger a damped pitch/roll/forward jolt. IMU samples are finite
// differences of the resulting pose plus noise and a stride-locked wobble.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "strider/gait.hpp"
#include "strider/geometry.hpp"
#include "strider/terrain.hpp"

namespace strider::sim {

struct NoiseConfig {
  double gyro_sigma = 0.05;  // rad/s
  double acc_sigma = 0.2;    // m/s^2
  // Stride-locked wobble amplitudes at neutral stride length.
  double gyro_wobble = 0.3;
  double acc_wobble = 1.0;
};

struct SimConfig {
  double sample_rate_hz = 100.0;
  NoiseConfig noise;

  double fall_threshold_rad_s = 3.0;
  int fall_axis = 0;  // body x
  double success_distance_m = 3.0;
  int stride_budget = 60;
  double corridor_half_width_m = 0.3;
  double start_zone_length_m = 0.5;
  double start_zone_width_m = 0.2;

  double body_length_m = 0.375;
  double body_width_m = 0.096;
  double body_height_m = 0.082;
  double hip_span_m = 0.30;   // front-to-rear hip distance
  double hip_track_m = 0.096; // left-to-right hip distance

  double pose_time_constant_s = 0.04;
  double yaw_gain = 0.3;
  double swing_support_weight = 0.1;
  double unsupported_sag_m = 0.022;
  double stumble_gain = 400.0;       // rad/s per metre of obstruction at neutral swing speed
  double stumble_jolt_gain = 5.0;    // m/s per metre of obstruction
  double stumble_tolerance_m = 0.002;
  double stumble_window = 0.75;      // fraction of swing where strikes count
  // Touchdown on an incline: pitch-rate kick per unit slope along the heading.
  double slope_contact_gain = 8.0;
  double jolt_frequency_hz = 3.0;
  double jolt_damping = 0.7;
  double contact_tolerance_m = 0.005;
  // Restart every limb at its configured phase lag at the start of a stride.
  bool resync_each_stride = true;
};

void validate(const SimConfig& cfg);

struct RobotBody {
  Vec3 position;  // body centre, world frame
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;  // 0 faces +y, positive turns left
  Vec3 linear_velocity;
  Vec3 angular_velocity;  // body frame
  std::array<Vec3, gait::kLimbs> hip_offsets{};  // body frame
};

struct ImuSample {
  Vec3 acc;   // specific force, body frame
  Vec3 gyro;  // body frame
  double t_s = 0.0;
};

enum class Outcome { running, success, fall, stride_budget_exceeded, off_course };
std::string_view to_string(Outcome o);

struct EpisodeStatus {
  Outcome outcome = Outcome::running;
  int strides_used = 0;
  double distance_m = 0.0;
  double elapsed_s = 0.0;
};

// Per-stride kinematic summary consumed by the reward.
struct StrideKinematics {
  Vec3 displacement;              // base displacement over the stride, world
  double forward_progress_m = 0;  // along the course
  double climb_m = 0;
  double yaw_change_rad = 0;
  double heading_change_rad = 0;  // |change of movement direction| vs previous stride
  double lateral_offset_m = 0;    // corridor offset (radial for spiral)
  std::array<double, 3> peak_gyro{};  // max |measured gyro| per body axis
  int max_contact_segment = 0;
  int stumbles = 0;
  double duration_s = 0;
};

struct StrideResult {
  std::vector<ImuSample> imu;
  EpisodeStatus status;
  StrideKinematics kinematics;
};

struct ResetResult {
  RobotBody start;             // placed pose before the warm-up stride
  RobotBody body;              // pose after the warm-up stride
  std::vector<ImuSample> imu;  // warm-up window under the neutral action
};

// Non-finite state: a simulator bug, not an episode outcome.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stationary-body IMU synthesis from a pose history (exposed for tests).
struct PoseSample {
  Vec3 position;
  double roll = 0, pitch = 0, yaw = 0;
};

// poses[0] and poses[1] are history; one sample per pose from index 2 on.
std::vector<ImuSample> synthesize_imu(const std::vector<PoseSample>& poses, double dt,
                                      double t0_s);

// Adds white Gaussian noise (sigma_g to gyro, sigma_a to acc) in place.
void add_imu_noise(std::vector<ImuSample>& samples, const NoiseConfig& noise, std::mt19937_64& rng);

class Simulator {
 public:
  Simulator(Terrain terrain, SimConfig cfg = {}, gait::GaitConfig gait_cfg = {});

  // Deterministic in seed: start pose, noise stream and warm-up window.
  ResetResult reset(std::uint64_t seed);

  // Advances one mean stride period of the action. Throws SimulationFault
  // on non-finite state and std::logic_error if the episode already ended.
  StrideResult step(const gait::Action& action);

  const RobotBody& body() const { return body_; }
  const EpisodeStatus& status() const { return status_; }
  const Terrain& terrain() const { return terrain_; }
  const SimConfig& config() const { return cfg_; }
  const gait::GaitConfig& gait_config() const { return gait_cfg_; }

  // Start pose sampled uniformly over the start zone.
  RobotBody sample_start(std::mt19937_64& rng) const;

  // Per-substep CSV rows (pose, IMU, stance mask, outcome code as the enum
  // value) while set; pass nullptr to stop.
  void set_trace(std::ostream* out);
  static std::string trace_header();

 private:
  struct LimbState {
    double phase = 0.0;
    bool stance = true;
    double ground_z = 0.0;  // anchored at touchdown
    double liftoff_z = 0.0;
    bool stumbled = false;
    int segment = 0;  // terrain segment under the anchored foot
  };

  std::vector<ImuSample> run_window(const gait::Action& action, StrideKinematics& kin);
  void place(const RobotBody& start);
  Vec3 hip_world(int limb) const;
  Vec3 forward_dir() const;
  double course_distance() const;
  double lateral_offset() const;

  Terrain terrain_;
  SimConfig cfg_;
  gait::GaitConfig gait_cfg_;
  std::mt19937_64 rng_;

  RobotBody body_;
  std::array<LimbState, gait::kLimbs> limbs_{};
  // filtered base pose and jolt oscillators
  double base_z_ = 0.0, base_pitch_ = 0.0, base_roll_ = 0.0;
  double jolt_pitch_ = 0.0, jolt_pitch_rate_ = 0.0;
  double jolt_roll_ = 0.0, jolt_roll_rate_ = 0.0;
  double jolt_fwd_ = 0.0, jolt_fwd_rate_ = 0.0;
  std::array<PoseSample, 2> history_{};
  double time_s_ = 0.0;
  double start_y_ = 0.0;
  double start_x_ = 0.0;
  double start_radius_ = 0.0;
  double start_angle_ = 0.0;
  double unwrapped_angle_ = 0.0;
  double prev_heading_ = 0.0;
  int stride_index_ = 0;
  EpisodeStatus status_;
  std::ostream* trace_ = nullptr;
};

}  // namespace strider::sim
