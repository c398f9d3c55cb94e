#pragma once
// Action space and sole-trajectory generation for the four legs, plus the
// two-link inverse kinematics that turns sole targets into joint angles.
//
// Leg frame: sagittal plane of one leg, hip at the origin, x forward, z up.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace strider::gait {

inline constexpr std::size_t kLimbs = 4;
inline constexpr std::size_t kActionDim = 3 * kLimbs;

// Limb order used everywhere (actions, trajectories, hip anchors).
enum Limb : int { kFrontLeft = 0, kFrontRight = 1, kRearLeft = 2, kRearRight = 3 };

inline bool is_left(int limb) { return limb == kFrontLeft || limb == kRearLeft; }
inline bool is_front(int limb) { return limb == kFrontLeft || limb == kFrontRight; }

struct Point2 {
  double x = 0.0;
  double z = 0.0;
};

struct ActionBounds {
  double rho_min = 0.01;
  double rho_max = 0.06;
  double theta_min = -0.6;
  double theta_max = 0.6;
  double freq_min_hz = 0.5;
  double freq_max_hz = 2.0;
};

struct LegGeometry {
  double upper_m = 0.04;
  double lower_m = 0.04;
  // Points closer than this to either annulus boundary are rejected.
  double reach_margin_m = 1e-4;
  double hip_min_rad = -3.6;
  double hip_max_rad = 0.0;
  double knee_min_rad = 0.0;
  double knee_max_rad = 3.0;

  double min_reach() const;
  double max_reach() const;
};

struct GaitConfig {
  ActionBounds bounds;
  LegGeometry leg;
  // Distance from the hip to the midpoint of the stance line.
  double stance_radius_m = 0.065;
  // Stance-line length = gain * rho.
  double stance_length_gain = 1.0;
  double swing_clearance_m = 0.008;
  double duty_factor = 0.5;
  std::size_t waypoints = 32;
  // Trot: diagonal pairs (FL, RR) and (FR, RL) half a cycle apart.
  std::array<double, kLimbs> phase_lag{0.0, 0.5, 0.5, 0.0};
};

void validate(const GaitConfig& cfg);

/// Per-limb polar stride parameters and stride frequencies.
struct Action {
  std::array<double, kLimbs> rho{};
  std::array<double, kLimbs> theta{};
  std::array<double, kLimbs> stride_freq_hz{};

  /// [rho0..3, theta0..3, freq0..3]
  std::array<double, kActionDim> encode() const;
  static Action decode(std::span<const double> values);
  /// mean(1 / stride_freq), the perception window length.
  double mean_period_s() const;

  friend bool operator==(const Action&, const Action&) = default;
};

/// Box centres with every stride frequency at 1 Hz.
Action neutral_action(const ActionBounds& bounds);

/// Throws std::invalid_argument when a component lies outside its box.
void validate(const Action& a, const ActionBounds& bounds);

/// Componentwise clamp of 12 raw policy outputs into the action boxes.
Action clamp_action(std::span<const double> raw, const ActionBounds& bounds);

class UnreachableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct SoleTrajectory {
  int limb_id = 0;
  // Closed loop: waypoints.back() == waypoints.front().
  std::vector<Point2> waypoints;
  // Normalised phase of each waypoint, non-decreasing from 0 to 1.
  std::vector<double> phase_offsets;
  double period_s = 1.0;
};

/// Stance line through the polar point at (stance_radius, theta) about the
/// hip, perpendicular to that radius, length gain * rho, swept front to back;
/// then a half-ellipse swing of the configured clearance back to the front.
SoleTrajectory action_to_trajectory(const Action& a, int limb_id, const GaitConfig& cfg);

/// Piecewise-linear position on the loop at phase in [0, 1) (wrapped).
Point2 sample_trajectory(const SoleTrajectory& traj, double phase);

bool in_stance(double phase, const GaitConfig& cfg);

struct JointAngles {
  double hip_rad = 0.0;
  double knee_rad = 0.0;
};

/// Hip angle from the +x axis (straight down is -pi/2); knee >= 0 keeps the
/// knee behind the hip-foot line.
JointAngles ik_decode(Point2 p, const LegGeometry& leg);
Point2 forward_kinematics(const JointAngles& q, const LegGeometry& leg);
bool within_joint_limits(const JointAngles& q, const LegGeometry& leg);

struct JointCommand {
  std::array<JointAngles, kLimbs> joints{};
  double timestamp_s = 0.0;
};

double wrap_unit(double phase);

/// Limb phases (t * f_i + lag_i) mod 1.
std::array<double, kLimbs> limb_phases(const Action& a, double t_s, const GaitConfig& cfg);

/// Sole targets for all four limbs at time t.
std::array<Point2, kLimbs> gait_phase_scheduler(const Action& a, double t_s, const GaitConfig& cfg);

/// Same, reusing prebuilt trajectories and explicit phases.
std::array<Point2, kLimbs> schedule_targets(const std::array<SoleTrajectory, kLimbs>& trajectories,
                                            const std::array<double, kLimbs>& phases);

std::array<SoleTrajectory, kLimbs> build_trajectories(const Action& a, const GaitConfig& cfg);

JointCommand decode_targets(const std::array<Point2, kLimbs>& targets, double t_s,
                            const LegGeometry& leg);

/// phase,x_m,z_m rows for one limb.
void write_trajectory_csv(std::ostream& out, const SoleTrajectory& traj);

}  // namespace strider::gait
