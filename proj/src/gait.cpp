#include "strider/gait.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "strider/csv.hpp"

namespace strider::gait {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_box(double v, double lo, double hi, const char* name, std::size_t limb) {
  if (!(v >= lo && v <= hi)) {
    std::ostringstream os;
    os << "gait: " << name << "[" << limb << "] = " << v << " outside [" << lo << ", " << hi << "]";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

double LegGeometry::min_reach() const { return std::abs(upper_m - lower_m) + reach_margin_m; }
double LegGeometry::max_reach() const { return upper_m + lower_m - reach_margin_m; }

void validate(const GaitConfig& cfg) {
  const auto& b = cfg.bounds;
  if (!(b.rho_min > 0.0 && b.rho_min < b.rho_max)) throw std::invalid_argument("gait: bad rho box");
  if (!(b.theta_min < b.theta_max)) throw std::invalid_argument("gait: bad theta box");
  if (!(b.freq_min_hz > 0.0 && b.freq_min_hz < b.freq_max_hz))
    throw std::invalid_argument("gait: bad stride frequency box");
  if (!(cfg.leg.upper_m > 0.0 && cfg.leg.lower_m > 0.0 && cfg.leg.reach_margin_m >= 0.0))
    throw std::invalid_argument("gait: bad leg geometry");
  if (!(cfg.duty_factor > 0.0 && cfg.duty_factor < 1.0))
    throw std::invalid_argument("gait: duty factor must be in (0, 1)");
  if (cfg.waypoints < 8) throw std::invalid_argument("gait: need at least 8 waypoints");
  if (!(cfg.stance_radius_m > 0.0 && cfg.stance_length_gain > 0.0 && cfg.swing_clearance_m >= 0.0))
    throw std::invalid_argument("gait: bad trajectory shape");
}

std::array<double, kActionDim> Action::encode() const {
  std::array<double, kActionDim> v{};
  for (std::size_t i = 0; i < kLimbs; ++i) {
    v[i] = rho[i];
    v[kLimbs + i] = theta[i];
    v[2 * kLimbs + i] = stride_freq_hz[i];
  }
  return v;
}

Action Action::decode(std::span<const double> values) {
  if (values.size() != kActionDim) {
    throw std::invalid_argument("gait: action needs " + std::to_string(kActionDim) + " values");
  }
  Action a;
  for (std::size_t i = 0; i < kLimbs; ++i) {
    a.rho[i] = values[i];
    a.theta[i] = values[kLimbs + i];
    a.stride_freq_hz[i] = values[2 * kLimbs + i];
  }
  return a;
}

double Action::mean_period_s() const {
  double s = 0.0;
  for (double f : stride_freq_hz) s += 1.0 / f;
  return s / static_cast<double>(kLimbs);
}

Action neutral_action(const ActionBounds& b) {
  Action a;
  a.rho.fill(0.5 * (b.rho_min + b.rho_max));
  a.theta.fill(0.5 * (b.theta_min + b.theta_max));
  a.stride_freq_hz.fill(std::clamp(1.0, b.freq_min_hz, b.freq_max_hz));
  return a;
}

void validate(const Action& a, const ActionBounds& b) {
  for (std::size_t i = 0; i < kLimbs; ++i) {
    require_box(a.rho[i], b.rho_min, b.rho_max, "rho", i);
    require_box(a.theta[i], b.theta_min, b.theta_max, "theta", i);
    require_box(a.stride_freq_hz[i], b.freq_min_hz, b.freq_max_hz, "stride_freq", i);
  }
}

Action clamp_action(std::span<const double> raw, const ActionBounds& b) {
  if (raw.size() != kActionDim) {
    throw std::invalid_argument("gait: raw action needs " + std::to_string(kActionDim) + " values");
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) {
      throw std::invalid_argument("gait: non-finite raw action component " + std::to_string(i));
    }
  }
  Action a = Action::decode(raw);
  for (std::size_t i = 0; i < kLimbs; ++i) {
    a.rho[i] = std::clamp(a.rho[i], b.rho_min, b.rho_max);
    a.theta[i] = std::clamp(a.theta[i], b.theta_min, b.theta_max);
    a.stride_freq_hz[i] = std::clamp(a.stride_freq_hz[i], b.freq_min_hz, b.freq_max_hz);
  }
  return a;
}

SoleTrajectory action_to_trajectory(const Action& a, int limb_id, const GaitConfig& cfg) {
  if (limb_id < 0 || limb_id >= static_cast<int>(kLimbs)) {
    throw std::invalid_argument("gait: limb id " + std::to_string(limb_id) + " out of range");
  }
  const auto li = static_cast<std::size_t>(limb_id);
  const double theta = a.theta[li];
  const double half = 0.5 * cfg.stance_length_gain * a.rho[li];
  const Point2 centre{cfg.stance_radius_m * std::sin(theta), -cfg.stance_radius_m * std::cos(theta)};
  const Point2 tangent{std::cos(theta), std::sin(theta)};
  const Point2 toward_hip{-std::sin(theta), std::cos(theta)};

  const std::size_t segments = cfg.waypoints - 1;
  const std::size_t stance_segments = segments / 2;
  const std::size_t swing_segments = segments - stance_segments;

  SoleTrajectory traj;
  traj.limb_id = limb_id;
  traj.period_s = 1.0 / a.stride_freq_hz[li];
  traj.waypoints.reserve(cfg.waypoints);
  traj.phase_offsets.reserve(cfg.waypoints);

  for (std::size_t k = 0; k <= stance_segments; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(stance_segments);
    const double along = half * (1.0 - 2.0 * u);  // front to back
    traj.waypoints.push_back({centre.x + along * tangent.x, centre.z + along * tangent.z});
    traj.phase_offsets.push_back(cfg.duty_factor * u);
  }
  for (std::size_t k = 1; k <= swing_segments; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(swing_segments);
    const double ang = kPi * u;
    const double along = -half * std::cos(ang);
    const double lift = cfg.swing_clearance_m * std::sin(ang);
    traj.waypoints.push_back({centre.x + along * tangent.x + lift * toward_hip.x,
                              centre.z + along * tangent.z + lift * toward_hip.z});
    traj.phase_offsets.push_back(cfg.duty_factor + (1.0 - cfg.duty_factor) * u);
  }
  traj.waypoints.back() = traj.waypoints.front();
  traj.phase_offsets.back() = 1.0;

  const double lo = cfg.leg.min_reach();
  const double hi = cfg.leg.max_reach();
  for (std::size_t k = 0; k < traj.waypoints.size(); ++k) {
    const auto& p = traj.waypoints[k];
    const double r = std::hypot(p.x, p.z);
    if (!(r >= lo && r <= hi)) {
      std::ostringstream os;
      os << "gait: limb " << limb_id << " waypoint " << k << " (" << p.x << ", " << p.z
         << ") at reach " << r << " outside [" << lo << ", " << hi << "]";
      throw UnreachableError(os.str());
    }
  }
  return traj;
}

double wrap_unit(double phase) {
  double p = phase - std::floor(phase);
  return p >= 1.0 ? 0.0 : p;
}

Point2 sample_trajectory(const SoleTrajectory& traj, double phase) {
  const double p = wrap_unit(phase);
  const auto& ph = traj.phase_offsets;
  auto it = std::upper_bound(ph.begin(), ph.end(), p);
  std::size_t hi = static_cast<std::size_t>(it - ph.begin());
  if (hi >= ph.size()) hi = ph.size() - 1;
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double span = ph[hi] - ph[lo];
  const double w = span > 0.0 ? (p - ph[lo]) / span : 0.0;
  const auto& a = traj.waypoints[lo];
  const auto& b = traj.waypoints[hi];
  return {a.x + w * (b.x - a.x), a.z + w * (b.z - a.z)};
}

bool in_stance(double phase, const GaitConfig& cfg) { return wrap_unit(phase) < cfg.duty_factor; }

JointAngles ik_decode(Point2 p, const LegGeometry& leg) {
  const double d = std::hypot(p.x, p.z);
  if (!std::isfinite(d) || d < leg.min_reach() || d > leg.max_reach()) {
    std::ostringstream os;
    os << "gait: point (" << p.x << ", " << p.z << ") at reach " << d << " outside ["
       << leg.min_reach() << ", " << leg.max_reach() << "]";
    throw UnreachableError(os.str());
  }
  const double l1 = leg.upper_m;
  const double l2 = leg.lower_m;
  const double c = std::clamp((d * d - l1 * l1 - l2 * l2) / (2.0 * l1 * l2), -1.0, 1.0);
  const double knee = std::acos(c);
  const double hip = std::atan2(p.z, p.x) - std::atan2(l2 * std::sin(knee), l1 + l2 * std::cos(knee));
  return {hip, knee};
}

Point2 forward_kinematics(const JointAngles& q, const LegGeometry& leg) {
  return {leg.upper_m * std::cos(q.hip_rad) + leg.lower_m * std::cos(q.hip_rad + q.knee_rad),
          leg.upper_m * std::sin(q.hip_rad) + leg.lower_m * std::sin(q.hip_rad + q.knee_rad)};
}

bool within_joint_limits(const JointAngles& q, const LegGeometry& leg) {
  return q.hip_rad >= leg.hip_min_rad && q.hip_rad <= leg.hip_max_rad &&
         q.knee_rad >= leg.knee_min_rad && q.knee_rad <= leg.knee_max_rad;
}

std::array<double, kLimbs> limb_phases(const Action& a, double t_s, const GaitConfig& cfg) {
  std::array<double, kLimbs> ph{};
  for (std::size_t i = 0; i < kLimbs; ++i) ph[i] = wrap_unit(t_s * a.stride_freq_hz[i] + cfg.phase_lag[i]);
  return ph;
}

std::array<SoleTrajectory, kLimbs> build_trajectories(const Action& a, const GaitConfig& cfg) {
  std::array<SoleTrajectory, kLimbs> out;
  for (std::size_t i = 0; i < kLimbs; ++i) out[i] = action_to_trajectory(a, static_cast<int>(i), cfg);
  return out;
}

std::array<Point2, kLimbs> schedule_targets(const std::array<SoleTrajectory, kLimbs>& trajectories,
                                            const std::array<double, kLimbs>& phases) {
  std::array<Point2, kLimbs> out{};
  for (std::size_t i = 0; i < kLimbs; ++i) out[i] = sample_trajectory(trajectories[i], phases[i]);
  return out;
}

std::array<Point2, kLimbs> gait_phase_scheduler(const Action& a, double t_s, const GaitConfig& cfg) {
  return schedule_targets(build_trajectories(a, cfg), limb_phases(a, t_s, cfg));
}

JointCommand decode_targets(const std::array<Point2, kLimbs>& targets, double t_s,
                            const LegGeometry& leg) {
  JointCommand cmd;
  cmd.timestamp_s = t_s;
  for (std::size_t i = 0; i < kLimbs; ++i) {
    cmd.joints[i] = ik_decode(targets[i], leg);
    if (!within_joint_limits(cmd.joints[i], leg)) {
      std::ostringstream os;
      os << "gait: limb " << i << " joint angles (" << cmd.joints[i].hip_rad << ", "
         << cmd.joints[i].knee_rad << ") outside limits";
      throw UnreachableError(os.str());
    }
  }
  return cmd;
}

void write_trajectory_csv(std::ostream& out, const SoleTrajectory& traj) {
  out << "phase,x_m,z_m\n";
  for (std::size_t k = 0; k < traj.waypoints.size(); ++k) {
    out << csv::num(traj.phase_offsets[k]) << ',' << csv::num(traj.waypoints[k].x) << ','
        << csv::num(traj.waypoints[k].z) << '\n';
  }
}

}  // namespace strider::gait
