#include "strider/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "strider/csv.hpp"

namespace strider::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGravity = 9.81;

// Stride-locked wobble phases per axis.
constexpr std::array<double, 3> kGyroWobbleA{0.0, 1.1, 2.3};
constexpr std::array<double, 3> kGyroWobbleB{0.7, -0.4, 1.9};
constexpr std::array<double, 3> kAccWobbleA{0.5, -1.3, 2.0};
constexpr std::array<double, 3> kAccWobbleB{1.2, 0.3, -2.2};

double& axis(Vec3& v, int i) { return i == 0 ? v.x : (i == 1 ? v.y : v.z); }

double wrap_pi(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  return a - kPi;
}

ImuSample imu_from(const PoseSample& p0, const PoseSample& p1, const PoseSample& p2, double dt) {
  const Mat3 r1 = body_to_world(p1.roll, p1.pitch, p1.yaw);
  const Mat3 r2 = body_to_world(p2.roll, p2.pitch, p2.yaw);
  ImuSample s;
  s.gyro = rotation_log(r1.transposed() * r2) * (1.0 / dt);
  const Vec3 acc_world = (p2.position - p1.position * 2.0 + p0.position) * (1.0 / (dt * dt));
  s.acc = r2.transposed() * (acc_world + Vec3{0.0, 0.0, kGravity});
  return s;
}

// Solves the 3x3 system a x = b by Cramer's rule; false when singular.
bool solve3(const std::array<std::array<double, 3>, 3>& a, const std::array<double, 3>& b,
            std::array<double, 3>& x) {
  auto det = [](const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double d = det(a);
  if (std::abs(d) < 1e-18) return false;
  for (int c = 0; c < 3; ++c) {
    auto m = a;
    for (int r = 0; r < 3; ++r) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = b[static_cast<std::size_t>(r)];
    x[static_cast<std::size_t>(c)] = det(m) / d;
  }
  return true;
}

// Length of [a, b] intersected with the stance intervals [k, k + duty).
struct StanceSpan {
  double from = 0.0, to = 0.0;  // unwrapped phases
};

int stance_spans(double a, double b, double duty, std::array<StanceSpan, 2>& out) {
  int n = 0;
  const double k0 = std::floor(a);
  for (double k = k0; k <= std::floor(b) && n < 2; k += 1.0) {
    const double lo = std::max(a, k);
    const double hi = std::min(b, k + duty);
    if (hi > lo) out[static_cast<std::size_t>(n++)] = {lo, hi};
  }
  return n;
}

}  // namespace

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::running:
      return "running";
    case Outcome::success:
      return "success";
    case Outcome::fall:
      return "fall";
    case Outcome::stride_budget_exceeded:
      return "stride_budget_exceeded";
    case Outcome::off_course:
      return "off_course";
  }
  return "running";
}

void validate(const SimConfig& c) {
  auto req = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("sim: ") + what);
  };
  req(c.sample_rate_hz > 0.0 && std::isfinite(c.sample_rate_hz), "sample_rate_hz must be positive");
  req(c.noise.gyro_sigma >= 0.0 && c.noise.acc_sigma >= 0.0, "noise sigmas must be >= 0");
  req(c.noise.gyro_wobble >= 0.0 && c.noise.acc_wobble >= 0.0, "wobble amplitudes must be >= 0");
  req(c.fall_threshold_rad_s > 0.0, "fall_threshold_rad_s must be positive");
  req(c.fall_axis >= 0 && c.fall_axis <= 2, "fall_axis must be 0, 1 or 2");
  req(c.success_distance_m > 0.0, "success_distance_m must be positive");
  req(c.stride_budget >= 1, "stride_budget must be >= 1");
  req(c.corridor_half_width_m > 0.0, "corridor_half_width_m must be positive");
  req(c.start_zone_length_m > 0.0 && c.start_zone_width_m > 0.0, "start zone must be non-empty");
  req(c.hip_span_m > 0.0 && c.hip_track_m > 0.0, "hip span and track must be positive");
  req(c.pose_time_constant_s >= 0.0, "pose_time_constant_s must be >= 0");
  req(c.swing_support_weight > 0.0, "swing_support_weight must be positive");
  req(c.unsupported_sag_m >= 0.0, "unsupported_sag_m must be >= 0");
  req(c.stumble_window > 0.0 && c.stumble_window <= 1.0, "stumble_window must be in (0, 1]");
  req(c.jolt_frequency_hz > 0.0 && c.jolt_damping > 0.0, "jolt oscillator must be damped");
  req(c.slope_contact_gain >= 0.0, "slope_contact_gain must be >= 0");
  req(c.contact_tolerance_m >= 0.0 && c.stumble_tolerance_m >= 0.0, "tolerances must be >= 0");
}

std::vector<ImuSample> synthesize_imu(const std::vector<PoseSample>& poses, double dt, double t0_s) {
  if (poses.size() < 3) throw std::invalid_argument("sim: synthesize_imu needs at least 3 poses");
  if (!(dt > 0.0)) throw std::invalid_argument("sim: synthesize_imu needs dt > 0");
  std::vector<ImuSample> out;
  out.reserve(poses.size() - 2);
  for (std::size_t k = 2; k < poses.size(); ++k) {
    ImuSample s = imu_from(poses[k - 2], poses[k - 1], poses[k], dt);
    s.t_s = t0_s + static_cast<double>(k - 2) * dt;
    out.push_back(s);
  }
  return out;
}

void add_imu_noise(std::vector<ImuSample>& samples, const NoiseConfig& noise, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  for (auto& s : samples) {
    for (int i = 0; i < 3; ++i) axis(s.gyro, i) += noise.gyro_sigma * n01(rng);
    for (int i = 0; i < 3; ++i) axis(s.acc, i) += noise.acc_sigma * n01(rng);
  }
}

Simulator::Simulator(Terrain terrain, SimConfig cfg, gait::GaitConfig gait_cfg)
    : terrain_(std::move(terrain)), cfg_(cfg), gait_cfg_(gait_cfg) {
  validate(cfg_);
  gait::validate(gait_cfg_);
  const double w = 0.5 * cfg_.hip_track_m;
  const double l = 0.5 * cfg_.hip_span_m;
  body_.hip_offsets = {Vec3{-w, l, 0.0}, Vec3{w, l, 0.0}, Vec3{-w, -l, 0.0}, Vec3{w, -l, 0.0}};
}

void Simulator::set_trace(std::ostream* out) { trace_ = out; }

std::string Simulator::trace_header() {
  return "t_s,stride,x_m,y_m,z_m,roll_rad,pitch_rad,yaw_rad,acc_x,acc_y,acc_z,gyro_x,gyro_y,gyro_z,"
         "stance_mask,outcome_code";
}

Vec3 Simulator::forward_dir() const { return {-std::sin(body_.yaw), std::cos(body_.yaw), 0.0}; }

Vec3 Simulator::hip_world(int limb) const {
  const Mat3 r = body_to_world(base_roll_, base_pitch_, body_.yaw);
  const Vec3 c{body_.position.x, body_.position.y, base_z_};
  return c + r * body_.hip_offsets[static_cast<std::size_t>(limb)];
}

RobotBody Simulator::sample_start(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double across = (u01(rng) - 0.5) * cfg_.start_zone_width_m;
  const double along = u01(rng) * cfg_.start_zone_length_m;
  RobotBody b = body_;
  b.roll = b.pitch = 0.0;
  b.linear_velocity = {};
  b.angular_velocity = {};
  if (terrain_.kind() == TerrainKind::spiral_stairs) {
    const double r = terrain_.params().spiral_path_radius_m + across;
    const double y = along - cfg_.start_zone_length_m;  // zone ends on the x axis
    b.position = {r, y, 0.0};
    b.yaw = std::atan2(y, r);
  } else {
    b.position = {across, along, 0.0};
    b.yaw = 0.0;
  }
  b.position.z = terrain_.height(b.position.x, b.position.y) + gait_cfg_.stance_radius_m;
  return b;
}

void Simulator::place(const RobotBody& start) {
  body_ = start;
  base_z_ = start.position.z;
  base_pitch_ = base_roll_ = 0.0;
  jolt_pitch_ = jolt_pitch_rate_ = jolt_roll_ = jolt_roll_rate_ = jolt_fwd_ = jolt_fwd_rate_ = 0.0;
  const auto neutral = gait::neutral_action(gait_cfg_.bounds);
  const auto traj = gait::build_trajectories(neutral, gait_cfg_);
  for (std::size_t i = 0; i < gait::kLimbs; ++i) {
    auto& L = limbs_[i];
    L.phase = gait::wrap_unit(gait_cfg_.phase_lag[i]);
    L.stance = gait::in_stance(L.phase, gait_cfg_);
    const auto p = gait::sample_trajectory(traj[i], L.phase);
    const Vec3 foot = hip_world(static_cast<int>(i)) + forward_dir() * p.x;
    L.ground_z = terrain_.height(foot.x, foot.y);
    L.liftoff_z = L.ground_z;
    L.stumbled = false;
    L.segment = terrain_.segment(foot.x, foot.y);
  }
  const PoseSample ps{body_.position, body_.roll, body_.pitch, body_.yaw};
  history_ = {ps, ps};
  time_s_ = 0.0;
  unwrapped_angle_ = Terrain::course_angle(body_.position.x, body_.position.y);
  prev_heading_ = body_.yaw;
  stride_index_ = 0;
}

ResetResult Simulator::reset(std::uint64_t seed) {
  rng_.seed(seed);
  ResetResult out;
  out.start = sample_start(rng_);
  place(out.start);
  status_ = EpisodeStatus{};
  StrideKinematics warm;
  out.imu = run_window(gait::neutral_action(gait_cfg_.bounds), warm);
  start_x_ = body_.position.x;
  start_y_ = body_.position.y;
  start_radius_ = std::hypot(body_.position.x, body_.position.y);
  start_angle_ = unwrapped_angle_;
  if (warm.displacement.x != 0.0 || warm.displacement.y != 0.0)
    prev_heading_ = std::atan2(-warm.displacement.x, warm.displacement.y);
  status_ = EpisodeStatus{};
  status_.elapsed_s = 0.0;
  stride_index_ = 0;
  out.body = body_;
  return out;
}

double Simulator::course_distance() const {
  if (terrain_.kind() == TerrainKind::spiral_stairs)
    return terrain_.params().spiral_path_radius_m * (unwrapped_angle_ - start_angle_);
  return body_.position.y - start_y_;
}

double Simulator::lateral_offset() const {
  if (terrain_.kind() == TerrainKind::spiral_stairs)
    return std::hypot(body_.position.x, body_.position.y) - start_radius_;
  return body_.position.x - start_x_;
}

StrideResult Simulator::step(const gait::Action& action) {
  if (status_.outcome != Outcome::running) throw std::logic_error("sim: step on a finished episode");
  gait::validate(action, gait_cfg_.bounds);
  StrideResult res;
  ++stride_index_;
  res.imu = run_window(action, res.kinematics);

  ++status_.strides_used;
  status_.elapsed_s += res.kinematics.duration_s;
  status_.distance_m = course_distance();

  double off;
  if (terrain_.kind() == TerrainKind::spiral_stairs)
    off = std::abs(std::hypot(body_.position.x, body_.position.y) - terrain_.params().spiral_path_radius_m);
  else
    off = std::abs(body_.position.x);

  const double omega_d = res.kinematics.peak_gyro[static_cast<std::size_t>(cfg_.fall_axis)];
  if (omega_d > cfg_.fall_threshold_rad_s)
    status_.outcome = Outcome::fall;
  else if (status_.distance_m >= cfg_.success_distance_m)
    status_.outcome = Outcome::success;
  else if (off > cfg_.corridor_half_width_m)
    status_.outcome = Outcome::off_course;
  else if (status_.strides_used >= cfg_.stride_budget)
    status_.outcome = Outcome::stride_budget_exceeded;
  res.status = status_;
  return res;
}

std::vector<ImuSample> Simulator::run_window(const gait::Action& action, StrideKinematics& kin) {
  const double dt = 1.0 / cfg_.sample_rate_hz;
  const double period = action.mean_period_s();
  const int n = std::max(2, static_cast<int>(std::lround(period * cfg_.sample_rate_hz)));
  const auto traj = gait::build_trajectories(action, gait_cfg_);
  const double duty = gait_cfg_.duty_factor;
  const double alpha =
      cfg_.pose_time_constant_s > 0.0 ? 1.0 - std::exp(-dt / cfg_.pose_time_constant_s) : 1.0;
  const double wn = 2.0 * kPi * cfg_.jolt_frequency_hz;
  double mean_rho = 0.0;
  for (double r : action.rho) mean_rho += r / static_cast<double>(gait::kLimbs);
  const double ref_rho = 0.5 * (gait_cfg_.bounds.rho_min + gait_cfg_.bounds.rho_max);
  const double intensity = mean_rho / ref_rho;
  std::normal_distribution<double> n01(0.0, 1.0);

  kin = StrideKinematics{};
  kin.duration_s = n * dt;
  const Vec3 p_begin = body_.position;
  const double yaw_begin = body_.yaw;
  const double z_begin = body_.position.z;
  const double angle_begin = unwrapped_angle_;

  std::vector<ImuSample> out;
  out.reserve(static_cast<std::size_t>(n));

  // The scheduler clock restarts every stride: limbs whose frequency differs
  // from the stride mean drift apart within a stride, not across strides.
  if (cfg_.resync_each_stride)
    for (std::size_t i = 0; i < gait::kLimbs; ++i) limbs_[i].phase = gait::wrap_unit(gait_cfg_.phase_lag[i]);

  for (int step = 0; step < n; ++step) {
    // Propulsion from the stance sweep of each limb over this substep.
    std::array<double, gait::kLimbs> push{}, frac{};
    std::array<double, gait::kLimbs> new_phase{};
    for (std::size_t i = 0; i < gait::kLimbs; ++i) {
      const double a = limbs_[i].phase;
      const double b = a + action.stride_freq_hz[i] * dt;
      std::array<StanceSpan, 2> spans{};
      const int ns = stance_spans(a, b, duty, spans);
      for (int s = 0; s < ns; ++s) {
        const auto& sp = spans[static_cast<std::size_t>(s)];
        const double from = sp.from - std::floor(sp.from);
        const double to = from + (sp.to - sp.from);
        const auto pa = gait::sample_trajectory(traj[i], from);
        const auto pb = gait::sample_trajectory(traj[i], std::min(to, duty));
        push[i] += pa.x - pb.x;
        frac[i] += (sp.to - sp.from) / (b - a);
      }
      new_phase[i] = gait::wrap_unit(b);
    }
    double push_sum = 0, frac_sum = 0, lp = 0, lf = 0, rp = 0, rf = 0;
    for (std::size_t i = 0; i < gait::kLimbs; ++i) {
      push_sum += push[i];
      frac_sum += frac[i];
      if (gait::is_left(static_cast<int>(i))) {
        lp += push[i];
        lf += frac[i];
      } else {
        rp += push[i];
        rf += frac[i];
      }
    }
    const double d_fwd = frac_sum > 0.0 ? push_sum / frac_sum : 0.0;
    double d_left = lf > 0.0 ? lp / lf : d_fwd;
    double d_right = rf > 0.0 ? rp / rf : d_fwd;
    if (lf <= 0.0) d_left = d_right;
    if (rf <= 0.0) d_right = d_left;
    const double d_yaw = cfg_.yaw_gain * (d_right - d_left) / cfg_.hip_track_m;

    const Vec3 fwd = forward_dir();
    body_.position.x += fwd.x * d_fwd;
    body_.position.y += fwd.y * d_fwd;
    body_.yaw += d_yaw;

    // Contact bookkeeping and swing strikes at the new phases.
    const Vec3 fwd_new = forward_dir();
    std::array<double, gait::kLimbs> hip_target{}, weight{};
    std::array<Vec3, gait::kLimbs> hips{};
    for (std::size_t i = 0; i < gait::kLimbs; ++i) hips[i] = hip_world(static_cast<int>(i));
    for (std::size_t i = 0; i < gait::kLimbs; ++i) {
      auto& L = limbs_[i];
      const bool stance = new_phase[i] < duty;
      const auto p = gait::sample_trajectory(traj[i], new_phase[i]);
      const Vec3 foot{hips[i].x + fwd_new.x * p.x, hips[i].y + fwd_new.y * p.x, hips[i].z + p.z};
      const double ground = terrain_.height(foot.x, foot.y);
      if (stance && !L.stance) {
        L.ground_z = ground;
        L.segment = terrain_.segment(foot.x, foot.y);
        const auto g = terrain_.gradient(foot.x, foot.y);
        const double slope = g[0] * fwd_new.x + g[1] * fwd_new.y;
        if (slope != 0.0) {
          const double front = gait::is_front(static_cast<int>(i)) ? 1.0 : 0.5;
          const double s = slope / std::sqrt(1.0 + slope * slope);
          jolt_pitch_rate_ += cfg_.slope_contact_gain * s * front;
          jolt_fwd_rate_ -= cfg_.stumble_jolt_gain * 0.01 * s;
        }
      } else if (!stance && L.stance) {
        L.liftoff_z = L.ground_z;
        L.stumbled = false;
      }
      L.stance = stance;
      L.phase = new_phase[i];
      if (stance) {
        hip_target[i] = L.ground_z - p.z;
        weight[i] = 1.0;
        kin.max_contact_segment = std::max(kin.max_contact_segment, L.segment);
      } else {
        hip_target[i] = terrain_.height(hips[i].x, hips[i].y) + gait_cfg_.stance_radius_m;
        weight[i] = cfg_.swing_support_weight;
        const double u = (new_phase[i] - duty) / (1.0 - duty);
        if (!L.stumbled && u < cfg_.stumble_window) {
          const double depth = std::min(ground - foot.z, ground - L.liftoff_z);
          if (depth > cfg_.stumble_tolerance_m) {
            L.stumbled = true;
            ++kin.stumbles;
            const double front = gait::is_front(static_cast<int>(i)) ? 1.0 : 0.5;
            const double side = gait::is_left(static_cast<int>(i)) ? 1.0 : -1.0;
            // strike severity scales with swing speed relative to the neutral gait
            const double speed = action.rho[i] * action.stride_freq_hz[i] / ref_rho;
            const double kick = cfg_.stumble_gain * depth * speed;
            jolt_pitch_rate_ -= kick * front;
            jolt_roll_rate_ += 0.5 * kick * side;
            jolt_fwd_rate_ -= cfg_.stumble_jolt_gain * depth * speed;
          }
        }
      }
    }

    // A front or rear pair with no foot down lets that end of the body sag.
    for (std::size_t pair : {std::size_t{0}, std::size_t{2}}) {
      if (!limbs_[pair].stance && !limbs_[pair + 1].stance) {
        for (std::size_t i = pair; i < pair + 2; ++i) {
          hip_target[i] -= cfg_.unsupported_sag_m;
          weight[i] = 1.0;
        }
      }
    }

    // Weighted least-squares plane through the hip targets: z0 + oy*sp + ox*sr.
    std::array<std::array<double, 3>, 3> A{};
    std::array<double, 3> rhs{}, sol{};
    for (std::size_t i = 0; i < gait::kLimbs; ++i) {
      const auto& o = body_.hip_offsets[i];
      const std::array<double, 3> row{1.0, o.y, o.x};
      for (int r = 0; r < 3; ++r) {
        const auto ru = static_cast<std::size_t>(r);
        rhs[ru] += weight[i] * row[ru] * hip_target[i];
        for (int c = 0; c < 3; ++c) A[ru][static_cast<std::size_t>(c)] += weight[i] * row[ru] * row[static_cast<std::size_t>(c)];
      }
    }
    if (!solve3(A, rhs, sol)) throw SimulationFault("sim: singular support fit");
    base_z_ += alpha * (sol[0] - base_z_);
    base_pitch_ += alpha * (std::atan(sol[1]) - base_pitch_);
    base_roll_ += alpha * (-std::atan(sol[2]) - base_roll_);
    const double floor_z = terrain_.height(body_.position.x, body_.position.y) - cfg_.contact_tolerance_m;
    if (base_z_ < floor_z) base_z_ = floor_z;

    // Damped stumble oscillators (semi-implicit Euler).
    auto osc = [&](double& x, double& v) {
      v += (-2.0 * cfg_.jolt_damping * wn * v - wn * wn * x) * dt;
      x += v * dt;
    };
    osc(jolt_pitch_, jolt_pitch_rate_);
    osc(jolt_roll_, jolt_roll_rate_);
    osc(jolt_fwd_, jolt_fwd_rate_);

    const PoseSample prev = history_[1];
    PoseSample now;
    now.position = {body_.position.x + fwd_new.x * jolt_fwd_, body_.position.y + fwd_new.y * jolt_fwd_, base_z_};
    now.roll = base_roll_ + jolt_roll_;
    now.pitch = base_pitch_ + jolt_pitch_;
    now.yaw = body_.yaw;

    body_.position.z = base_z_;
    body_.roll = now.roll;
    body_.pitch = now.pitch;

    ImuSample s = imu_from(history_[0], history_[1], now, dt);
    body_.angular_velocity = s.gyro;
    body_.linear_velocity = (now.position - prev.position) * (1.0 / dt);
    history_ = {prev, now};
    time_s_ += dt;
    s.t_s = time_s_;

    const double ph = 2.0 * kPi * limbs_[0].phase;
    for (int j = 0; j < 3; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      axis(s.gyro, j) += cfg_.noise.gyro_wobble * intensity *
                             (std::sin(ph + kGyroWobbleA[ju]) + 0.5 * std::sin(2.0 * ph + kGyroWobbleB[ju])) +
                         cfg_.noise.gyro_sigma * n01(rng_);
    }
    for (int j = 0; j < 3; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      axis(s.acc, j) += cfg_.noise.acc_wobble * intensity *
                            (std::sin(ph + kAccWobbleA[ju]) + 0.5 * std::sin(2.0 * ph + kAccWobbleB[ju])) +
                        cfg_.noise.acc_sigma * n01(rng_);
    }
    if (!s.acc.finite() || !s.gyro.finite() || !now.position.finite() || !std::isfinite(now.yaw) ||
        !std::isfinite(now.roll) || !std::isfinite(now.pitch)) {
      std::ostringstream os;
      os << "sim: non-finite state at t=" << time_s_;
      throw SimulationFault(os.str());
    }
    for (int j = 0; j < 3; ++j) {
      auto& pk = kin.peak_gyro[static_cast<std::size_t>(j)];
      pk = std::max(pk, std::abs(axis(s.gyro, j)));
    }

    const double ang = Terrain::course_angle(body_.position.x, body_.position.y);
    unwrapped_angle_ += wrap_pi(ang - unwrapped_angle_);

    if (trace_) {
      int mask = 0;
      for (std::size_t i = 0; i < gait::kLimbs; ++i)
        if (limbs_[i].stance) mask |= 1 << i;
      auto& o = *trace_;
      o << csv::num(s.t_s) << ',' << stride_index_ << ',' << csv::num(now.position.x) << ','
        << csv::num(now.position.y) << ',' << csv::num(now.position.z) << ',' << csv::num(now.roll)
        << ',' << csv::num(now.pitch) << ',' << csv::num(now.yaw) << ',' << csv::num(s.acc.x) << ','
        << csv::num(s.acc.y) << ',' << csv::num(s.acc.z) << ',' << csv::num(s.gyro.x) << ','
        << csv::num(s.gyro.y) << ',' << csv::num(s.gyro.z) << ',' << mask << ','
        << static_cast<int>(status_.outcome) << '\n';
    }
    out.push_back(s);
  }

  kin.displacement = body_.position - p_begin;
  kin.displacement.z = body_.position.z - z_begin;
  kin.climb_m = kin.displacement.z;
  kin.yaw_change_rad = body_.yaw - yaw_begin;
  if (terrain_.kind() == TerrainKind::spiral_stairs) {
    kin.forward_progress_m = terrain_.params().spiral_path_radius_m * (unwrapped_angle_ - angle_begin);
  } else {
    kin.forward_progress_m = kin.displacement.y;
  }
  const double heading = std::atan2(-kin.displacement.x, kin.displacement.y);
  const bool moved = std::hypot(kin.displacement.x, kin.displacement.y) > 1e-9;
  kin.heading_change_rad = moved ? std::abs(wrap_pi(heading - prev_heading_)) : 0.0;
  if (moved) prev_heading_ = heading;
  kin.lateral_offset_m = lateral_offset();
  return out;
}

}  // namespace strider::sim
