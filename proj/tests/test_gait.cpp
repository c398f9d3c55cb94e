#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "strider/gait.hpp"
#include "strider/signal.hpp"

using namespace strider::gait;

namespace {

constexpr double kPi = 3.14159265358979323846;

Action random_action(std::mt19937_64& rng, const ActionBounds& b) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Action a;
  for (std::size_t i = 0; i < kLimbs; ++i) {
    a.rho[i] = b.rho_min + u(rng) * (b.rho_max - b.rho_min);
    a.theta[i] = b.theta_min + u(rng) * (b.theta_max - b.theta_min);
    a.stride_freq_hz[i] = b.freq_min_hz + u(rng) * (b.freq_max_hz - b.freq_min_hz);
  }
  return a;
}

double stance_length(const SoleTrajectory& t, const GaitConfig& cfg) {
  const std::size_t last_stance = (cfg.waypoints - 1) / 2;
  return std::hypot(t.waypoints[0].x - t.waypoints[last_stance].x,
                    t.waypoints[0].z - t.waypoints[last_stance].z);
}

}  // namespace

TEST_CASE("clamp_action") {
  const ActionBounds b;
  const auto centre = neutral_action(b).encode();
  CHECK(clamp_action(centre, b).encode() == centre);

  auto raw = centre;
  raw[8] = 5.0;
  raw[0] = -1.0;
  raw[4] = 0.9;
  const Action a = clamp_action(raw, b);
  CHECK(a.stride_freq_hz[0] == 2.0);
  CHECK(a.rho[0] == b.rho_min);
  CHECK(a.theta[0] == b.theta_max);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, kActionDim> r{};
    for (auto& v : r) v = nd(rng);
    const auto once = clamp_action(r, b);
    CHECK(clamp_action(once.encode(), b) == once);
    CHECK_NOTHROW(validate(once, b));
  }

  raw[3] = std::nan("");
  CHECK_THROWS_AS(clamp_action(raw, b), std::invalid_argument);
  CHECK_THROWS_AS(clamp_action(std::span<const double>(raw.data(), 11), b), std::invalid_argument);
}

TEST_CASE("neutral action is the box centre at 1 Hz") {
  const Action n = neutral_action(ActionBounds{});
  CHECK(n.rho[0] == doctest::Approx(0.035));
  CHECK(n.theta[2] == 0.0);
  CHECK(n.stride_freq_hz[3] == 1.0);
  CHECK(n.mean_period_s() == doctest::Approx(1.0));
}

TEST_CASE("neutral trajectory is symmetric under the hip") {
  const GaitConfig cfg;
  const auto t = action_to_trajectory(neutral_action(cfg.bounds), 0, cfg);
  CHECK(t.waypoints.size() == cfg.waypoints);
  const std::size_t last_stance = (cfg.waypoints - 1) / 2;
  CHECK(t.waypoints[0].x == doctest::Approx(-t.waypoints[last_stance].x));
  CHECK(t.waypoints[0].z == doctest::Approx(t.waypoints[last_stance].z));
  CHECK(t.waypoints[0].z == doctest::Approx(-cfg.stance_radius_m));
  // swing apex straight under the hip at clearance above the stance line
  double apex = -1.0;
  for (const auto& p : t.waypoints) apex = std::max(apex, p.z);
  CHECK(apex == doctest::Approx(-cfg.stance_radius_m + cfg.swing_clearance_m).epsilon(1e-3));
  CHECK(t.period_s == doctest::Approx(1.0));
}

TEST_CASE("trajectory geometry follows rho and theta") {
  const GaitConfig cfg;
  Action a = neutral_action(cfg.bounds);
  a.rho[1] = 0.02;
  const auto t1 = action_to_trajectory(a, 1, cfg);
  a.rho[1] = 0.04;
  const auto t2 = action_to_trajectory(a, 1, cfg);
  CHECK(stance_length(t2, cfg) == doctest::Approx(2.0 * stance_length(t1, cfg)).epsilon(1e-12));
  CHECK(stance_length(t1, cfg) == doctest::Approx(0.02).epsilon(1e-12));

  a.theta[1] = 0.1;
  const auto base = action_to_trajectory(a, 1, cfg);
  a.theta[1] = 0.3;
  const auto rotated = action_to_trajectory(a, 1, cfg);
  const std::size_t last_stance = (cfg.waypoints - 1) / 2;
  for (std::size_t k = 0; k <= last_stance; ++k) {
    const auto& p = base.waypoints[k];
    const auto& q = rotated.waypoints[k];
    CHECK(std::hypot(q.x, q.z) == doctest::Approx(std::hypot(p.x, p.z)).epsilon(1e-12));
    CHECK(std::atan2(q.z, q.x) - std::atan2(p.z, p.x) == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("trajectories close and stay reachable within joint limits") {
  const GaitConfig cfg;
  std::mt19937_64 rng(2);
  std::vector<Action> actions;
  for (int mask = 0; mask < 8; ++mask) {
    Action a;
    for (std::size_t i = 0; i < kLimbs; ++i) {
      a.rho[i] = (mask & 1) ? cfg.bounds.rho_max : cfg.bounds.rho_min;
      a.theta[i] = (mask & 2) ? cfg.bounds.theta_max : cfg.bounds.theta_min;
      a.stride_freq_hz[i] = (mask & 4) ? cfg.bounds.freq_max_hz : cfg.bounds.freq_min_hz;
    }
    actions.push_back(a);
  }
  for (int i = 0; i < 1000; ++i) actions.push_back(random_action(rng, cfg.bounds));
  for (const auto& a : actions) {
    for (int limb = 0; limb < 4; ++limb) {
      const auto t = action_to_trajectory(a, limb, cfg);
      CHECK(std::hypot(t.waypoints.back().x - t.waypoints.front().x,
                       t.waypoints.back().z - t.waypoints.front().z) < 1e-9);
      for (const auto& p : t.waypoints) {
        const auto q = ik_decode(p, cfg.leg);
        CHECK(within_joint_limits(q, cfg.leg));
      }
    }
  }
}

TEST_CASE("trajectory outside the annulus names the limb") {
  GaitConfig cfg;
  cfg.stance_radius_m = 0.079;
  Action a = neutral_action(cfg.bounds);
  try {
    action_to_trajectory(a, 2, cfg);
    FAIL("expected UnreachableError");
  } catch (const UnreachableError& e) {
    CHECK(std::string(e.what()).find("limb 2") != std::string::npos);
  }
}

TEST_CASE("ik_decode") {
  const LegGeometry leg;
  const auto straight = ik_decode({0.0, -leg.max_reach()}, leg);
  // knee grows like sqrt(margin): 0.1 rad at the default 0.1 mm margin
  CHECK(straight.knee_rad < 0.11);
  CHECK(straight.hip_rad == doctest::Approx(-kPi / 2 - straight.knee_rad / 2).epsilon(1e-12));
  LegGeometry tight = leg;
  tight.reach_margin_m = 1e-10;
  const auto nearly = ik_decode({0.0, -tight.max_reach()}, tight);
  CHECK(std::abs(nearly.knee_rad) < 1e-3);
  CHECK(nearly.hip_rad == doctest::Approx(-kPi / 2).epsilon(1e-3));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> r(leg.min_reach(), leg.max_reach());
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const double d = r(rng), a = ang(rng);
    const Point2 p{d * std::cos(a), d * std::sin(a)};
    const auto q = ik_decode(p, leg);
    const auto back = forward_kinematics(q, leg);
    CHECK(std::hypot(back.x - p.x, back.z - p.z) < 1e-9);
    CHECK(q.knee_rad >= 0.0);
  }

  CHECK_THROWS_AS(ik_decode({0.0, -std::abs(leg.upper_m - leg.lower_m) / 2}, leg), UnreachableError);
  CHECK_THROWS_AS(ik_decode({0.0, -(leg.upper_m + leg.lower_m)}, leg), UnreachableError);
  CHECK_THROWS_AS(ik_decode({0.1, 0.0}, leg), UnreachableError);
}

TEST_CASE("gait_phase_scheduler periodicity, trot lag and continuity") {
  const GaitConfig cfg;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Action a = random_action(rng, cfg.bounds);
    const double f = a.stride_freq_hz[0];
    a.stride_freq_hz.fill(f);
    const auto trajs = build_trajectories(a, cfg);
    for (double t : {0.0, 0.13, 0.77}) {
      const auto p0 = gait_phase_scheduler(a, t, cfg);
      const auto p1 = gait_phase_scheduler(a, t + 1.0 / f, cfg);
      for (std::size_t i = 0; i < kLimbs; ++i) {
        CHECK(p0[i].x == doctest::Approx(p1[i].x).epsilon(1e-9));
        CHECK(p0[i].z == doctest::Approx(p1[i].z).epsilon(1e-9));
      }
      const auto ph = limb_phases(a, t, cfg);
      CHECK(wrap_unit(ph[kFrontLeft] - ph[kFrontRight]) == doctest::Approx(0.5));
      CHECK(wrap_unit(ph[kRearRight] - ph[kRearLeft]) == doctest::Approx(0.5));
      CHECK(ph[kFrontLeft] == doctest::Approx(ph[kRearRight]));
    }
    // speed bound from the longest segment over its phase span
    double vmax = 0.0;
    for (const auto& tr : trajs) {
      for (std::size_t k = 1; k < tr.waypoints.size(); ++k) {
        const double len = std::hypot(tr.waypoints[k].x - tr.waypoints[k - 1].x,
                                      tr.waypoints[k].z - tr.waypoints[k - 1].z);
        vmax = std::max(vmax, len / (tr.phase_offsets[k] - tr.phase_offsets[k - 1]) * f);
      }
    }
    for (int s = 0; s < 200; ++s) {
      const double t = s * 0.0137;
      const auto p = gait_phase_scheduler(a, t, cfg);
      const auto q = gait_phase_scheduler(a, t + 1e-4, cfg);
      for (std::size_t i = 0; i < kLimbs; ++i)
        CHECK(std::hypot(q[i].x - p[i].x, q[i].z - p[i].z) <= vmax * 1e-4 * (1 + 1e-9));
    }
  }
}

TEST_CASE("sole motion has the commanded fundamental frequency") {
  const GaitConfig cfg;
  Action a = neutral_action(cfg.bounds);
  a.stride_freq_hz.fill(1.25);
  const std::size_t n = 400;
  strider::signal::TimeSeries x;
  x.sample_rate_hz = 100.0;
  for (std::size_t k = 0; k < n; ++k) x.samples.push_back(gait_phase_scheduler(a, k / 100.0, cfg)[0].x);
  const auto fit = strider::signal::dominant_pair(strider::signal::fft_forward(x),
                                                  strider::signal::kRetentionBand);
  CHECK(std::abs(fit.term1.freq_hz - 1.25) <= 100.0 / n);
}

TEST_CASE("decode_targets and CSV export") {
  const GaitConfig cfg;
  const Action a = neutral_action(cfg.bounds);
  const auto cmd = decode_targets(gait_phase_scheduler(a, 0.3, cfg), 0.3, cfg.leg);
  CHECK(cmd.timestamp_s == 0.3);
  std::ostringstream os;
  write_trajectory_csv(os, action_to_trajectory(a, 0, cfg));
  CHECK(os.str().rfind("phase,x_m,z_m\n", 0) == 0);
}
