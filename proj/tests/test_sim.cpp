#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "strider/csv.hpp"
#include "strider/signal.hpp"
#include "strider/sim.hpp"

using namespace strider;
using namespace strider::sim;

namespace {

constexpr double kPi = 3.14159265358979323846;

SimConfig quiet() {
  SimConfig c;
  c.noise.gyro_sigma = 0.0;
  c.noise.acc_sigma = 0.0;
  c.noise.gyro_wobble = 0.0;
  c.noise.acc_wobble = 0.0;
  return c;
}

gait::Action uniform_action(double rho, double theta, double freq) {
  gait::Action a;
  a.rho.fill(rho);
  a.theta.fill(theta);
  a.stride_freq_hz.fill(freq);
  return a;
}

gait::Action random_action(std::mt19937_64& rng, const gait::ActionBounds& b) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  gait::Action a;
  for (std::size_t i = 0; i < gait::kLimbs; ++i) {
    a.rho[i] = b.rho_min + u(rng) * (b.rho_max - b.rho_min);
    a.theta[i] = b.theta_min + u(rng) * (b.theta_max - b.theta_min);
    a.stride_freq_hz[i] = b.freq_min_hz + u(rng) * (b.freq_max_hz - b.freq_min_hz);
  }
  return a;
}

}  // namespace

TEST_CASE("terrain heights") {
  const auto flat = make_terrain(TerrainKind::flat);
  for (double y : {-3.0, 0.0, 0.7, 12.0}) CHECK(flat.height(0.3, y) == 0.0);

  TerrainParams p;
  p.step_height_m = 0.010;
  p.step_depth_m = 0.05;
  p.stairs_start_y_m = 0.25;
  const auto stairs = make_terrain(TerrainKind::stairs, p);
  CHECK(stairs.height(0.0, 0.52) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(stairs.height(0.0, 0.24) == 0.0);
  CHECK(stairs.height(0.0, 0.25) == 0.0);
  CHECK(stairs.height(0.0, 0.301) == doctest::Approx(0.01));
  // capped at the last step
  CHECK(stairs.height(0.0, 100.0) == doctest::Approx(0.01 * p.step_count));

  const auto ramp = make_terrain(TerrainKind::ramp);
  const auto& rp = ramp.params();
  const double y = rp.ramp_start_y_m + 0.2;
  const double grad = (ramp.height(0.0, y + 1e-4) - ramp.height(0.0, y - 1e-4)) / 2e-4;
  CHECK(grad == doctest::Approx(std::tan(10.0 * kPi / 180.0)).epsilon(1e-9));
  // up, plateau, back down to flat
  const double top = rp.ramp_length_m * std::tan(10.0 * kPi / 180.0);
  CHECK(ramp.height(0.0, rp.ramp_start_y_m + rp.ramp_length_m + 0.1) == doctest::Approx(top));
  CHECK(ramp.height(0.0, rp.ramp_start_y_m + 2 * rp.ramp_length_m + rp.plateau_length_m + 0.1) == 0.0);
  CHECK(ramp.segment(0.0, 0.0) == 0);
  CHECK(ramp.segment(0.0, y) == 1);

  const auto spiral = make_terrain(TerrainKind::spiral_stairs);
  const auto& sp = spiral.params();
  const double r = sp.spiral_path_radius_m;
  const double a = sp.spiral_start_angle_rad + 2.5 * sp.spiral_step_angle_rad;
  CHECK(spiral.height(r * std::cos(a), r * std::sin(a)) == doctest::Approx(2 * sp.spiral_step_height_m));
  CHECK(spiral.height(r, -0.1) == 0.0);
  CHECK(spiral.height(0.05, 0.05) == 0.0);  // inside the column
}

TEST_CASE("terrain parameter validation names the parameter") {
  TerrainParams p;
  p.slope_deg = 12.0;
  try {
    (void)make_terrain(TerrainKind::ramp, p);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("slope_deg") != std::string::npos);
  }
  p = {};
  p.step_height_m = 0.02;
  CHECK_THROWS_WITH_AS(make_terrain(TerrainKind::stairs, p),
                       doctest::Contains("step_height_m"), std::invalid_argument);
  p = {};
  p.spiral_step_height_m = 0.001;
  CHECK_THROWS_WITH_AS(make_terrain(TerrainKind::spiral_stairs, p),
                       doctest::Contains("spiral_step_height_m"), std::invalid_argument);
  CHECK_THROWS_AS(parse_terrain_kind("lava"), std::invalid_argument);
  CHECK(parse_terrain_kind("stairs") == TerrainKind::stairs);
}

TEST_CASE("reset is deterministic and places the body in the start zone") {
  Simulator a(make_terrain(TerrainKind::ramp));
  Simulator b(make_terrain(TerrainKind::ramp));
  const auto ra = a.reset(77);
  const auto rb = b.reset(77);
  CHECK(ra.start.position.x == rb.start.position.x);
  CHECK(ra.start.position.y == rb.start.position.y);
  REQUIRE(ra.imu.size() == rb.imu.size());
  for (std::size_t k = 0; k < ra.imu.size(); ++k) {
    CHECK(ra.imu[k].gyro.x == rb.imu[k].gyro.x);
    CHECK(ra.imu[k].acc.y == rb.imu[k].acc.y);
  }
  CHECK(ra.imu.size() == 100);  // one neutral stride at 1 Hz
  CHECK(ra.start.yaw == 0.0);
  CHECK(ra.start.position.z == a.terrain().height(ra.start.position.x, ra.start.position.y) + 0.065);
  CHECK(a.status().strides_used == 0);
  CHECK(a.status().outcome == Outcome::running);

  const auto rc = a.reset(78);
  CHECK(rc.start.position.y != ra.start.position.y);
}

TEST_CASE("start positions are uniform over the start zone") {
  Simulator s(make_terrain(TerrainKind::flat));
  const int nx = 5, ny = 10, n = 10000;
  std::vector<int> counts(static_cast<std::size_t>(nx * ny), 0);
  for (int seed = 0; seed < n; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    const auto b = s.sample_start(rng);
    REQUIRE(b.position.x >= -0.1);
    REQUIRE(b.position.x < 0.1);
    REQUIRE(b.position.y >= 0.0);
    REQUIRE(b.position.y < 0.5);
    const int ix = std::min(nx - 1, static_cast<int>((b.position.x + 0.1) / 0.2 * nx));
    const int iy = std::min(ny - 1, static_cast<int>(b.position.y / 0.5 * ny));
    ++counts[static_cast<std::size_t>(iy * nx + ix)];
  }
  const double expected = static_cast<double>(n) / (nx * ny);
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 49 degrees of freedom, 1% upper critical value
  CHECK(chi2 < 74.92);
}

TEST_CASE("start zone also holds through full resets") {
  Simulator s(make_terrain(TerrainKind::stairs));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = s.reset(seed);
    CHECK(std::abs(r.start.position.x) <= 0.1);
    CHECK(r.start.position.y >= 0.0);
    CHECK(r.start.position.y <= 0.5);
  }
  Simulator sp(make_terrain(TerrainKind::spiral_stairs));
  const auto r = sp.reset(3);
  const double ang = std::atan2(r.start.position.y, r.start.position.x);
  CHECK(r.start.yaw == doctest::Approx(ang));
  CHECK(std::abs(r.start.position.x - 0.6) <= 0.1 + 1e-12);
  CHECK(r.start.position.y <= 0.0);
}

TEST_CASE("synthesize_imu: static gravity, constant yaw rate") {
  std::vector<PoseSample> still(10);
  for (auto& p : still) p.position = {0.1, 0.2, 0.065};
  for (const auto& s : synthesize_imu(still, 0.01, 0.0)) {
    CHECK(s.gyro.norm() == 0.0);
    CHECK(s.acc.x == 0.0);
    CHECK(s.acc.y == 0.0);
    CHECK(s.acc.z == doctest::Approx(9.81));
  }

  const double w = 0.7;
  std::vector<PoseSample> spin(50);
  for (std::size_t k = 0; k < spin.size(); ++k) spin[k].yaw = w * 0.01 * static_cast<double>(k);
  const auto out = synthesize_imu(spin, 0.01, 0.0);
  REQUIRE(out.size() == 48);
  for (const auto& s : out) {
    CHECK(s.gyro.z == doctest::Approx(w).epsilon(1e-9));
    CHECK(std::abs(s.gyro.x) < 1e-12);
  }

  // tilted, still body: gravity rotates into the body frame
  std::vector<PoseSample> tilted(5);
  for (auto& p : tilted) p.pitch = 0.2;
  const auto t = synthesize_imu(tilted, 0.01, 0.0);
  CHECK(t[0].acc.y == doctest::Approx(9.81 * std::sin(0.2)));
  CHECK(t[0].acc.z == doctest::Approx(9.81 * std::cos(0.2)));

  CHECK_THROWS_AS(synthesize_imu(std::vector<PoseSample>(2), 0.01, 0.0), std::invalid_argument);
}

TEST_CASE("imu noise variance") {
  std::vector<PoseSample> still(10002);
  auto samples = synthesize_imu(still, 0.01, 0.0);
  NoiseConfig n;
  std::mt19937_64 rng(5);
  add_imu_noise(samples, n, rng);
  double sg = 0, sa = 0, mg = 0;
  for (const auto& s : samples) {
    mg += s.gyro.x;
    sg += s.gyro.x * s.gyro.x;
    sa += (s.acc.z - 9.81) * (s.acc.z - 9.81);
  }
  const double m = static_cast<double>(samples.size());
  CHECK(samples.size() == 10000);
  CHECK(std::abs(sg / m - 0.0025) < 0.1 * 0.0025);
  CHECK(std::abs(sa / m - 0.04) < 0.1 * 0.04);
  CHECK(std::abs(mg / m) < 0.005);
}

TEST_CASE("neutral stride on flat ground: forward, level, no drift") {
  SimConfig c = quiet();
  c.success_distance_m = 100.0;
  Simulator s(make_terrain(TerrainKind::flat), c);
  s.reset(11);
  const auto start = s.body().position;
  const auto a = gait::neutral_action({});
  double max_roll = 0.0;
  for (int k = 0; k < 60; ++k) {
    const auto r = s.step(a);
    CHECK(r.status.strides_used == k + 1);
    CHECK(r.imu.size() == 100);
    CHECK(r.kinematics.displacement.y > 0.0);
    max_roll = std::max(max_roll, std::abs(s.body().roll));
  }
  CHECK(s.status().outcome == Outcome::stride_budget_exceeded);
  const double fwd = s.body().position.y - start.y;
  const double lat = std::abs(s.body().position.x - start.x);
  CHECK(fwd > 0.0);
  CHECK(max_roll < 0.05);
  CHECK(lat < 0.05 * fwd);
  CHECK(s.status().distance_m == doctest::Approx(fwd));
  CHECK(s.status().elapsed_s == doctest::Approx(60.0));
  // regression anchor: two stance sweeps of rho per stride
  CHECK(fwd / 60.0 == doctest::Approx(0.07).epsilon(1e-6));
  CHECK_THROWS_AS(s.step(a), std::logic_error);
}

TEST_CASE("symmetric actions keep lateral drift small") {
  SimConfig c;
  c.success_distance_m = 100.0;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Simulator s(make_terrain(TerrainKind::flat), c);
    s.reset(static_cast<std::uint64_t>(trial));
    const auto start = s.body().position;
    // left/right mirror pairs share parameters
    gait::Action a = gait::neutral_action({});
    a.rho[0] = a.rho[1] = 0.02 + 0.03 * u(rng);
    a.rho[2] = a.rho[3] = 0.02 + 0.03 * u(rng);
    a.theta[0] = a.theta[1] = -0.2 + 0.4 * u(rng);
    a.theta[2] = a.theta[3] = -0.2 + 0.4 * u(rng);
    for (int k = 0; k < 60 && s.status().outcome == Outcome::running; ++k) s.step(a);
    const double fwd = s.body().position.y - start.y;
    CHECK(fwd > 0.0);
    CHECK(std::abs(s.body().position.x - start.x) < 0.05 * fwd);
  }
}

TEST_CASE("longer stance sweep climbs a ramp faster") {
  TerrainParams p;
  p.ramp_start_y_m = -1.0;
  p.ramp_length_m = 3.0;
  SimConfig c = quiet();
  auto progress = [&](double rho) {
    Simulator s(make_terrain(TerrainKind::ramp, p), c);
    s.reset(4);
    double total = 0.0, climb = 0.0;
    for (int k = 0; k < 5; ++k) {
      const auto r = s.step(uniform_action(rho, 0.0, 1.0));
      total += r.kinematics.forward_progress_m;
      climb += r.kinematics.climb_m;
    }
    CHECK(climb > 0.0);
    return total;
  };
  const gait::ActionBounds b;
  CHECK(progress(b.rho_min) < progress(b.rho_max));
}

TEST_CASE("no tunneling through terrain at any substep") {
  for (auto kind : {TerrainKind::stairs, TerrainKind::ramp, TerrainKind::spiral_stairs}) {
    TerrainParams p;
    p.step_height_m = 0.015;
    const auto terrain = make_terrain(kind, p);
    Simulator s(terrain);
    std::ostringstream trace;
    trace << Simulator::trace_header() << '\n';
    s.set_trace(&trace);
    std::mt19937_64 rng(9);
    for (std::uint64_t ep = 0; ep < 5; ++ep) {
      s.reset(ep);
      while (s.status().outcome == Outcome::running) s.step(random_action(rng, {}));
    }
    s.set_trace(nullptr);
    std::istringstream in(trace.str());
    const auto table = csv::read_numeric(in);
    const auto xs = table.column_values("x_m");
    const auto ys = table.column_values("y_m");
    const auto zs = table.column_values("z_m");
    REQUIRE(xs.size() > 100);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      REQUIRE(zs[k] >= terrain.height(xs[k], ys[k]) - s.config().contact_tolerance_m);
    }
  }
}

TEST_CASE("flat gyro_x is stride periodic") {
  for (double f : {0.8, 1.0, 1.25}) {
    Simulator s(make_terrain(TerrainKind::flat));
    s.reset(21);
    std::vector<double> gx;
    for (int k = 0; k < 20; ++k) {
      for (const auto& smp : s.step(uniform_action(0.035, 0.0, f)).imu) gx.push_back(smp.gyro.x);
      if (s.status().outcome != Outcome::running) break;
    }
    signal::TimeSeries ts{gx, 100.0, 0};
    const auto spec = signal::fft_forward(ts);
    const auto fit = signal::dominant_pair(spec, signal::kStrideFrequencyBand);
    const double bin = 100.0 / static_cast<double>(gx.size());
    CHECK(std::abs(fit.term1.freq_hz - f) <= bin);
  }
}

TEST_CASE("terminal outcomes") {
  SUBCASE("asymmetric sweep leaves the corridor") {
    Simulator s(make_terrain(TerrainKind::flat));
    s.reset(1);
    gait::Action a = gait::neutral_action({});
    a.rho = {0.06, 0.01, 0.06, 0.01};
    while (s.status().outcome == Outcome::running) s.step(a);
    CHECK(s.status().outcome == Outcome::off_course);
  }
  SUBCASE("neutral reaches three metres") {
    Simulator s(make_terrain(TerrainKind::flat));
    s.reset(1);
    while (s.status().outcome == Outcome::running) s.step(gait::neutral_action({}));
    CHECK(s.status().outcome == Outcome::success);
    CHECK(s.status().distance_m >= 3.0);
    CHECK(s.status().strides_used < 60);
  }
  SUBCASE("gyro above threshold is a fall") {
    SimConfig c;
    c.fall_threshold_rad_s = 0.2;
    Simulator s(make_terrain(TerrainKind::flat), c);
    s.reset(1);
    const auto r = s.step(gait::neutral_action({}));
    CHECK(r.status.outcome == Outcome::fall);
    CHECK(r.kinematics.peak_gyro[0] > 0.2);
  }
  SUBCASE("high stairs trip the body") {
    TerrainParams p;
    p.step_height_m = 0.015;
    Simulator s(make_terrain(TerrainKind::stairs, p));
    s.reset(1);
    int stumbles = 0;
    while (s.status().outcome == Outcome::running) stumbles += s.step(gait::neutral_action({})).kinematics.stumbles;
    CHECK(stumbles > 0);
    CHECK(s.status().outcome == Outcome::fall);
  }
  SUBCASE("out-of-box action rejected") {
    Simulator s(make_terrain(TerrainKind::flat));
    s.reset(1);
    gait::Action a = gait::neutral_action({});
    a.rho[2] = 1.0;
    CHECK_THROWS_AS(s.step(a), std::invalid_argument);
  }
}

TEST_CASE("same seed and actions give byte-identical traces") {
  auto run = [](std::uint64_t seed) {
    Simulator s(make_terrain(TerrainKind::stairs));
    std::ostringstream trace;
    s.set_trace(&trace);
    s.reset(seed);
    std::mt19937_64 rng(seed);
    while (s.status().outcome == Outcome::running) s.step(random_action(rng, {}));
    return trace.str();
  };
  const auto a = run(5);
  CHECK(a == run(5));
  CHECK(a != run(6));
}

TEST_CASE("spiral progress follows the path angle") {
  SimConfig c = quiet();
  Simulator s(make_terrain(TerrainKind::spiral_stairs), c);
  s.reset(2);
  gait::Action a = gait::neutral_action({});
  // right side sweeps further: steady left turn
  a.rho = {0.026, 0.044, 0.026, 0.044};
  double progress = 0.0;
  for (int k = 0; k < 10; ++k) progress += s.step(a).kinematics.forward_progress_m;
  CHECK(progress > 0.3);
  CHECK(s.status().distance_m == doctest::Approx(progress).epsilon(1e-9));
}
