// Acceptance run: one PASS/FAIL line per headline criterion, plus the
// measurements behind it. Exit status is non-zero if any criterion fails.
//
//   acceptance            all criteria
//   acceptance 2 5        only the listed ones

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cli_harness.hpp"
#include "oracles.hpp"
#include "rl_fixtures.hpp"
#include "strider/gait.hpp"
#include "strider/perception.hpp"
#include "strider/reward.hpp"
#include "strider/rl/trainer.hpp"
#include "strider/signal.hpp"
#include "strider/sim.hpp"

using namespace strider;
namespace oracle = strider::oracle;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ------------------------------------------------------------ 1 signal

Verdict signal_pipeline() {
  Verdict v;
  const auto t0 = Clock::now();

  double worst = 0.0;
  for (std::size_t n = 8; n <= 1024; ++n) {
    const signal::TimeSeries x{oracle::gaussian_vector(n, 5000 + n), 100.0, 0};
    const auto s = signal::fft_forward(x);
    const auto ref = oracle::naive_half_spectrum(x.samples);
    for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(s.bins[k] - ref[k]));
  }
  v.require(worst < 1e-9, fmt("fft vs O(N^2) DFT, every length 8..1024: max bin error %.2e (< 1e-9)", worst));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> len(8, 1024);
  double worst_rt = 0.0;
  for (int w = 0; w < 1000; ++w) {
    const std::size_t n = len(rng);
    const signal::TimeSeries x{oracle::gaussian_vector(n, 9000 + static_cast<std::uint64_t>(w), 3.0), 100.0, w};
    const auto back = signal::ifft_inverse(signal::fft_forward(x));
    worst_rt = std::max(worst_rt, oracle::rms(back.samples, x.samples) / oracle::norm_rms(x.samples));
  }
  v.require(worst_rt < 1e-9, fmt("ifft(fft(x)) on 1000 random windows: max relative RMS %.2e (< 1e-9)", worst_rt));

  std::size_t bad_bins = 0, checked = 0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int w = 0; w < 200; ++w) {
    const std::size_t n = len(rng);
    const double fs = 50.0 + 150.0 * u(rng);
    const signal::TimeSeries x{oracle::gaussian_vector(n, 20000 + static_cast<std::uint64_t>(w)), fs, w};
    const double lo = 0.4 * fs * u(rng), hi = lo + (0.5 * fs - lo) * u(rng);
    const auto s = signal::fft_forward(x);
    const auto f = signal::band_filter(s, {lo, hi});
    for (std::size_t k = 0; k < s.bins.size(); ++k, ++checked) {
      const bool in = s.bin_freq_hz[k] >= lo && s.bin_freq_hz[k] <= hi;
      const auto expect = in ? s.bins[k] : std::complex<double>{0.0, 0.0};
      const bool same = std::memcmp(&f.bins[k], &expect, sizeof expect) == 0;
      bad_bins += same ? 0 : 1;
    }
    if (f.dc_offset != s.dc_offset) ++bad_bins;
  }
  v.require(bad_bins == 0, fmt("band filter on 200 random bands: %.0f of %.0f bins not exact", double(bad_bins),
                               double(checked)));

  // 8 s at 128 Hz: 0.125 Hz bins; planted tones sit on bins inside the band
  constexpr std::size_t n = 1024;
  constexpr double fs = 128.0, df = fs / n;
  int recovered = 0;
  double worst_amp = 0.0, worst_phase = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::mt19937_64 g(700 + static_cast<std::uint64_t>(trial));
    std::uniform_int_distribution<int> bin(2, 78);
    const int k1 = bin(g);
    int k2 = bin(g);
    while (k2 == k1) k2 = bin(g);
    std::uniform_real_distribution<double> ph(-oracle::kPi, oracle::kPi);
    const double a1 = 0.5 + 1.5 * u(g);
    const double a2 = a1 * (0.4 + 0.5 * u(g));
    const signal::SinusoidTerm t1{a1, k1 * df, ph(g)}, t2{a2, k2 * df, ph(g)};
    std::normal_distribution<double> noise(0.0, 0.1 * a1);
    signal::TimeSeries x;
    x.sample_rate_hz = fs;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / fs;
      const std::vector<signal::SinusoidTerm> terms{t1, t2};
      x.samples.push_back(signal::evaluate_terms(terms, t) + noise(g));
    }
    const auto fit = signal::dominant_pair(signal::fft_forward(x), signal::kRetentionBand);
    bool ok = !fit.degenerate;
    for (const auto& [got, want] : {std::pair{fit.term1, t1}, std::pair{fit.term2, t2}}) {
      const double amp_err = std::abs(got.amplitude - want.amplitude) / want.amplitude;
      const double phase_err = std::abs(signal::wrap_phase(got.phase_rad - want.phase_rad));
      worst_amp = std::max(worst_amp, amp_err);
      worst_phase = std::max(worst_phase, phase_err);
      ok = ok && std::lround(got.freq_hz / df) == std::lround(want.freq_hz / df) && amp_err <= 0.05 &&
           phase_err <= 0.1;
    }
    recovered += ok ? 1 : 0;
  }
  v.require(recovered == 100,
            fmt("dominant pair, 100 noisy two-tone trials: %.0f recovered (worst amplitude %.2f%%, phase %.3f rad)",
                recovered, 100.0 * worst_amp, worst_phase));
  const double secs = seconds_since(t0);
  v.require(secs < 60.0, fmt("wall clock %.1f s (< 60 s)", secs));
  return v;
}

// ------------------------------------------------------------ 2 transition

Verdict transition_detectability() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto terrain = sim::make_terrain(sim::TerrainKind::ramp);
  const auto action = gait::neutral_action({});
  int passed = 0;
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    sim::Simulator s(terrain);
    const auto r = s.reset(seed);
    const double rate = s.config().sample_rate_hz;
    std::vector<std::array<perception::EnvDescriptor, perception::kChannels>> d{
        perception::describe_window(r.imu, rate)};
    int boundary = -1;
    while (s.status().outcome == sim::Outcome::running) {
      const auto st = s.step(action);
      d.push_back(perception::describe_window(st.imu, rate));
      if (boundary < 0 && st.kinematics.max_contact_segment > 0) boundary = static_cast<int>(d.size()) - 1;
      if (boundary >= 0 && static_cast<int>(d.size()) > boundary + 1) break;
    }
    if (boundary < 2 || static_cast<int>(d.size()) <= boundary + 1) {
      ratios.push_back(0.0);
      continue;
    }
    // flat-flat distances between consecutive windows before the boundary
    std::vector<double> ff;
    for (int k = 1; k < boundary; ++k) ff.push_back(perception::descriptor_distance(d[k - 1], d[k]));
    std::nth_element(ff.begin(), ff.begin() + static_cast<std::ptrdiff_t>(ff.size() / 2), ff.end());
    const double median = ff[ff.size() / 2];
    const double across = perception::descriptor_distance(d[boundary - 1], d[boundary + 1]);
    ratios.push_back(across / median);
    passed += across > 3.0 * median ? 1 : 0;
  }
  std::sort(ratios.begin(), ratios.end());
  v.require(passed >= 90, fmt("ramp boundary distance > 3x flat median in %.0f of 100 seeds (>= 90)", passed));
  v.note(fmt("distance ratio: p10 %.2f, median %.2f, p90 %.2f", ratios[10], ratios[50], ratios[90]));
  const double secs = seconds_since(t0);
  v.require(secs < 120.0, fmt("wall clock %.1f s (< 120 s)", secs));
  return v;
}

// ------------------------------------------------------------ 3 reward

Verdict reward_suite() {
  Verdict v;
  const auto t0 = Clock::now();

  bool fall_ok = true;
  for (const auto kind : {sim::TerrainKind::flat, sim::TerrainKind::stairs, sim::TerrainKind::ramp,
                          sim::TerrainKind::spiral_stairs}) {
    const auto task = reward::default_task(sim::make_terrain(kind));
    const auto cfg = reward::default_reward_config(task);
    for (double w : {std::nextafter(cfg.omega_f, 100.0), 4.0, -3.5, 50.0}) {
      reward::StrideMeasurement m;
      m.s_x = 0.3;
      m.s_y = 0.2;
      m.s_z = 0.1;
      m.omega_d = w;
      const auto r = reward::total_reward(m, task, cfg);
      fall_ok = fall_ok && r.reward == -10.0 && r.terminal;
    }
    reward::StrideMeasurement m;
    m.omega_d = cfg.omega_f;
    const auto r = reward::total_reward(m, task, cfg);
    fall_ok = fall_ok && !r.terminal && r.reward != -10.0;
  }
  v.require(fall_ok, "fall branch returns exactly -10 above the pitch-rate threshold, on every terrain");

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long double worst = 0.0L;
  for (int i = 0; i < 20000; ++i) {
    reward::AxisParams p;
    p.k = 0.1 + 3.0 * u(rng);
    p.alpha = 0.5 + 20.0 * u(rng);
    p.beta = -2.0 + 4.0 * u(rng);
    p.gamma = u(rng);
    p.required = true;
    const double s = -3.0 + 6.0 * u(rng);
    const long double ref = static_cast<long double>(p.k) *
                            (oracle::logistic_ld(static_cast<long double>(p.alpha) * (s + static_cast<long double>(p.beta))) - p.gamma);
    worst = std::max(worst, std::abs(static_cast<long double>(reward::sub_reward(s, p)) - ref));
  }
  v.require(worst < 1e-12L, fmt("sub-reward vs long-double logistic, 20000 draws: max error %.2e (< 1e-12)",
                                static_cast<double>(worst)));

  double worst_fd = 0.0;
  for (double alpha : {1.0, 3.0, 6.0}) {
    reward::AxisParams p;
    p.k = 1.5;
    p.alpha = alpha;
    p.beta = -0.2;
    p.gamma = 0.5;
    p.required = true;
    for (int i = 0; i <= 200; ++i) {
      const double s = -1.0 + 0.01 * i, h = 1e-6;
      const double fd = (reward::sub_reward(s + h, p) - reward::sub_reward(s - h, p)) / (2.0 * h);
      const double an = reward::sub_reward_derivative(s, p);
      worst_fd = std::max(worst_fd, std::abs(fd - an) / std::max(std::abs(an), 1e-12));
    }
  }
  v.require(worst_fd < 1e-6, fmt("sigmoid gradient vs central differences: max relative error %.2e (< 1e-6)",
                                 worst_fd));

  const double tu = 0.2;
  const bool strict = reward::loss_heading(tu, tu) == 0.0 && reward::loss_heading(0.0, tu) == 0.0 &&
                      reward::loss_heading(std::nextafter(tu, 1.0), tu) == -1.0;
  v.require(strict, "heading loss is 0 at theta = theta_u and -1 just above it");
  reward::RewardConfig c;
  c.k_lat = 2.0;
  c.alpha_lat = 1.5;
  c.delta = 0.0;
  reward::RewardConfig d = c;
  d.delta = 0.02;
  v.require(reward::loss_lateral(0.0, c) == 0.0 && reward::loss_lateral(0.0, d) == 0.0,
            "lateral loss is exactly 0 at zero offset");
  const double secs = seconds_since(t0);
  v.require(secs < 10.0, fmt("wall clock %.2f s (< 10 s)", secs));
  return v;
}

// ------------------------------------------------------------ 4 ppo

Verdict ppo_machinery() {
  Verdict v;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    for (double p_done : {0.0, 0.05, 0.3}) {
      const auto ro = testing::random_rollout(500, seed, p_done);
      const double tail = 0.7 * static_cast<double>(seed);
      const auto got = rl::compute_gae(ro.traj, 0.99, 0.95, tail);
      const auto ref = oracle::brute_force_gae(ro.r, ro.v, ro.done, 0.99, 0.95, tail);
      for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(got.advantages[i] - ref[i]));
    }
  v.require(worst < 1e-10, fmt("GAE vs explicit summation, 15 rollouts: max error %.2e (< 1e-10)", worst));

  const rl::LossConfig lc{0.2, 0.5, 0.01};
  double worst_rel = 0.0;
  for (const auto& [m, seed] : {std::pair{testing::toy_model(1, 1, 2, 1, 11), 5}, std::pair{testing::toy_model(3, 2, 5, 2, 12), 6},
                                std::pair{testing::toy_model(40, 12, 8, 2, 13), 7}}) {
    const auto b = testing::toy_batch(m, 24, static_cast<std::uint64_t>(seed), lc.clip_eps);
    worst_rel = std::max(worst_rel, testing::loss_gradients(m, b, lc).relative_error());
  }
  v.require(worst_rel < 1e-4, fmt("PPO loss gradient vs central differences on 3 toy nets: relative error %.2e (< 1e-4)",
                                  worst_rel));

  const auto t0 = Clock::now();
  const auto cfg = testing::toy_config(7);
  const auto res = rl::train(testing::toy_factory(), cfg);
  const double secs = seconds_since(t0);
  const auto& params = rl::ToyEnv::params();
  const double optimum = params.k * (1.0 - params.gamma);
  rl::MlpCache cache;
  const auto a = rl::mean_action(res.model, res.norm, std::vector<double>{0.0}, cache);
  const double achieved = reward::sub_reward(std::clamp(a[0], -1.0, 1.0), params);
  v.require(achieved >= 0.95 * optimum && res.curve.back().timesteps <= 50'000,
            fmt("1-D toy task: mean action earns %.4f, optimum %.4f (need >= 95%%), after %.0f timesteps", achieved, optimum,
                static_cast<double>(res.curve.back().timesteps)));
  v.require(secs < 120.0, fmt("toy training wall clock %.1f s (< 120 s)", secs));
  return v;
}

// ------------------------------------------------------------ 5, 6 learning

rl::LocomotionConfig stairs_or_flat(sim::TerrainKind kind, double step_height_m) {
  sim::TerrainParams tp;
  tp.step_height_m = step_height_m;
  rl::LocomotionConfig lc;
  lc.terrain = sim::make_terrain(kind, tp);
  lc.task = reward::default_task(lc.terrain);
  lc.reward = reward::default_reward_config(lc.task);
  return lc;
}

struct TrainedRun {
  rl::TrainResult result;
  double seconds = 0.0;
};

std::map<std::pair<std::string, std::uint64_t>, TrainedRun>& run_cache() {
  static std::map<std::pair<std::string, std::uint64_t>, TrainedRun> cache;
  return cache;
}

// Default trainer settings, 100k timesteps.
const TrainedRun& trained(const std::string& name, const rl::LocomotionConfig& lc, std::uint64_t seed) {
  auto& cache = run_cache();
  const auto key = std::pair{name, seed};
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  rl::TrainerConfig cfg;
  cfg.total_timesteps = 100'000;
  cfg.seed = seed;
  const auto t0 = Clock::now();
  TrainedRun run{rl::train([&] { return std::make_unique<rl::LocomotionEnv>(lc); }, cfg), 0.0};
  run.seconds = seconds_since(t0);
  return cache.emplace(key, std::move(run)).first->second;
}

constexpr std::uint64_t kDefaultSeed = 0;
constexpr std::uint64_t kBaselineSeed = 999;

Verdict end_to_end() {
  Verdict v;
  double total_secs = 0.0;
  for (const auto& [name, lc] : {std::pair{std::string("flat"), stairs_or_flat(sim::TerrainKind::flat, 0.005)},
                                 std::pair{std::string("stairs 5 mm"), stairs_or_flat(sim::TerrainKind::stairs, 0.005)}}) {
    const auto& run = trained(name, lc, kDefaultSeed);
    total_secs += run.seconds;
    const auto& eps = run.result.episodes;
    const std::size_t k = std::min<std::size_t>(50, eps.size());
    double reward_sum = 0.0;
    int falls = 0;
    for (std::size_t i = eps.size() - k; i < eps.size(); ++i) {
      reward_sum += eps[i].reward;
      falls += eps[i].outcome == sim::Outcome::fall ? 1 : 0;
    }
    const double trained_reward = reward_sum / static_cast<double>(k);
    const double trained_fall = static_cast<double>(falls) / static_cast<double>(k);

    rl::LocomotionEnv env(lc);
    const auto base = rl::random_baseline(env, 100, kBaselineSeed);
    const double b = base.reward.mean;
    // "at least twice the baseline" read as a margin of |B| above B, which
    // coincides with 2B for a positive baseline and stays meaningful otherwise
    v.require(trained_reward - b >= std::abs(b),
              name + fmt(": final-50 mean episode reward %.2f vs random %.2f (need >= %.2f)", trained_reward, b,
                         b + std::abs(b)));
    v.require(trained_fall <= 0.5 * base.fall_rate.mean,
              name + fmt(": final-50 fall rate %.2f vs random %.2f (need <= %.3f)", trained_fall,
                         base.fall_rate.mean, 0.5 * base.fall_rate.mean));
    const auto ev = rl::evaluate(run.result.model, run.result.norm, env, 100, 1000 + kDefaultSeed);
    v.note(name + fmt(": learning curve %.2f at the first update -> %.2f at the last", run.result.curve.front().mean_ep_reward,
                      run.result.curve.back().mean_ep_reward));
    v.note(name + fmt(": mean-action eval over 100 episodes: success %.2f, fall %.2f, reward %.2f",
                      ev.success_rate.mean, ev.fall_rate.mean, ev.reward.mean));
    v.note(name + fmt(": random policy success %.2f", base.success_rate.mean));
  }
  v.require(total_secs <= 1800.0, fmt("training wall clock %.0f s for both runs (<= 1800 s)", total_secs));
  return v;
}

Verdict difficulty_ordering() {
  Verdict v;
  std::vector<double> means;
  for (double h_mm : {5.0, 10.0, 15.0}) {
    const auto lc = stairs_or_flat(sim::TerrainKind::stairs, h_mm / 1000.0);
    const std::string name = h_mm == 5.0 ? "stairs 5 mm" : fmt("stairs %.0f mm", h_mm);
    double sum = 0.0;
    std::string per_seed;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto& run = trained(name, lc, seed);
      rl::LocomotionEnv env(lc);
      const auto ev = rl::evaluate(run.result.model, run.result.norm, env, 100, 1000 + seed);
      sum += ev.success_rate.mean;
      per_seed += fmt(" %.2f", ev.success_rate.mean);
    }
    means.push_back(sum / 3.0);
    v.note(name + ": success per seed" + per_seed + fmt(", mean %.3f", means.back()));
  }
  v.require(means[0] >= means[1] && means[1] >= means[2],
            fmt("success 5 mm %.3f >= 10 mm %.3f >= 15 mm %.3f", means[0], means[1], means[2]));
  return v;
}

// ------------------------------------------------------------ 7 determinism

Verdict determinism() {
  namespace fs = std::filesystem;
  Verdict v;
  testing::ScratchRoot root("acceptance");
  const std::vector<std::string> budget{"--set", "trainer.total_timesteps=4096", "--set", "trainer.checkpoint_every=1"};
  auto run = [&](std::vector<std::string> args) {
    const auto r = testing::run_cli(args);
    if (r.code != 0) v.require(false, "command failed: " + r.err);
    return r.code == 0;
  };
  auto same_csvs = [&](const std::string& a, const std::string& b, const std::string& what) {
    std::size_t files = 0, differ = 0;
    for (const auto& e : fs::recursive_directory_iterator(root.run(a))) {
      if (e.path().extension() != ".csv") continue;
      ++files;
      const auto other = root.run(b) / fs::relative(e.path(), root.run(a));
      if (testing::slurp(e.path()) != testing::slurp(other)) ++differ;
    }
    v.require(files > 0 && differ == 0, what + fmt(": %.0f CSV files, %.0f differ", double(files), double(differ)));
  };

  for (const char* name : {"train-a", "train-b"}) {
    std::vector<std::string> args{"train", "--terrain", "stairs", "--step-height-mm", "10", "--seed", "7", "--run-name", name};
    args.insert(args.end(), budget.begin(), budget.end());
    if (!run(args)) return v;
  }
  same_csvs("train-a", "train-b", "train twice");
  const bool models_same = testing::slurp(root.run("train-a") / "model.ckpt") == testing::slurp(root.run("train-b") / "model.ckpt");
  v.require(models_same, "train twice: identical model checkpoints");

  const auto ckpt = (root.run("train-a") / "model.ckpt").string();
  const auto cfg = (root.run("train-a") / "config.resolved").string();
  for (const char* name : {"eval-a", "eval-b"})
    if (!run({"eval", "--config", cfg, "--checkpoint", ckpt, "--episodes", "20", "--record-episode", "3",
              "--run-name", name}))
      return v;
  same_csvs("eval-a", "eval-b", "eval twice (with a recorded episode)");
  for (const char* name : {"random-a", "random-b"})
    if (!run({"eval", "--random-policy", "--terrain", "ramp", "--episodes", "20", "--seed", "4", "--run-name", name}))
      return v;
  same_csvs("random-a", "random-b", "random-policy eval twice");

  const auto trace = (root.run("eval-a") / "episode_trace.csv").string();
  for (const char* name : {"analyze-a", "analyze-b"})
    if (!run({"analyze", "--trace", trace, "--run-name", name})) return v;
  same_csvs("analyze-a", "analyze-b", "analyze twice");

  if (!run({"train", "--config", cfg, "--run-name", "train-c"})) return v;
  v.require(testing::slurp(root.run("train-a") / "curve.csv") == testing::slurp(root.run("train-c") / "curve.csv"),
            "train from the run's own resolved config reproduces its curve");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"signal pipeline correctness", signal_pipeline},
      {"terrain-transition detectability", transition_detectability},
      {"reward unit suite", reward_suite},
      {"PPO machinery", ppo_machinery},
      {"end-to-end learning (flat, stairs 5 mm, 100k timesteps)", end_to_end},
      {"difficulty ordering (stairs 5/10/15 mm, 3 seeds each)", difficulty_ordering},
      {"determinism of train/eval/analyze outputs", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  std::vector<std::string> summary;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const std::string line = std::string(v.pass ? "PASS" : "FAIL") + "  [" + std::to_string(id) + "] " +
                             criteria[i].first + fmt("  (%.1f s)", seconds_since(t0));
    std::printf("%s\n", line.c_str());
    for (const auto& n : v.notes) std::printf("        %s\n", n.c_str());
    std::fflush(stdout);
    summary.push_back(line);
    failures += v.pass ? 0 : 1;
  }
  std::printf("\nsummary\n");
  for (const auto& s : summary) std::printf("  %s\n", s.c_str());
  std::printf("%d of %zu criteria failed\n", failures, summary.size());
  return failures == 0 ? 0 : 1;
}
