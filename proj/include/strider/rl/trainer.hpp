#pragma once
// Synchronous PPO: workers collect rollouts with a frozen parameter and
// normaliser snapshot, then a single thread runs the update.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strider/gait.hpp"
#include "strider/rl/env.hpp"
#include "strider/rl/policy.hpp"
#include "strider/rl/ppo.hpp"

namespace strider::rl {

struct TrainerConfig {
  std::int64_t total_timesteps = 250'000;
  int workers = 4;
  int rollout_len = 512;  // per worker per update
  int minibatch = 256;
  int epochs = 10;
  double clip_eps = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double learning_rate = 1e-3;
  double entropy_coef = 0.0;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;
  double init_log_std = -2.5;
  std::size_t hidden = 64;
  std::size_t hidden_layers = 2;
  bool normalize_obs = true;
  // Divides rewards by a running std of discounted returns (no centring).
  bool normalize_reward = false;
  std::uint64_t seed = 0;
};

void validate(const TrainerConfig& cfg);

// Whole updates that fit in the timestep budget (at least one).
int update_count(const TrainerConfig& cfg);

std::uint64_t splitmix64(std::uint64_t& state);

struct CurveRow {
  int update_idx = 0;
  std::int64_t timesteps = 0;
  double mean_ep_reward = 0.0;
  double std_ep_reward = 0.0;
  double fall_rate = 0.0;
  int episodes = 0;
};

struct EpisodeRecord {
  int update_idx = 0;
  int worker = 0;
  std::uint64_t seed = 0;
  double reward = 0.0;
  int steps = 0;
  sim::Outcome outcome = sim::Outcome::running;
};

struct UpdateStats {
  LossStats loss;
  double grad_norm = 0.0;
};

struct TrainResult {
  ActorCritic model;
  RunningNorm norm;
  std::vector<CurveRow> curve;
  std::vector<EpisodeRecord> episodes;
  std::vector<UpdateStats> updates;
};

// A simulator fault during collection, with what is needed to replay it.
class TrainerFault : public std::runtime_error {
 public:
  TrainerFault(const std::string& what, std::uint64_t seed, std::vector<gait::Action> actions);
  std::uint64_t episode_seed() const { return seed_; }
  const std::vector<gait::Action>& actions() const { return actions_; }

 private:
  std::uint64_t seed_;
  std::vector<gait::Action> actions_;
};

using UpdateCallback = std::function<void(const CurveRow&, const ActorCritic&, const RunningNorm&)>;

TrainResult train(const EnvFactory& make_env, const TrainerConfig& cfg,
                  const UpdateCallback& on_update = {});

// Deterministic action: the policy mean on the normalised observation.
std::vector<double> mean_action(const ActorCritic& model, const RunningNorm& norm,
                                std::span<const double> obs, MlpCache& cache);

struct Interval {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct EvalEpisode {
  std::uint64_t seed = 0;
  sim::Outcome outcome = sim::Outcome::running;
  int strides = 0;
  double sim_time_s = 0.0;
  double distance_m = 0.0;
  double reward = 0.0;
};

struct EvalSummary {
  std::vector<EvalEpisode> episodes;
  Interval success_rate, fall_rate, strides, sim_time_s, reward;
};

using ActionFn = std::function<std::vector<double>(std::span<const double> obs, std::mt19937_64& rng)>;

// Called with starting = true before an episode's reset and with false after
// its last step, e.g. to attach trace streams to one episode.
using EpisodeHook = std::function<void(int episode, LocomotionEnv& env, bool starting)>;

// Runs `episodes` episodes with seeds split from `seed`; 95% percentile
// bootstrap intervals over `resamples` resamples.
EvalSummary evaluate_policy(LocomotionEnv& env, const ActionFn& act, int episodes,
                            std::uint64_t seed, const EpisodeHook& hook = {}, int resamples = 1000);

EvalSummary evaluate(const ActorCritic& model, const RunningNorm& norm, LocomotionEnv& env,
                     int episodes, std::uint64_t seed, const EpisodeHook& hook = {});

// Uniform random actions over the action boxes.
EvalSummary random_baseline(LocomotionEnv& env, int episodes, std::uint64_t seed,
                            const EpisodeHook& hook = {});

Interval bootstrap_mean(const std::vector<double>& xs, std::uint64_t seed, int resamples = 1000);

}  // namespace strider::rl
