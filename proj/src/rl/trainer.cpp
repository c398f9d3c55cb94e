#include "strider/rl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

namespace strider::rl {

void validate(const TrainerConfig& c) {
  auto req = [](bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("trainer: invalid ") + field);
  };
  req(c.total_timesteps > 0, "total_timesteps");
  req(c.workers >= 1, "workers");
  req(c.rollout_len >= 1, "rollout_len");
  req(c.minibatch >= 1, "minibatch");
  req(c.epochs >= 1, "epochs");
  req(c.clip_eps > 0.0 && c.clip_eps < 1.0, "clip_eps");
  req(c.gamma > 0.0 && c.gamma <= 1.0, "gamma");
  req(c.gae_lambda >= 0.0 && c.gae_lambda <= 1.0, "gae_lambda");
  req(c.learning_rate > 0.0 && std::isfinite(c.learning_rate), "learning_rate");
  req(c.entropy_coef >= 0.0, "entropy_coef");
  req(c.value_coef >= 0.0, "value_coef");
  req(c.max_grad_norm >= 0.0, "max_grad_norm");
  req(c.init_log_std >= kLogStdMin && c.init_log_std <= kLogStdMax, "init_log_std");
  req(c.hidden >= 1, "hidden");
  req(c.hidden_layers >= 1, "hidden_layers");
}

int update_count(const TrainerConfig& c) {
  const std::int64_t per = static_cast<std::int64_t>(c.workers) * c.rollout_len;
  return static_cast<int>(std::max<std::int64_t>(1, c.total_timesteps / per));
}

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrainerFault::TrainerFault(const std::string& what, std::uint64_t seed,
                           std::vector<gait::Action> actions)
    : std::runtime_error(what), seed_(seed), actions_(std::move(actions)) {}

namespace {

struct Worker {
  std::unique_ptr<Env> env;
  std::mt19937_64 rng;
  std::uint64_t seed_state = 0;
  std::uint64_t episode_seed = 0;
  std::vector<double> raw_obs;
  double ep_reward = 0.0;
  int ep_steps = 0;
  // per-rollout outputs
  std::vector<Transition> traj;
  std::vector<std::vector<double>> raw_seen;
  std::vector<EpisodeRecord> finished;
  double last_value = 0.0;
  std::exception_ptr error;

  void start_episode() {
    episode_seed = splitmix64(seed_state);
    raw_obs = env->reset(episode_seed);
    ep_reward = 0.0;
    ep_steps = 0;
  }
};

void normalized(const RunningNorm& norm, bool enabled, std::span<const double> raw,
                std::vector<double>& out) {
  out.resize(raw.size());
  if (enabled)
    norm.normalize(raw, out);
  else
    std::copy(raw.begin(), raw.end(), out.begin());
}

void collect(Worker& w, const ActorCritic& model, const RunningNorm& norm, const TrainerConfig& cfg,
             int update_idx, int worker_idx) {
  w.traj.clear();
  w.raw_seen.clear();
  w.finished.clear();
  MlpCache cache;
  std::vector<double> obs;
  for (int t = 0; t < cfg.rollout_len; ++t) {
    normalized(norm, cfg.normalize_obs, w.raw_obs, obs);
    w.raw_seen.push_back(w.raw_obs);
    const auto s = policy_sample(model, obs, w.rng, cache);
    Transition tr;
    tr.value = model.value(obs, cache);
    tr.obs = obs;
    tr.raw_action = s.raw;
    tr.log_prob = s.log_prob;
    StepResult r;
    try {
      r = w.env->step(s.raw);
    } catch (const sim::SimulationFault& e) {
      std::vector<gait::Action> log;
      if (auto* loco = dynamic_cast<LocomotionEnv*>(w.env.get())) log = loco->action_log();
      throw TrainerFault(std::string("trainer: simulator fault in episode seed ") +
                             std::to_string(w.episode_seed) + ": " + e.what(),
                         w.episode_seed, std::move(log));
    }
    tr.reward = r.reward;
    tr.terminal = r.terminal;
    w.traj.push_back(std::move(tr));
    w.ep_reward += r.reward;
    ++w.ep_steps;
    if (r.terminal) {
      w.finished.push_back({update_idx, worker_idx, w.episode_seed, w.ep_reward, w.ep_steps, r.outcome});
      w.start_episode();
    } else {
      w.raw_obs = std::move(r.obs);
    }
  }
  normalized(norm, cfg.normalize_obs, w.raw_obs, obs);
  w.last_value = model.value(obs, cache);
}

}  // namespace

TrainResult train(const EnvFactory& make_env, const TrainerConfig& cfg,
                  const UpdateCallback& on_update) {
  validate(cfg);
  std::uint64_t master = cfg.seed;
  std::vector<Worker> workers(static_cast<std::size_t>(cfg.workers));
  for (auto& w : workers) {
    w.env = make_env();
    const std::uint64_t ws = splitmix64(master);
    w.rng.seed(ws);
    w.seed_state = ws ^ 0xA5A5A5A5A5A5A5A5ULL;
  }
  const std::size_t obs_dim = workers.front().env->obs_dim();
  const ActionBox box = workers.front().env->action_box();

  TrainResult res;
  PolicyShape shape{obs_dim, box.dim(), cfg.hidden, cfg.hidden_layers};
  res.model = ActorCritic(shape, box);
  res.model.init(splitmix64(master), cfg.init_log_std);
  res.norm = RunningNorm(obs_dim);
  std::mt19937_64 shuffle_rng(splitmix64(master));
  Adam adam(res.model.params().size(), cfg.learning_rate);
  LossConfig loss_cfg{cfg.clip_eps, cfg.value_coef, cfg.entropy_coef};

  RewardScaler scaler(workers.size(), cfg.gamma);

  for (auto& w : workers) w.start_episode();

  const int n_updates = update_count(cfg);
  std::int64_t timesteps = 0;
  CurveRow prev_row;
  for (int u = 0; u < n_updates; ++u) {
    {
      std::vector<std::thread> threads;
      for (std::size_t i = 0; i < workers.size(); ++i) {
        threads.emplace_back([&, i] {
          try {
            collect(workers[i], res.model, res.norm, cfg, u, static_cast<int>(i));
          } catch (...) {
            workers[i].error = std::current_exception();
          }
        });
      }
      for (auto& t : threads) t.join();
    }
    for (auto& w : workers)
      if (w.error) std::rethrow_exception(w.error);

    if (cfg.normalize_reward) {
      for (std::size_t i = 0; i < workers.size(); ++i) scaler.observe(i, workers[i].traj);
      for (auto& w : workers) scaler.apply(w.traj);
    }

    // advantages per worker, then normalised over the whole batch
    std::vector<double> adv, ret;
    std::vector<const Transition*> all;
    for (auto& w : workers) {
      const auto g = compute_gae(w.traj, cfg.gamma, cfg.gae_lambda, w.last_value);
      adv.insert(adv.end(), g.advantages.begin(), g.advantages.end());
      ret.insert(ret.end(), g.returns.begin(), g.returns.end());
      for (const auto& tr : w.traj) all.push_back(&tr);
    }
    normalize_advantages(adv);
    std::vector<Sample> samples(all.size());
    for (std::size_t i = 0; i < all.size(); ++i)
      samples[i] = {all[i]->obs.data(), all[i]->raw_action.data(), all[i]->log_prob, adv[i], ret[i]};

    UpdateStats ustats;
    std::vector<std::size_t> order(samples.size());
    std::vector<Sample> mb;
    std::vector<double> grad(res.model.params().size());
    const std::size_t mbs = static_cast<std::size_t>(cfg.minibatch);
    for (int e = 0; e < cfg.epochs; ++e) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), shuffle_rng);
      for (std::size_t start = 0; start < order.size(); start += mbs) {
        const std::size_t end = std::min(order.size(), start + mbs);
        mb.clear();
        for (std::size_t k = start; k < end; ++k) mb.push_back(samples[order[k]]);
        std::fill(grad.begin(), grad.end(), 0.0);
        ustats.loss = ppo_loss(res.model, mb, loss_cfg, grad);
        ustats.grad_norm = clip_grad_norm(grad, cfg.max_grad_norm);
        adam.step(res.model.params(), grad);
        res.model.clamp_log_std();
      }
    }
    for (double p : res.model.params())
      if (!std::isfinite(p)) throw std::runtime_error("trainer: non-finite parameters after update");
    res.updates.push_back(ustats);

    if (cfg.normalize_obs) {
      for (auto& w : workers) {
        RunningNorm batch(obs_dim);
        for (const auto& x : w.raw_seen) batch.update(x);
        res.norm.merge(batch);
      }
    }

    timesteps += static_cast<std::int64_t>(cfg.workers) * cfg.rollout_len;
    CurveRow row;
    row.update_idx = u;
    row.timesteps = timesteps;
    std::vector<double> rewards;
    int falls = 0;
    for (auto& w : workers) {
      for (const auto& ep : w.finished) {
        rewards.push_back(ep.reward);
        falls += ep.outcome == sim::Outcome::fall;
        res.episodes.push_back(ep);
      }
    }
    row.episodes = static_cast<int>(rewards.size());
    if (rewards.empty()) {
      row.mean_ep_reward = prev_row.mean_ep_reward;
      row.std_ep_reward = prev_row.std_ep_reward;
      row.fall_rate = prev_row.fall_rate;
    } else {
      const double n = static_cast<double>(rewards.size());
      const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
      double var = 0.0;
      for (double r : rewards) var += (r - mean) * (r - mean);
      row.mean_ep_reward = mean;
      row.std_ep_reward = std::sqrt(var / n);
      row.fall_rate = falls / n;
    }
    res.curve.push_back(row);
    prev_row = row;
    if (on_update) on_update(row, res.model, res.norm);
  }
  return res;
}

std::vector<double> mean_action(const ActorCritic& model, const RunningNorm& norm,
                                std::span<const double> obs, MlpCache& cache) {
  std::vector<double> x(obs.size());
  if (norm.count > 0.0)
    norm.normalize(obs, x);
  else
    std::copy(obs.begin(), obs.end(), x.begin());
  return model.mean(x, cache);
}

Interval bootstrap_mean(const std::vector<double>& xs, std::uint64_t seed, int resamples) {
  Interval iv;
  if (xs.empty()) return iv;
  const double n = static_cast<double>(xs.size());
  iv.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
  std::vector<double> means(static_cast<std::size_t>(std::max(resamples, 1)));
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += xs[pick(rng)];
    m = s / n;
  }
  std::sort(means.begin(), means.end());
  auto q = [&](double p) {
    const auto idx = static_cast<std::size_t>(std::floor(p * static_cast<double>(means.size() - 1)));
    return means[idx];
  };
  iv.lo = q(0.025);
  iv.hi = q(0.975);
  return iv;
}

EvalSummary evaluate_policy(LocomotionEnv& env, const ActionFn& act, int episodes,
                            std::uint64_t seed, const EpisodeHook& hook, int resamples) {
  if (episodes < 1) throw std::invalid_argument("eval: episodes must be positive");
  EvalSummary out;
  std::uint64_t state = seed;
  std::mt19937_64 rng(splitmix64(state));
  for (int e = 0; e < episodes; ++e) {
    EvalEpisode ep;
    ep.seed = splitmix64(state);
    if (hook) hook(e, env, true);
    auto obs = env.reset(ep.seed);
    for (;;) {
      const auto a = act(obs, rng);
      auto r = env.step(a);
      ep.reward += r.reward;
      if (r.terminal) break;
      obs = std::move(r.obs);
    }
    const auto& st = env.simulator().status();
    ep.outcome = st.outcome;
    ep.strides = st.strides_used;
    ep.sim_time_s = st.elapsed_s;
    ep.distance_m = st.distance_m;
    if (hook) hook(e, env, false);
    out.episodes.push_back(ep);
  }
  std::vector<double> succ, fall, strides, time, rew;
  for (const auto& ep : out.episodes) {
    succ.push_back(ep.outcome == sim::Outcome::success ? 1.0 : 0.0);
    fall.push_back(ep.outcome == sim::Outcome::fall ? 1.0 : 0.0);
    strides.push_back(ep.strides);
    time.push_back(ep.sim_time_s);
    rew.push_back(ep.reward);
  }
  const std::uint64_t bs = splitmix64(state);
  out.success_rate = bootstrap_mean(succ, bs, resamples);
  out.fall_rate = bootstrap_mean(fall, bs + 1, resamples);
  out.strides = bootstrap_mean(strides, bs + 2, resamples);
  out.sim_time_s = bootstrap_mean(time, bs + 3, resamples);
  out.reward = bootstrap_mean(rew, bs + 4, resamples);
  return out;
}

EvalSummary evaluate(const ActorCritic& model, const RunningNorm& norm, LocomotionEnv& env,
                     int episodes, std::uint64_t seed, const EpisodeHook& hook) {
  MlpCache cache;
  return evaluate_policy(
      env, [&](std::span<const double> obs, std::mt19937_64&) { return mean_action(model, norm, obs, cache); },
      episodes, seed, hook);
}

EvalSummary random_baseline(LocomotionEnv& env, int episodes, std::uint64_t seed,
                            const EpisodeHook& hook) {
  const auto box = env.action_box();
  return evaluate_policy(
      env,
      [&](std::span<const double>, std::mt19937_64& rng) {
        std::vector<double> a(box.dim());
        for (std::size_t i = 0; i < a.size(); ++i)
          a[i] = std::uniform_real_distribution<double>(box.low[i], box.high[i])(rng);
        return a;
      },
      episodes, seed, hook);
}

}  // namespace strider::rl
