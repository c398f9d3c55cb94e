#pragma once
// Environments seen by the trainer: one step = one gait stride.

#include <cstdint>
#include <iosfwd>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "strider/gait.hpp"
#include "strider/perception.hpp"
#include "strider/reward.hpp"
#include "strider/rl/policy.hpp"
#include "strider/sim.hpp"

namespace strider::rl {

struct StepResult {
  std::vector<double> obs;
  double reward = 0.0;
  bool terminal = false;
  sim::Outcome outcome = sim::Outcome::running;
};

class Env {
 public:
  virtual ~Env() = default;
  virtual std::size_t obs_dim() const = 0;
  virtual ActionBox action_box() const = 0;
  virtual std::vector<double> reset(std::uint64_t seed) = 0;
  // raw is the unclamped policy output; the environment clamps it.
  virtual StepResult step(std::span<const double> raw) = 0;
};

ActionBox action_box(const gait::ActionBounds& b);

struct LocomotionConfig {
  sim::Terrain terrain;
  sim::SimConfig sim;
  gait::GaitConfig gait;
  reward::TaskSpec task;
  reward::RewardConfig reward;
};

// Simulator + perception + reward. The simulator's fall threshold follows
// reward.omega_f so the terminal test and the fall penalty agree.
class LocomotionEnv final : public Env {
 public:
  explicit LocomotionEnv(LocomotionConfig cfg);

  std::size_t obs_dim() const override { return perception::kStateDim; }
  ActionBox action_box() const override;
  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(std::span<const double> raw) override;

  const sim::Simulator& simulator() const { return sim_; }
  sim::Simulator& simulator() { return sim_; }
  const std::vector<gait::Action>& action_log() const { return actions_; }
  std::uint64_t episode_seed() const { return seed_; }

  // Per-stride rows: action, sub-rewards, losses, total, status.
  void set_episode_log(std::ostream* out);
  static std::string episode_log_header();

 private:
  LocomotionConfig cfg_;
  sim::Simulator sim_;
  gait::Action prev_;
  std::vector<gait::Action> actions_;
  std::uint64_t seed_ = 0;
  std::ostream* log_ = nullptr;
};

// One-dimensional bandit-like task: obs = previous clamped action, action in
// [-1, 1], reward = sub_reward(action) with k = 1, alpha = 10, beta = 0,
// gamma = 0.5; episodes last `horizon` steps. The optimum per step is
// k * (sigmoid(alpha) - gamma) at action = 1, i.e. about k * (1 - gamma).
class ToyEnv final : public Env {
 public:
  explicit ToyEnv(int horizon = 16);
  std::size_t obs_dim() const override { return 1; }
  ActionBox action_box() const override { return {{-1.0}, {1.0}}; }
  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(std::span<const double> raw) override;
  static reward::AxisParams params();

 private:
  int horizon_;
  int t_ = 0;
  double prev_ = 0.0;
};

using EnvFactory = std::function<std::unique_ptr<Env>()>;

}  // namespace strider::rl
