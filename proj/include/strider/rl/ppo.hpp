#pragma once
// PPO pieces: rollout transitions, generalized advantage estimation, the
// clipped surrogate loss with its analytic gradient, and Adam.

#include <cstddef>
#include <span>
#include <vector>

#include "strider/rl/policy.hpp"

namespace strider::rl {

struct Transition {
  std::vector<double> obs;  // normalised with the snapshot used when acting
  std::vector<double> raw_action;
  double log_prob = 0.0;
  double reward = 0.0;
  double value = 0.0;
  bool terminal = false;
};

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// Divides rewards by a running standard deviation of per-worker discounted
// returns (no centring), so the ordering of rewards within a batch, and in
// particular the fall penalty being the lowest, is preserved.
class RewardScaler {
 public:
  RewardScaler(std::size_t workers = 1, double gamma = 0.99);
  void observe(std::size_t worker, std::span<const Transition> traj);
  double scale() const;
  void apply(std::span<Transition> traj) const;

 private:
  double gamma_;
  std::vector<double> ret_;
  RunningNorm stats_{1};
};

// One worker's rollout in time order. last_value bootstraps the step after
// the final transition when that transition is not terminal.
GaeResult compute_gae(std::span<const Transition> traj, double gamma, double lambda,
                      double last_value);

// (x - mean) / (std + 1e-8), population std.
void normalize_advantages(std::span<double> adv);

struct LossConfig {
  double clip_eps = 0.2;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
};

struct Sample {
  const double* obs = nullptr;
  const double* raw_action = nullptr;
  double old_log_prob = 0.0;
  double advantage = 0.0;
  double ret = 0.0;
};

struct LossStats {
  double loss = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

// Mean loss over the minibatch:
//   -min(r A, clip(r, 1-eps, 1+eps) A) + c_v (V - R)^2 - c_e H
// and, when grad is non-empty, its gradient w.r.t. model.params().
LossStats ppo_loss(const ActorCritic& model, std::span<const Sample> batch, const LossConfig& cfg,
                   std::span<double> grad);

// Per-sample surrogate term min(r A, clip(r) A).
double clipped_surrogate(double ratio, double advantage, double clip_eps);

class Adam {
 public:
  explicit Adam(std::size_t n = 0, double lr = 3e-4, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8);
  void step(std::span<double> params, std::span<const double> grad);
  double lr = 3e-4;
  std::size_t steps() const { return t_; }

 private:
  double b1_, b2_, eps_;
  std::vector<double> m_, v_;
  std::size_t t_ = 0;
};

// Rescales grad to at most max_norm (L2); returns the norm before clipping.
double clip_grad_norm(std::span<double> grad, double max_norm);

}  // namespace strider::rl
