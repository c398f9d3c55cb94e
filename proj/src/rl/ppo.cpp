#include "strider/rl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strider::rl {

RewardScaler::RewardScaler(std::size_t workers, double gamma) : gamma_(gamma), ret_(workers, 0.0) {}

void RewardScaler::observe(std::size_t worker, std::span<const Transition> traj) {
  double& g = ret_.at(worker);
  for (const auto& tr : traj) {
    g = g * gamma_ + tr.reward;
    stats_.update(std::span<const double>(&g, 1));
    if (tr.terminal) g = 0.0;
  }
}

double RewardScaler::scale() const { return 1.0 / std::sqrt(stats_.var[0] + 1e-8); }

void RewardScaler::apply(std::span<Transition> traj) const {
  const double k = scale();
  for (auto& tr : traj) tr.reward *= k;
}

GaeResult compute_gae(std::span<const Transition> traj, double gamma, double lambda,
                      double last_value) {
  GaeResult r;
  const std::size_t n = traj.size();
  r.advantages.assign(n, 0.0);
  r.returns.assign(n, 0.0);
  double next_adv = 0.0;
  double next_value = last_value;
  for (std::size_t t = n; t-- > 0;) {
    const auto& tr = traj[t];
    const double live = tr.terminal ? 0.0 : 1.0;
    const double delta = tr.reward + gamma * next_value * live - tr.value;
    next_adv = delta + gamma * lambda * live * next_adv;
    r.advantages[t] = next_adv;
    r.returns[t] = next_adv + tr.value;
    next_value = tr.value;
  }
  return r;
}

void normalize_advantages(std::span<double> adv) {
  if (adv.empty()) return;
  double mean = 0.0;
  for (double a : adv) mean += a;
  mean /= static_cast<double>(adv.size());
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / static_cast<double>(adv.size()));
  for (double& a : adv) a = (a - mean) / (sd + 1e-8);
}

double clipped_surrogate(double ratio, double advantage, double clip_eps) {
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  return std::min(ratio * advantage, clipped * advantage);
}

LossStats ppo_loss(const ActorCritic& model, std::span<const Sample> batch, const LossConfig& cfg,
                   std::span<double> grad) {
  if (batch.empty()) throw std::invalid_argument("rl: empty minibatch");
  const bool want_grad = !grad.empty();
  if (want_grad && grad.size() != model.params().size())
    throw std::invalid_argument("rl: gradient buffer size mismatch");
  const auto& sh = model.shape();
  const std::size_t A = sh.act_dim;
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  const auto box_scale = model.box().half_width();

  std::vector<double> sd(A), ls(A);
  for (std::size_t i = 0; i < A; ++i) {
    sd[i] = model.stddev(i);
    ls[i] = model.log_std()[i];
  }
  std::span<double> g_pi, g_ls, g_v;
  if (want_grad) {
    g_pi = grad.subspan(0, model.pi_shape().param_count());
    g_ls = grad.subspan(model.log_std_offset(), A);
    g_v = grad.subspan(model.value_offset(), model.v_shape().param_count());
  }

  LossStats st;
  MlpCache cache;
  std::vector<double> g_out(A), g_val(1);
  for (const auto& s : batch) {
    const std::span<const double> obs(s.obs, sh.obs_dim);
    const std::span<const double> act(s.raw_action, A);
    const auto mu = model.mean(obs, cache);
    const double lp = gaussian_log_prob(act, mu, sd);
    const double log_ratio = lp - s.old_log_prob;
    const double ratio = std::exp(log_ratio);
    const double surr = clipped_surrogate(ratio, s.advantage, cfg.clip_eps);
    st.policy_loss -= surr * inv_b;
    st.approx_kl += ((ratio - 1.0) - log_ratio) * inv_b;
    if (std::abs(ratio - 1.0) > cfg.clip_eps) st.clip_fraction += inv_b;

    // d(-surr)/d(lp): the unclipped branch is active when it is the min.
    const bool unclipped = ratio * s.advantage <= std::clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps) * s.advantage;
    const double dlp = unclipped ? -ratio * s.advantage * inv_b : 0.0;
    if (want_grad && dlp != 0.0) {
      for (std::size_t i = 0; i < A; ++i) {
        const double z = (act[i] - mu[i]) / sd[i];
        // d lp / d mu_i = z / sd_i, d mu_i / d net_i = box scale
        g_out[i] = dlp * z / sd[i] * box_scale[i];
        if (ls[i] >= kLogStdMin && ls[i] <= kLogStdMax) g_ls[i] += dlp * (z * z - 1.0);
      }
      mlp_backward(model.pi_shape(), model.pi_params(), cache, g_out, g_pi);
    }

    const double v = model.value(obs, cache);
    const double err = v - s.ret;
    st.value_loss += err * err * inv_b;
    if (want_grad) {
      g_val[0] = 2.0 * cfg.value_coef * err * inv_b;
      mlp_backward(model.v_shape(), model.v_params(), cache, g_val, g_v);
    }
  }
  st.entropy = model.entropy();
  if (want_grad && cfg.entropy_coef != 0.0) {
    for (std::size_t i = 0; i < A; ++i)
      if (ls[i] >= kLogStdMin && ls[i] <= kLogStdMax) g_ls[i] -= cfg.entropy_coef;
  }
  st.loss = st.policy_loss + cfg.value_coef * st.value_loss - cfg.entropy_coef * st.entropy;
  if (!std::isfinite(st.loss)) throw std::runtime_error("rl: non-finite loss");
  return st;
}

Adam::Adam(std::size_t n, double lr_, double beta1, double beta2, double eps)
    : lr(lr_), b1_(beta1), b2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("rl: adam size mismatch");
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1_ * m_[i] + (1.0 - b1_) * grad[i];
    v_[i] = b2_ * v_[i] + (1.0 - b2_) * grad[i] * grad[i];
    params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

double clip_grad_norm(std::span<double> grad, double max_norm) {
  double s = 0.0;
  for (double g : grad) s += g * g;
  const double norm = std::sqrt(s);
  if (max_norm > 0.0 && norm > max_norm) {
    const double k = max_norm / norm;
    for (double& g : grad) g *= k;
  }
  return norm;
}

}  // namespace strider::rl
