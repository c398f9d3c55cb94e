#include "strider/rl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strider::rl {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)
}

std::vector<double> ActionBox::centre() const {
  std::vector<double> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (low[i] + high[i]);
  return c;
}

std::vector<double> ActionBox::half_width() const {
  std::vector<double> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (high[i] - low[i]);
  return c;
}

RunningNorm::RunningNorm(std::size_t dim) : mean(dim, 0.0), var(dim, 1.0) {}

void RunningNorm::update(std::span<const double> x) {
  RunningNorm one(x.size());
  one.count = 1.0;
  std::copy(x.begin(), x.end(), one.mean.begin());
  std::fill(one.var.begin(), one.var.end(), 0.0);
  merge(one);
}

void RunningNorm::merge(const RunningNorm& b) {
  if (b.count <= 0.0) return;
  if (b.mean.size() != mean.size()) throw std::invalid_argument("rl: normalizer size mismatch");
  if (count <= 0.0) {
    count = b.count;
    mean = b.mean;
    var = b.var;
    return;
  }
  const double n = count + b.count;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double d = b.mean[i] - mean[i];
    const double m2 = var[i] * count + b.var[i] * b.count + d * d * count * b.count / n;
    mean[i] += d * b.count / n;
    var[i] = m2 / n;
  }
  count = n;
}

void RunningNorm::normalize(std::span<const double> x, std::span<double> out) const {
  if (x.size() != mean.size() || out.size() != x.size())
    throw std::invalid_argument("rl: normalizer input size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = (x[i] - mean[i]) / std::sqrt(var[i] + 1e-8);
    out[i] = std::clamp(z, -clip, clip);
  }
}

ActorCritic::ActorCritic(PolicyShape shape, ActionBox box)
    : shape_(shape),
      box_(std::move(box)),
      pi_(make_mlp_shape(shape.obs_dim, shape.hidden, shape.hidden_layers, shape.act_dim)),
      v_(make_mlp_shape(shape.obs_dim, shape.hidden, shape.hidden_layers, 1)) {
  if (box_.dim() != shape.act_dim || box_.high.size() != shape.act_dim)
    throw std::invalid_argument("rl: action box does not match the action dimension");
  for (std::size_t i = 0; i < box_.dim(); ++i)
    if (!(box_.high[i] > box_.low[i])) throw std::invalid_argument("rl: empty action box");
  params_.assign(pi_.param_count() + shape.act_dim + v_.param_count(), 0.0);
  centre_ = box_.centre();
  scale_ = box_.half_width();
}

void ActorCritic::init(std::uint64_t seed, double init_log_std) {
  std::mt19937_64 rng(seed);
  mlp_init(pi_, std::span<double>(params_).subspan(0, pi_.param_count()), rng, 0.01);
  std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(log_std_offset()), shape_.act_dim,
              init_log_std);
  mlp_init(v_, std::span<double>(params_).subspan(value_offset(), v_.param_count()), rng, 1.0);
  clamp_log_std();
}

std::span<const double> ActorCritic::pi_params() const {
  return std::span<const double>(params_).subspan(0, pi_.param_count());
}
std::span<const double> ActorCritic::v_params() const {
  return std::span<const double>(params_).subspan(value_offset(), v_.param_count());
}
std::span<const double> ActorCritic::log_std() const {
  return std::span<const double>(params_).subspan(log_std_offset(), shape_.act_dim);
}

void ActorCritic::clamp_log_std() {
  for (std::size_t i = 0; i < shape_.act_dim; ++i) {
    double& v = params_[log_std_offset() + i];
    v = std::clamp(v, kLogStdMin, kLogStdMax);
  }
}

std::vector<double> ActorCritic::mean(std::span<const double> obs, MlpCache& cache) const {
  const auto out = mlp_forward(pi_, pi_params(), obs, cache);
  std::vector<double> m(shape_.act_dim);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = centre_[i] + scale_[i] * out[i];
  return m;
}

double ActorCritic::value(std::span<const double> obs, MlpCache& cache) const {
  return mlp_forward(v_, v_params(), obs, cache)[0];
}

double ActorCritic::stddev(std::size_t i) const {
  return scale_[i] * std::exp(std::clamp(params_[log_std_offset() + i], kLogStdMin, kLogStdMax));
}

double ActorCritic::log_prob(std::span<const double> raw, std::span<const double> mean) const {
  std::vector<double> sd(shape_.act_dim);
  for (std::size_t i = 0; i < sd.size(); ++i) sd[i] = stddev(i);
  return gaussian_log_prob(raw, mean, sd);
}

double ActorCritic::entropy() const {
  double h = 0.0;
  for (std::size_t i = 0; i < shape_.act_dim; ++i) h += std::log(stddev(i)) + 0.5 + kHalfLog2Pi;
  return h;
}

double gaussian_log_prob(std::span<const double> x, std::span<const double> mean,
                         std::span<const double> sd) {
  if (x.size() != mean.size() || x.size() != sd.size())
    throw std::invalid_argument("rl: log_prob size mismatch");
  double lp = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = (x[i] - mean[i]) / sd[i];
    lp += -0.5 * z * z - std::log(sd[i]) - kHalfLog2Pi;
  }
  return lp;
}

PolicySample policy_sample(const ActorCritic& model, std::span<const double> obs,
                           std::mt19937_64& rng, MlpCache& cache) {
  PolicySample s;
  s.mean = model.mean(obs, cache);
  for (double m : s.mean)
    if (!std::isfinite(m)) throw std::runtime_error("rl: non-finite policy output");
  std::normal_distribution<double> n01(0.0, 1.0);
  s.raw.resize(s.mean.size());
  for (std::size_t i = 0; i < s.raw.size(); ++i) s.raw[i] = s.mean[i] + model.stddev(i) * n01(rng);
  s.log_prob = model.log_prob(s.raw, s.mean);
  return s;
}

}  // namespace strider::rl
