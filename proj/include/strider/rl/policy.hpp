#pragma once
// Gaussian actor-critic over raw action space.
//
// mean(s) = centre + scale * net(s), std = scale * exp(log_std), with the
// action box centre/half-width as centre/scale so the unit-free network
// output maps onto every component's range. Raw samples are clamped by the
// environment, not here.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "strider/rl/mlp.hpp"

namespace strider::rl {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 1.0;

struct ActionBox {
  std::vector<double> low, high;
  std::size_t dim() const { return low.size(); }
  std::vector<double> centre() const;
  std::vector<double> half_width() const;
};

struct PolicyShape {
  std::size_t obs_dim = 40;
  std::size_t act_dim = 12;
  std::size_t hidden = 64;
  std::size_t hidden_layers = 2;
};

// Running mean/variance over observation dimensions (Chan et al. merge).
struct RunningNorm {
  double count = 0.0;
  std::vector<double> mean, var;
  double clip = 10.0;

  explicit RunningNorm(std::size_t dim = 0);
  void update(std::span<const double> x);
  void merge(const RunningNorm& batch);
  void normalize(std::span<const double> x, std::span<double> out) const;
};

class ActorCritic {
 public:
  ActorCritic() = default;
  ActorCritic(PolicyShape shape, ActionBox box);

  void init(std::uint64_t seed, double init_log_std);

  const PolicyShape& shape() const { return shape_; }
  const ActionBox& box() const { return box_; }
  const MlpShape& pi_shape() const { return pi_; }
  const MlpShape& v_shape() const { return v_; }

  // Flat layout: [policy net | log_std | value net]
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t log_std_offset() const { return pi_.param_count(); }
  std::size_t value_offset() const { return pi_.param_count() + shape_.act_dim; }
  std::span<const double> pi_params() const;
  std::span<const double> v_params() const;
  std::span<const double> log_std() const;

  // Clamps log_std into [kLogStdMin, kLogStdMax].
  void clamp_log_std();

  std::vector<double> mean(std::span<const double> obs, MlpCache& cache) const;
  double value(std::span<const double> obs, MlpCache& cache) const;
  double stddev(std::size_t i) const;
  double log_prob(std::span<const double> raw, std::span<const double> mean) const;
  double entropy() const;

 private:
  PolicyShape shape_;
  ActionBox box_;
  MlpShape pi_, v_;
  std::vector<double> params_;
  std::vector<double> centre_, scale_;
};

struct PolicySample {
  std::vector<double> raw;
  double log_prob = 0.0;
  std::vector<double> mean;
};

// Throws std::runtime_error on non-finite network output.
PolicySample policy_sample(const ActorCritic& model, std::span<const double> obs,
                           std::mt19937_64& rng, MlpCache& cache);

// Log-density of a diagonal Gaussian.
double gaussian_log_prob(std::span<const double> x, std::span<const double> mean,
                         std::span<const double> stddev);

}  // namespace strider::rl
