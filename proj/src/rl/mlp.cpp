#include "strider/rl/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace strider::rl {

std::size_t MlpShape::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layers(); ++l) n += dims[l + 1] * dims[l] + dims[l + 1];
  return n;
}

std::size_t MlpShape::weight_offset(std::size_t layer) const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layer; ++l) n += dims[l + 1] * dims[l] + dims[l + 1];
  return n;
}

std::size_t MlpShape::bias_offset(std::size_t layer) const {
  return weight_offset(layer) + dims[layer + 1] * dims[layer];
}

MlpShape make_mlp_shape(std::size_t in, std::size_t hidden, std::size_t hidden_layers, std::size_t out) {
  if (in == 0 || out == 0 || (hidden_layers > 0 && hidden == 0))
    throw std::invalid_argument("rl: mlp dimensions must be positive");
  MlpShape s;
  s.dims.push_back(in);
  for (std::size_t i = 0; i < hidden_layers; ++i) s.dims.push_back(hidden);
  s.dims.push_back(out);
  return s;
}

void mlp_init(const MlpShape& shape, std::span<double> w, std::mt19937_64& rng, double out_gain) {
  if (w.size() != shape.param_count()) throw std::invalid_argument("rl: mlp parameter size mismatch");
  std::normal_distribution<double> n01(0.0, 1.0);
  for (std::size_t l = 0; l < shape.layers(); ++l) {
    const std::size_t in = shape.dims[l], out = shape.dims[l + 1];
    const double gain = (l + 1 == shape.layers()) ? out_gain : 1.0;
    const double sd = gain / std::sqrt(static_cast<double>(in));
    double* W = w.data() + shape.weight_offset(l);
    for (std::size_t i = 0; i < in * out; ++i) W[i] = sd * n01(rng);
    double* b = w.data() + shape.bias_offset(l);
    for (std::size_t i = 0; i < out; ++i) b[i] = 0.0;
  }
}

std::span<const double> mlp_forward(const MlpShape& shape, std::span<const double> w,
                                    std::span<const double> x, MlpCache& cache,
                                    const simd::KernelTable& k) {
  if (x.size() != shape.input()) throw std::invalid_argument("rl: mlp input size mismatch");
  const std::size_t L = shape.layers();
  cache.act.resize(L + 1);
  cache.act[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t in = shape.dims[l], out = shape.dims[l + 1];
    auto& y = cache.act[l + 1];
    y.resize(out);
    k.gemv(w.data() + shape.weight_offset(l), out, in, cache.act[l].data(), w.data() + shape.bias_offset(l),
           y.data());
    if (l + 1 < L)
      for (double& v : y) v = std::tanh(v);
  }
  return cache.act[L];
}

void mlp_backward(const MlpShape& shape, std::span<const double> w, MlpCache& cache,
                  std::span<const double> grad_out, std::span<double> grad_w,
                  const simd::KernelTable& k) {
  const std::size_t L = shape.layers();
  if (grad_out.size() != shape.output()) throw std::invalid_argument("rl: mlp grad size mismatch");
  if (grad_w.size() != shape.param_count()) throw std::invalid_argument("rl: mlp grad buffer mismatch");
  cache.delta.assign(grad_out.begin(), grad_out.end());
  for (std::size_t l = L; l-- > 0;) {
    const std::size_t in = shape.dims[l], out = shape.dims[l + 1];
    k.outer_acc(grad_w.data() + shape.weight_offset(l), out, in, cache.delta.data(), cache.act[l].data());
    k.axpy(1.0, cache.delta.data(), grad_w.data() + shape.bias_offset(l), out);
    if (l == 0) break;
    cache.scratch.assign(in, 0.0);
    k.gemv_t_acc(w.data() + shape.weight_offset(l), out, in, cache.delta.data(), cache.scratch.data());
    const auto& a = cache.act[l];
    for (std::size_t i = 0; i < in; ++i) cache.scratch[i] *= 1.0 - a[i] * a[i];
    cache.delta.swap(cache.scratch);
  }
}

}  // namespace strider::rl
