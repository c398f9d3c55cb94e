#pragma once
// Fully connected tanh network over a flat parameter array.
//
// Layer l stores W_l (dims[l+1] x dims[l], row-major) followed by b_l. Hidden
// layers use tanh, the output layer is linear.

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "strider/simd/kernels.hpp"

namespace strider::rl {

struct MlpShape {
  std::vector<std::size_t> dims;  // input, hidden..., output

  std::size_t layers() const { return dims.size() - 1; }
  std::size_t input() const { return dims.front(); }
  std::size_t output() const { return dims.back(); }
  std::size_t param_count() const;
  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const;
};

MlpShape make_mlp_shape(std::size_t in, std::size_t hidden, std::size_t hidden_layers, std::size_t out);

// Activations of one forward pass, kept for backprop.
struct MlpCache {
  std::vector<std::vector<double>> act;  // act[0] = input, act.back() = output
  std::vector<double> delta, scratch;
};

// Gaussian fan-in init; the last layer is scaled by out_gain, biases zero.
void mlp_init(const MlpShape& shape, std::span<double> w, std::mt19937_64& rng, double out_gain);

std::span<const double> mlp_forward(const MlpShape& shape, std::span<const double> w,
                                    std::span<const double> x, MlpCache& cache,
                                    const simd::KernelTable& k = simd::active());

// Accumulates dL/dw into grad_w given dL/d(output); uses the cache of the
// matching forward pass.
void mlp_backward(const MlpShape& shape, std::span<const double> w, MlpCache& cache,
                  std::span<const double> grad_out, std::span<double> grad_w,
                  const simd::KernelTable& k = simd::active());

}  // namespace strider::rl
