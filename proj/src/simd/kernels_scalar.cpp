#include "strider/simd/kernels.hpp"

namespace strider::simd {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* w, std::size_t rows, std::size_t cols, const double* x,
                 const double* bias, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double acc = dot_scalar(w + r * cols, x, cols);
    y[r] = bias ? acc + bias[r] : acc;
  }
}

void gemv_t_acc_scalar(const double* w, std::size_t rows, std::size_t cols, const double* v,
                       double* out) {
  for (std::size_t r = 0; r < rows; ++r) axpy_scalar(v[r], w + r * cols, out, cols);
}

void outer_acc_scalar(double* g, std::size_t rows, std::size_t cols, const double* u,
                      const double* v) {
  for (std::size_t r = 0; r < rows; ++r) axpy_scalar(u[r], v, g + r * cols, cols);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, dot_scalar, axpy_scalar, gemv_scalar,
                                 gemv_t_acc_scalar, outer_acc_scalar};
  return table;
}

}  // namespace strider::simd
