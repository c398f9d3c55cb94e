#pragma once
// Dense double-precision kernels used by the policy/value networks.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2+FMA
// variant. The active table is chosen once per process from CPUID; setting
// STRIDER_SIMD=scalar (or avx2) in the environment forces a specific one.
// Variants agree to rounding (reassociated sums), not bit-for-bit, so a run
// is only reproducible on the same ISA.

#include <cstddef>
#include <span>
#include <string_view>

namespace strider::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = W x + bias, W row-major rows x cols; bias may be null
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols, const double* x,
               const double* bias, double* y);
  // out += W^T v
  void (*gemv_t_acc)(const double* w, std::size_t rows, std::size_t cols, const double* v,
                     double* out);
  // G += u v^T, G row-major rows x cols
  void (*outer_acc)(double* g, std::size_t rows, std::size_t cols, const double* u,
                    const double* v);
};

const KernelTable& scalar_kernels();
#if defined(STRIDER_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

bool isa_supported(Isa isa);
// Throws std::runtime_error if the ISA is not available on this CPU/build.
const KernelTable& kernels_for(Isa isa);
// Process-wide active table (resolved on first call).
const KernelTable& active();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

}  // namespace strider::simd
