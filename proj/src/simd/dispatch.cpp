#include <cstdlib>
#include <stdexcept>
#include <string>

#include "strider/simd/kernels.hpp"

namespace strider::simd {

namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(STRIDER_HAVE_AVX2) && \
    (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& resolve() {
  if (const char* forced = std::getenv("STRIDER_SIMD")) {
    const std::string name{forced};
    if (name == "scalar") return scalar_kernels();
    if (name == "avx2") return kernels_for(Isa::avx2);
    throw std::runtime_error("simd: unknown STRIDER_SIMD value '" + name + "'");
  }
  return cpu_has_avx2() ? kernels_for(Isa::avx2) : scalar_kernels();
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::runtime_error("simd: ISA " + std::string(isa_name(isa)) + " not supported here");
  }
#if defined(STRIDER_HAVE_AVX2)
  if (isa == Isa::avx2) return avx2_kernels();
#endif
  return scalar_kernels();
}

const KernelTable& active() {
  static const KernelTable& table = resolve();
  return table;
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace strider::simd
