#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "strider/signal.hpp"

namespace strider::signal {

namespace {

using cd = std::complex<double>;

bool is_pow2(std::size_t n) { return n && !(n & (n - 1)); }

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Iterative radix-2 with precomputed twiddles, forward sign.
struct Radix2Plan {
  std::size_t n = 0;
  std::vector<cd> twiddle;  // e^{-2 pi i k / n}, k < n/2
  std::vector<std::uint32_t> rev;

  explicit Radix2Plan(std::size_t size) : n(size), twiddle(size / 2), rev(size) {
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double a = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
      twiddle[k] = {std::cos(a), std::sin(a)};
    }
    unsigned bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t r = 0;
      for (unsigned b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= 1u << (bits - 1 - b);
      rev[i] = r;
    }
  }

  void run(std::vector<cd>& a, bool inverse) const {
    for (std::size_t i = 0; i < n; ++i)
      if (i < rev[i]) std::swap(a[i], a[rev[i]]);
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = n / len;
      for (std::size_t i = 0; i < n; i += len) {
        for (std::size_t j = 0; j < half; ++j) {
          cd w = twiddle[j * step];
          if (inverse) w = std::conj(w);
          const cd u = a[i + j];
          const cd v = a[i + j + half] * w;
          a[i + j] = u + v;
          a[i + j + half] = u - v;
        }
      }
    }
  }
};

// Bluestein chirp-z for arbitrary n via a power-of-two circular convolution.
struct BluesteinPlan {
  std::size_t n = 0;
  std::vector<cd> chirp;      // e^{-i pi k^2 / n}
  std::vector<cd> kernel_ft;  // FFT of conj(chirp), wrapped
  std::unique_ptr<Radix2Plan> inner;

  explicit BluesteinPlan(std::size_t size) : n(size), chirp(size) {
    const std::size_t m = next_pow2(2 * n - 1);
    inner = std::make_unique<Radix2Plan>(m);
    const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t k = 0; k < n; ++k) {
      // k^2 mod 2n keeps the angle small and exact.
      const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % two_n;
      const double a = -kPi * static_cast<double>(k2) / static_cast<double>(n);
      chirp[k] = {std::cos(a), std::sin(a)};
    }
    kernel_ft.assign(m, cd{});
    kernel_ft[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
      kernel_ft[k] = std::conj(chirp[k]);
      kernel_ft[m - k] = std::conj(chirp[k]);
    }
    inner->run(kernel_ft, false);
  }

  void run(std::vector<cd>& a) const {
    const std::size_t m = inner->n;
    std::vector<cd> buf(m, cd{});
    for (std::size_t k = 0; k < n; ++k) buf[k] = a[k] * chirp[k];
    inner->run(buf, false);
    for (std::size_t k = 0; k < m; ++k) buf[k] *= kernel_ft[k];
    inner->run(buf, true);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = buf[k] * scale * chirp[k];
  }
};

struct PlanCache {
  std::unordered_map<std::size_t, std::unique_ptr<Radix2Plan>> radix2;
  std::unordered_map<std::size_t, std::unique_ptr<BluesteinPlan>> bluestein;
};

PlanCache& cache() {
  thread_local PlanCache c;
  return c;
}

void forward_inplace(std::vector<cd>& a) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  auto& c = cache();
  if (is_pow2(n)) {
    auto& plan = c.radix2[n];
    if (!plan) plan = std::make_unique<Radix2Plan>(n);
    plan->run(a, false);
  } else {
    auto& plan = c.bluestein[n];
    if (!plan) plan = std::make_unique<BluesteinPlan>(n);
    plan->run(a);
  }
}

}  // namespace

std::vector<std::complex<double>> complex_dft(std::span<const std::complex<double>> x,
                                              bool inverse) {
  std::vector<cd> a(x.begin(), x.end());
  if (!inverse) {
    forward_inplace(a);
    return a;
  }
  // conj(F(conj(x))) gives the unscaled inverse.
  for (auto& v : a) v = std::conj(v);
  forward_inplace(a);
  for (auto& v : a) v = std::conj(v);
  return a;
}

}  // namespace strider::signal
