#pragma once
// Spectral pipeline for one IMU channel window: transform, band-limit,
// invert, and summarise the band-limited signal by its two strongest tones.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace strider::signal {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr std::size_t kMinWindow = 8;

/// One channel sampled over one gait-stride window.
struct TimeSeries {
  std::vector<double> samples;
  double sample_rate_hz = 100.0;
  std::int64_t window_index = 0;
};

/// Throws std::invalid_argument on short windows, non-finite samples or a
/// non-positive rate.
void validate(const TimeSeries& x);

/// Non-negative half spectrum. Bins are amplitude-normalised: a unit sinusoid
/// sitting exactly on bin k > 0 has |bins[k]| == 1, a constant c gives
/// bins[0] == c.
struct Spectrum {
  std::vector<std::complex<double>> bins;
  std::vector<double> bin_freq_hz;
  std::size_t window_len = 0;
  double sample_rate_hz = 0.0;
  // DC level of the unfiltered window; band_filter leaves it alone so the
  // offset survives a band that excludes 0 Hz.
  double dc_offset = 0.0;
};

struct BandSpec {
  double lo_hz = 0.1;
  double hi_hz = 10.0;

  bool contains(double f) const { return f >= lo_hz && f <= hi_hz; }
  double width() const { return hi_hz - lo_hz; }
};

inline constexpr BandSpec kRetentionBand{0.1, 10.0};
inline constexpr BandSpec kStrideFrequencyBand{0.5, 2.0};

void validate(const BandSpec& band);

/// amplitude * sin(2*pi*freq_hz*t + phase_rad)
struct SinusoidTerm {
  double amplitude = 0.0;
  double freq_hz = 0.0;
  double phase_rad = 0.0;
};

struct TwoSinusoidFit {
  SinusoidTerm term1;  // larger amplitude
  SinusoidTerm term2;
  double offset = 0.0;
  // Fewer than two non-negligible in-band bins; missing terms are fillers.
  bool degenerate = false;
};

/// Wrap into [-pi, pi).
double wrap_phase(double rad);

// Unnormalised complex DFT of any length >= 1 (radix-2 for powers of two,
// Bluestein otherwise). inverse=true uses e^{+i...} and still does not scale.
std::vector<std::complex<double>> complex_dft(std::span<const std::complex<double>> x,
                                              bool inverse = false);

Spectrum fft_forward(const TimeSeries& x);

/// Zeroes every bin outside [lo, hi]; in-band bins are copied untouched.
Spectrum band_filter(const Spectrum& s, const BandSpec& band);

/// Real window of the original length. Throws std::invalid_argument when the
/// half spectrum implies an imaginary component above 1e-6.
TimeSeries ifft_inverse(const Spectrum& s);

/// Two largest in-band bins (DC excluded) as sine terms; offset is the
/// unfiltered DC. Amplitude ties go to the lower frequency.
TwoSinusoidFit dominant_pair(const Spectrum& s, const BandSpec& band);

double evaluate_fit(const TwoSinusoidFit& fit, double t_s);

/// One sine term per nonzero bin k >= 1. Summed with Re(bins[0]) at
/// t = n / sample_rate they reproduce ifft_inverse(s).
std::vector<SinusoidTerm> reconstruct_series(const Spectrum& s);

double evaluate_terms(std::span<const SinusoidTerm> terms, double t_s);

// t_seconds,value CSV. Reading infers the sample rate from the time column
// and requires uniform spacing.
void write_timeseries_csv(std::ostream& out, const TimeSeries& x, double t0_s = 0.0);
TimeSeries read_timeseries_csv(std::istream& in);

}  // namespace strider::signal
