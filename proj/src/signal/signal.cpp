#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "strider/csv.hpp"
#include "strider/signal.hpp"

namespace strider::signal {

namespace {

using cd = std::complex<double>;

// Bins below this fraction of the strongest in-band bin count as empty. This
// absorbs transform round-off so a pure tone reads as a single term.
constexpr double kNegligibleRel = 1e-9;

bool is_nyquist(const Spectrum& s, std::size_t k) {
  return s.window_len % 2 == 0 && k == s.window_len / 2;
}

// Amplitude of the real sinusoid that bin k contributes to the time signal.
double term_amplitude(const Spectrum& s, std::size_t k) {
  const double a = std::abs(s.bins[k]);
  return is_nyquist(s, k) ? 0.5 * a : a;
}

SinusoidTerm bin_term(const Spectrum& s, std::size_t k) {
  // Re(A e^{i psi} e^{i w t}) = A sin(w t + psi + pi/2)
  return {term_amplitude(s, k), s.bin_freq_hz[k], wrap_phase(std::arg(s.bins[k]) + kPi / 2.0)};
}

void check_spectrum(const Spectrum& s) {
  if (s.window_len < 1 || s.bins.size() != s.window_len / 2 + 1 ||
      s.bin_freq_hz.size() != s.bins.size()) {
    throw std::invalid_argument("signal: spectrum shape does not match its window length");
  }
}

}  // namespace

double wrap_phase(double rad) {
  double w = std::fmod(rad + kPi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  w -= kPi;
  // fmod can land exactly on +pi through rounding
  return w >= kPi ? -kPi : w;
}

void validate(const TimeSeries& x) {
  if (x.samples.size() < kMinWindow) {
    throw std::invalid_argument("signal: window has " + std::to_string(x.samples.size()) +
                                " samples, need at least " + std::to_string(kMinWindow));
  }
  if (!(x.sample_rate_hz > 0.0) || !std::isfinite(x.sample_rate_hz)) {
    throw std::invalid_argument("signal: sample rate must be positive and finite");
  }
  for (std::size_t i = 0; i < x.samples.size(); ++i) {
    if (!std::isfinite(x.samples[i])) {
      throw std::invalid_argument("signal: non-finite sample at index " + std::to_string(i));
    }
  }
}

void validate(const BandSpec& band) {
  if (!(band.lo_hz >= 0.0) || !(band.hi_hz > band.lo_hz) || !std::isfinite(band.hi_hz)) {
    throw std::invalid_argument("signal: band requires 0 <= lo < hi");
  }
}

Spectrum fft_forward(const TimeSeries& x) {
  validate(x);
  const std::size_t n = x.samples.size();
  std::vector<cd> buf(x.samples.begin(), x.samples.end());
  const auto full = complex_dft(buf, false);

  Spectrum s;
  s.window_len = n;
  s.sample_rate_hz = x.sample_rate_hz;
  const std::size_t half = n / 2 + 1;
  s.bins.resize(half);
  s.bin_freq_hz.resize(half);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < half; ++k) {
    s.bins[k] = full[k] * (k == 0 ? 1.0 / nd : 2.0 / nd);
    s.bin_freq_hz[k] = static_cast<double>(k) * x.sample_rate_hz / nd;
  }
  s.dc_offset = s.bins[0].real();
  return s;
}

Spectrum band_filter(const Spectrum& s, const BandSpec& band) {
  check_spectrum(s);
  validate(band);
  Spectrum out = s;
  for (std::size_t k = 0; k < out.bins.size(); ++k) {
    if (!band.contains(out.bin_freq_hz[k])) out.bins[k] = cd{0.0, 0.0};
  }
  return out;
}

TimeSeries ifft_inverse(const Spectrum& s) {
  check_spectrum(s);
  const std::size_t n = s.window_len;
  const double nd = static_cast<double>(n);
  std::vector<cd> full(n, cd{});
  full[0] = s.bins[0] * nd;
  for (std::size_t k = 1; k < s.bins.size(); ++k) {
    full[k] = s.bins[k] * (nd / 2.0);
    if (n - k != k) full[n - k] = std::conj(full[k]);
  }
  const auto time = complex_dft(full, true);

  TimeSeries out;
  out.sample_rate_hz = s.sample_rate_hz;
  out.samples.resize(n);
  double max_imag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = time[i].real() / nd;
    max_imag = std::max(max_imag, std::abs(time[i].imag() / nd));
  }
  if (max_imag > 1e-6) {
    throw std::invalid_argument("signal: spectrum implies an imaginary time signal (|imag| = " +
                                std::to_string(max_imag) + ")");
  }
  return out;
}

TwoSinusoidFit dominant_pair(const Spectrum& s, const BandSpec& band) {
  check_spectrum(s);
  validate(band);

  std::vector<SinusoidTerm> candidates;
  double strongest = 0.0;
  for (std::size_t k = 1; k < s.bins.size(); ++k) {
    if (!band.contains(s.bin_freq_hz[k])) continue;
    strongest = std::max(strongest, term_amplitude(s, k));
  }
  for (std::size_t k = 1; k < s.bins.size(); ++k) {
    if (!band.contains(s.bin_freq_hz[k])) continue;
    const double a = term_amplitude(s, k);
    if (a > 0.0 && a > kNegligibleRel * strongest) candidates.push_back(bin_term(s, k));
  }

  const auto stronger = [](const SinusoidTerm& a, const SinusoidTerm& b) {
    if (a.amplitude != b.amplitude) return a.amplitude > b.amplitude;
    return a.freq_hz < b.freq_hz;
  };
  const std::size_t keep = std::min<std::size_t>(2, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), stronger);

  TwoSinusoidFit fit;
  fit.offset = s.dc_offset;
  fit.degenerate = candidates.size() < 2;
  const double filler_lo = band.lo_hz + 0.25 * band.width();
  const double filler_hi = band.lo_hz + 0.75 * band.width();
  if (!candidates.empty()) {
    fit.term1 = candidates[0];
  } else {
    fit.term1 = {0.0, filler_lo, 0.0};
  }
  if (candidates.size() >= 2) {
    fit.term2 = candidates[1];
  } else {
    const double f = fit.term1.freq_hz == filler_hi ? filler_lo : filler_hi;
    fit.term2 = {0.0, f, 0.0};
  }
  return fit;
}

double evaluate_fit(const TwoSinusoidFit& fit, double t_s) {
  const auto eval = [t_s](const SinusoidTerm& term) {
    return term.amplitude * std::sin(kTwoPi * term.freq_hz * t_s + term.phase_rad);
  };
  return eval(fit.term1) + eval(fit.term2) + fit.offset;
}

std::vector<SinusoidTerm> reconstruct_series(const Spectrum& s) {
  check_spectrum(s);
  std::vector<SinusoidTerm> terms;
  for (std::size_t k = 1; k < s.bins.size(); ++k) {
    if (s.bins[k] != cd{0.0, 0.0}) terms.push_back(bin_term(s, k));
  }
  return terms;
}

double evaluate_terms(std::span<const SinusoidTerm> terms, double t_s) {
  double v = 0.0;
  for (const auto& term : terms) {
    v += term.amplitude * std::sin(kTwoPi * term.freq_hz * t_s + term.phase_rad);
  }
  return v;
}

void write_timeseries_csv(std::ostream& out, const TimeSeries& x, double t0_s) {
  out << "t_seconds,value\n";
  for (std::size_t i = 0; i < x.samples.size(); ++i) {
    out << csv::num(t0_s + static_cast<double>(i) / x.sample_rate_hz) << ','
        << csv::num(x.samples[i]) << '\n';
  }
}

TimeSeries read_timeseries_csv(std::istream& in) {
  const auto table = csv::read_numeric(in, "timeseries");
  const std::size_t tc = table.column("t_seconds");
  const std::size_t vc = table.column("value");
  if (table.rows.size() < 2) throw csv::CsvError("timeseries", 2, 0, "need at least two rows");
  TimeSeries x;
  const double span = table.rows.back()[tc] - table.rows.front()[tc];
  const double dt = span / static_cast<double>(table.rows.size() - 1);
  if (!(dt > 0.0)) throw csv::CsvError("timeseries", 2, tc + 1, "time column must increase");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i > 0) {
      const double step = table.rows[i][tc] - table.rows[i - 1][tc];
      if (std::abs(step - dt) > 0.01 * dt) {
        // +2: header line plus 1-based numbering (comments are not counted)
        throw csv::CsvError("timeseries", i + 2, tc + 1, "non-uniform sample spacing");
      }
    }
    x.samples.push_back(table.rows[i][vc]);
  }
  x.sample_rate_hz = 1.0 / dt;
  return x;
}

}  // namespace strider::signal
