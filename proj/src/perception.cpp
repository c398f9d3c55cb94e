#include "strider/perception.hpp"

#include <cmath>
#include <stdexcept>

namespace strider::perception {

std::array<double, kDescriptorDim> EnvDescriptor::flatten() const {
  return {amp1, amp2, freq1_hz, freq2_hz, phase1_rad, phase2_rad, offset};
}

EnvDescriptor EnvDescriptor::from_fit(const signal::TwoSinusoidFit& fit) {
  EnvDescriptor d;
  d.amp1 = fit.term1.amplitude;
  d.amp2 = fit.term2.amplitude;
  d.freq1_hz = fit.term1.freq_hz;
  d.freq2_hz = fit.term2.freq_hz;
  d.phase1_rad = fit.term1.phase_rad;
  d.phase2_rad = fit.term2.phase_rad;
  d.offset = fit.offset;
  d.degenerate = fit.degenerate;
  return d;
}

EnvDescriptor build_descriptor(const signal::TimeSeries& channel, const signal::BandSpec& band) {
  const auto spec = signal::band_filter(signal::fft_forward(channel), band);
  return EnvDescriptor::from_fit(signal::dominant_pair(spec, band));
}

std::span<const double> StateVector::descriptor_block(std::size_t channel) const {
  if (channel >= kChannels) throw std::out_of_range("perception: channel index out of range");
  return std::span<const double>(values).subspan(channel * kDescriptorDim, kDescriptorDim);
}

std::span<const double> StateVector::action_block() const {
  return std::span<const double>(values).subspan(kChannels * kDescriptorDim, gait::kActionDim);
}

StateVector assemble_state(const EnvDescriptor& gx, const EnvDescriptor& gy, const EnvDescriptor& gz,
                           const EnvDescriptor& ay, const gait::Action& prev_action) {
  StateVector s;
  std::size_t k = 0;
  for (const EnvDescriptor* d : {&gx, &gy, &gz, &ay})
    for (double v : d->flatten()) s.values[k++] = v;
  for (double v : prev_action.encode()) s.values[k++] = v;
  for (std::size_t i = 0; i < kStateDim; ++i) {
    if (!std::isfinite(s.values[i]))
      throw std::invalid_argument("perception: non-finite state value at index " + std::to_string(i));
  }
  return s;
}

std::array<signal::TimeSeries, kChannels> extract_channels(std::span<const sim::ImuSample> window,
                                                           double sample_rate_hz,
                                                           std::int64_t window_index) {
  std::array<signal::TimeSeries, kChannels> out;
  for (auto& ts : out) {
    ts.sample_rate_hz = sample_rate_hz;
    ts.window_index = window_index;
    ts.samples.reserve(window.size());
  }
  for (const auto& s : window) {
    out[kGyroX].samples.push_back(s.gyro.x);
    out[kGyroY].samples.push_back(s.gyro.y);
    out[kGyroZ].samples.push_back(s.gyro.z);
    out[kAccY].samples.push_back(s.acc.y);
  }
  return out;
}

std::array<EnvDescriptor, kChannels> describe_window(std::span<const sim::ImuSample> window,
                                                     double sample_rate_hz,
                                                     const signal::BandSpec& band,
                                                     std::int64_t window_index) {
  const auto ch = extract_channels(window, sample_rate_hz, window_index);
  std::array<EnvDescriptor, kChannels> out;
  for (std::size_t c = 0; c < kChannels; ++c) out[c] = build_descriptor(ch[c], band);
  return out;
}

StateVector build_state(std::span<const sim::ImuSample> window, double sample_rate_hz,
                        const gait::Action& prev_action, const signal::BandSpec& band) {
  const auto d = describe_window(window, sample_rate_hz, band);
  return assemble_state(d[0], d[1], d[2], d[3], prev_action);
}

double descriptor_distance(const std::array<EnvDescriptor, kChannels>& a,
                           const std::array<EnvDescriptor, kChannels>& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < kChannels; ++c) {
    const auto fa = a[c].flatten();
    const auto fb = b[c].flatten();
    for (std::size_t i = 0; i < kDescriptorDim; ++i) {
      double d = fa[i] - fb[i];
      if (i == 4 || i == 5) d = signal::wrap_phase(d);
      s += d * d;
    }
  }
  return std::sqrt(s);
}

std::vector<std::string> descriptor_header() {
  static constexpr std::array<const char*, kDescriptorDim> fields{
      "amp1", "amp2", "freq1_hz", "freq2_hz", "phase1_rad", "phase2_rad", "offset"};
  std::vector<std::string> out;
  for (const char* ch : kChannelNames)
    for (const char* f : fields) out.push_back(std::string(ch) + "." + f);
  return out;
}

std::vector<std::string> state_header() {
  auto out = descriptor_header();
  for (const char* p : {"rho", "theta", "freq"})
    for (std::size_t i = 0; i < gait::kLimbs; ++i) out.push_back(std::string("prev.") + p + std::to_string(i));
  return out;
}

}  // namespace strider::perception
