#pragma once
// Environment descriptors from IMU windows and the policy state built on them.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "strider/gait.hpp"
#include "strider/signal.hpp"
#include "strider/sim.hpp"

namespace strider::perception {

inline constexpr std::size_t kDescriptorDim = 7;
inline constexpr std::size_t kChannels = 4;
inline constexpr std::size_t kStateDim = kChannels * kDescriptorDim + gait::kActionDim;

// Channel order in the state: gyro_x, gyro_y, gyro_z, acc_y.
enum Channel : int { kGyroX = 0, kGyroY = 1, kGyroZ = 2, kAccY = 3 };
inline constexpr std::array<const char*, kChannels> kChannelNames{"gyro_x", "gyro_y", "gyro_z",
                                                                  "acc_y"};

struct EnvDescriptor {
  double amp1 = 0.0;
  double amp2 = 0.0;
  double freq1_hz = 0.0;
  double freq2_hz = 0.0;
  double phase1_rad = 0.0;
  double phase2_rad = 0.0;
  double offset = 0.0;
  bool degenerate = false;

  // [amp1, amp2, freq1, freq2, phase1, phase2, offset]
  std::array<double, kDescriptorDim> flatten() const;
  static EnvDescriptor from_fit(const signal::TwoSinusoidFit& fit);
};

EnvDescriptor build_descriptor(const signal::TimeSeries& channel,
                               const signal::BandSpec& band = signal::kRetentionBand);

struct StateVector {
  std::array<double, kStateDim> values{};

  std::span<const double> descriptor_block(std::size_t channel) const;
  std::span<const double> action_block() const;
};

// Throws std::invalid_argument on any non-finite input.
StateVector assemble_state(const EnvDescriptor& gx, const EnvDescriptor& gy, const EnvDescriptor& gz,
                           const EnvDescriptor& ay, const gait::Action& prev_action);

// The four state channels of one IMU window.
std::array<signal::TimeSeries, kChannels> extract_channels(std::span<const sim::ImuSample> window,
                                                           double sample_rate_hz,
                                                           std::int64_t window_index = 0);

std::array<EnvDescriptor, kChannels> describe_window(std::span<const sim::ImuSample> window,
                                                     double sample_rate_hz,
                                                     const signal::BandSpec& band = signal::kRetentionBand,
                                                     std::int64_t window_index = 0);

StateVector build_state(std::span<const sim::ImuSample> window, double sample_rate_hz,
                        const gait::Action& prev_action,
                        const signal::BandSpec& band = signal::kRetentionBand);

// L2 distance between two descriptor sets (28 values); phase differences
// are wrapped into [-pi, pi) before squaring.
double descriptor_distance(const std::array<EnvDescriptor, kChannels>& a,
                           const std::array<EnvDescriptor, kChannels>& b);

// Column names for the 40 state values, e.g. "gyro_x.amp1", "prev.rho0".
std::vector<std::string> state_header();
std::vector<std::string> descriptor_header();

}  // namespace strider::perception
