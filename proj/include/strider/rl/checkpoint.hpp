#pragma once
// Versioned binary checkpoint, all numbers little-endian:
//
//   char[8]  magic "STRDCKPT"
//   u32      version (1)
//   u32      obs_dim, act_dim, hidden, hidden_layers
//   u64      parameter count P
//   f64[P]   parameters, layout [policy net | log_std | value net]
//   f64[A]   action box low, then f64[A] action box high
//   f64      normaliser count, f64 clip
//   f64[O]   normaliser mean, then f64[O] normaliser variance

#include <cstdint>
#include <stdexcept>
#include <string>

#include "strider/rl/policy.hpp"

namespace strider::rl {

inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { io, bad_magic, version, corrupt };
  CheckpointError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Checkpoint {
  ActorCritic model;
  RunningNorm norm;
};

void save_checkpoint(const std::string& path, const ActorCritic& model, const RunningNorm& norm);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace strider::rl
