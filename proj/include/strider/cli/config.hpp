#pragma once
// Run configuration: flat `section.key = value` text, one entry per line,
// `#` starts a comment. Every key has a typed default; unknown keys and
// malformed values are rejected with the key named in the message.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strider/gait.hpp"
#include "strider/reward.hpp"
#include "strider/rl/env.hpp"
#include "strider/rl/trainer.hpp"
#include "strider/sim.hpp"

namespace strider::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  sim::TerrainKind terrain_kind = sim::TerrainKind::flat;
  sim::TerrainParams terrain;
  // "auto" derives the task from the terrain.
  std::optional<reward::TaskKind> task_kind;
  reward::TaskSpec task_refs;  // reference scales only; targets below
  std::array<std::optional<double>, 3> task_target{};
  reward::RewardConfig reward;
  double reward_k = 1.0, reward_alpha = 10.0, reward_gamma = 0.5;
  std::array<std::optional<double>, 3> reward_beta{};
  gait::GaitConfig gait;
  sim::SimConfig sim;
  rl::TrainerConfig trainer;
  int checkpoint_every = 10;  // updates; 0 writes only the final model
  int eval_episodes = 100;
  std::uint64_t seed = 0;
  std::string output_dir = "runs";
};

// Applies one key/value pair; throws ConfigError naming the key.
void set_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses the text format; errors carry the source and line number.
std::map<std::string, std::string> parse_entries(const std::string& text, const std::string& source);

class MissingFile : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Reads and applies a config file; MissingFile if it cannot be opened.
void apply_file(RunConfig& cfg, const std::string& path);

// Derived settings and cross-field checks; throws ConfigError.
void validate(const RunConfig& cfg);

// Resolved config text: every key in sorted order, including defaults.
std::string to_text(const RunConfig& cfg);
std::vector<std::string> known_keys();

sim::Terrain make_terrain(const RunConfig& cfg);
reward::TaskSpec make_task(const RunConfig& cfg, const sim::Terrain& terrain);
reward::RewardConfig make_reward(const RunConfig& cfg, const reward::TaskSpec& task);
rl::LocomotionConfig make_env_config(const RunConfig& cfg);

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace strider::cli
