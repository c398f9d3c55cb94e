#include "strider/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "strider/csv.hpp"

namespace strider::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* expect) {
  throw ConfigError("config: " + key + ": expected " + expect + ", got '" + value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (v.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(out)) bad(key, v, "a finite number");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (v.empty() || r.ec != std::errc() || r.ptr != end) bad(key, v, "an integer");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (v.empty() || r.ec != std::errc() || r.ptr != end) bad(key, v, "a non-negative integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad(key, v, "true or false");
}

struct Entry {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

template <typename M>
Entry real(M m) {
  return {[m](const RunConfig& c) { return csv::num(m(const_cast<RunConfig&>(c))); },
          [m](RunConfig& c, const std::string& k, const std::string& v) { m(c) = to_double(k, v); }};
}

template <typename M>
Entry integer(M m) {
  return {[m](const RunConfig& c) { return std::to_string(m(const_cast<RunConfig&>(c))); },
          [m](RunConfig& c, const std::string& k, const std::string& v) {
            using T = std::remove_reference_t<decltype(m(c))>;
            const long long x = to_int(k, v);
            if (x < static_cast<long long>(std::numeric_limits<T>::min()) ||
                static_cast<unsigned long long>(std::max(x, 0LL)) >
                    static_cast<unsigned long long>(std::numeric_limits<T>::max()))
              bad(k, v, "an integer in range");
            m(c) = static_cast<T>(x);
          }};
}

template <typename M>
Entry boolean(M m) {
  return {[m](const RunConfig& c) { return std::string(m(const_cast<RunConfig&>(c)) ? "true" : "false"); },
          [m](RunConfig& c, const std::string& k, const std::string& v) { m(c) = to_bool(k, v); }};
}

// Optional real; "auto" clears it.
template <typename M>
Entry maybe(M m) {
  return {[m](const RunConfig& c) {
            const auto& o = m(const_cast<RunConfig&>(c));
            return o ? csv::num(*o) : std::string("auto");
          },
          [m](RunConfig& c, const std::string& k, const std::string& v) {
            if (v == "auto")
              m(c).reset();
            else
              m(c) = to_double(k, v);
          }};
}

// millimetre view of a metre field
template <typename M>
Entry millimetres(M m) {
  return {[m](const RunConfig& c) { return csv::num(m(const_cast<RunConfig&>(c)) * 1000.0); },
          [m](RunConfig& c, const std::string& k, const std::string& v) { m(c) = to_double(k, v) / 1000.0; }};
}

#define F(expr) [](RunConfig& c) -> auto& { return expr; }

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r = [] {
    std::map<std::string, Entry> m;
    m["terrain.kind"] = {
        [](const RunConfig& c) { return std::string(sim::to_string(c.terrain_kind)); },
        [](RunConfig& c, const std::string& k, const std::string& v) {
          try {
            c.terrain_kind = sim::parse_terrain_kind(v);
          } catch (const std::exception&) {
            bad(k, v, "flat, ramp, stairs or spiral_stairs");
          }
        }};
    m["terrain.slope_deg"] = real(F(c.terrain.slope_deg));
    m["terrain.ramp_start_y_m"] = real(F(c.terrain.ramp_start_y_m));
    m["terrain.ramp_length_m"] = real(F(c.terrain.ramp_length_m));
    m["terrain.plateau_length_m"] = real(F(c.terrain.plateau_length_m));
    m["terrain.step_height_mm"] = millimetres(F(c.terrain.step_height_m));
    m["terrain.step_depth_m"] = real(F(c.terrain.step_depth_m));
    m["terrain.stairs_start_y_m"] = real(F(c.terrain.stairs_start_y_m));
    m["terrain.step_count"] = integer(F(c.terrain.step_count));
    m["terrain.spiral_step_height_mm"] = millimetres(F(c.terrain.spiral_step_height_m));
    m["terrain.spiral_inner_radius_m"] = real(F(c.terrain.spiral_inner_radius_m));
    m["terrain.spiral_outer_radius_m"] = real(F(c.terrain.spiral_outer_radius_m));
    m["terrain.spiral_path_radius_m"] = real(F(c.terrain.spiral_path_radius_m));
    m["terrain.spiral_step_angle_rad"] = real(F(c.terrain.spiral_step_angle_rad));
    m["terrain.spiral_start_angle_rad"] = real(F(c.terrain.spiral_start_angle_rad));
    m["terrain.spiral_step_count"] = integer(F(c.terrain.spiral_step_count));

    m["task.kind"] = {
        [](const RunConfig& c) {
          return c.task_kind ? std::string(reward::to_string(*c.task_kind)) : std::string("auto");
        },
        [](RunConfig& c, const std::string& k, const std::string& v) {
          if (v == "auto") {
            c.task_kind.reset();
            return;
          }
          try {
            c.task_kind = reward::parse_task_kind(v);
          } catch (const std::exception&) {
            bad(k, v, "auto, ramp_run, stair_run or spiral_climb");
          }
        }};
    m["task.target_x"] = maybe(F(c.task_target[0]));
    m["task.target_y"] = maybe(F(c.task_target[1]));
    m["task.target_z"] = maybe(F(c.task_target[2]));
    m["task.forward_ref_m_s"] = real(F(c.task_refs.forward_ref_m_s));
    m["task.vertical_ref_m_s"] = real(F(c.task_refs.vertical_ref_m_s));
    m["task.yaw_ref_rad_s"] = real(F(c.task_refs.yaw_ref_rad_s));

    m["reward.fall_penalty"] = real(F(c.reward.fall_penalty));
    m["reward.omega_f"] = real(F(c.reward.omega_f));
    m["reward.theta_u"] = real(F(c.reward.theta_u));
    m["reward.k_lat"] = real(F(c.reward.k_lat));
    m["reward.alpha_lat"] = real(F(c.reward.alpha_lat));
    m["reward.delta"] = real(F(c.reward.delta));
    m["reward.k"] = real(F(c.reward_k));
    m["reward.alpha"] = real(F(c.reward_alpha));
    m["reward.gamma"] = real(F(c.reward_gamma));
    m["reward.beta_x"] = maybe(F(c.reward_beta[0]));
    m["reward.beta_y"] = maybe(F(c.reward_beta[1]));
    m["reward.beta_z"] = maybe(F(c.reward_beta[2]));

    m["gait.rho_min"] = real(F(c.gait.bounds.rho_min));
    m["gait.rho_max"] = real(F(c.gait.bounds.rho_max));
    m["gait.theta_min"] = real(F(c.gait.bounds.theta_min));
    m["gait.theta_max"] = real(F(c.gait.bounds.theta_max));
    m["gait.freq_min_hz"] = real(F(c.gait.bounds.freq_min_hz));
    m["gait.freq_max_hz"] = real(F(c.gait.bounds.freq_max_hz));
    m["gait.upper_m"] = real(F(c.gait.leg.upper_m));
    m["gait.lower_m"] = real(F(c.gait.leg.lower_m));
    m["gait.reach_margin_m"] = real(F(c.gait.leg.reach_margin_m));
    m["gait.hip_min_rad"] = real(F(c.gait.leg.hip_min_rad));
    m["gait.hip_max_rad"] = real(F(c.gait.leg.hip_max_rad));
    m["gait.knee_min_rad"] = real(F(c.gait.leg.knee_min_rad));
    m["gait.knee_max_rad"] = real(F(c.gait.leg.knee_max_rad));
    m["gait.stance_radius_m"] = real(F(c.gait.stance_radius_m));
    m["gait.stance_length_gain"] = real(F(c.gait.stance_length_gain));
    m["gait.swing_clearance_m"] = real(F(c.gait.swing_clearance_m));
    m["gait.duty_factor"] = real(F(c.gait.duty_factor));
    m["gait.waypoints"] = integer(F(c.gait.waypoints));
    m["gait.phase_lag_fl"] = real(F(c.gait.phase_lag[0]));
    m["gait.phase_lag_fr"] = real(F(c.gait.phase_lag[1]));
    m["gait.phase_lag_rl"] = real(F(c.gait.phase_lag[2]));
    m["gait.phase_lag_rr"] = real(F(c.gait.phase_lag[3]));

    m["sim.sample_rate_hz"] = real(F(c.sim.sample_rate_hz));
    m["sim.gyro_sigma"] = real(F(c.sim.noise.gyro_sigma));
    m["sim.acc_sigma"] = real(F(c.sim.noise.acc_sigma));
    m["sim.gyro_wobble"] = real(F(c.sim.noise.gyro_wobble));
    m["sim.acc_wobble"] = real(F(c.sim.noise.acc_wobble));
    m["sim.fall_axis"] = integer(F(c.sim.fall_axis));
    m["sim.success_distance_m"] = real(F(c.sim.success_distance_m));
    m["sim.stride_budget"] = integer(F(c.sim.stride_budget));
    m["sim.corridor_half_width_m"] = real(F(c.sim.corridor_half_width_m));
    m["sim.start_zone_length_m"] = real(F(c.sim.start_zone_length_m));
    m["sim.start_zone_width_m"] = real(F(c.sim.start_zone_width_m));
    m["sim.hip_span_m"] = real(F(c.sim.hip_span_m));
    m["sim.hip_track_m"] = real(F(c.sim.hip_track_m));
    m["sim.pose_time_constant_s"] = real(F(c.sim.pose_time_constant_s));
    m["sim.yaw_gain"] = real(F(c.sim.yaw_gain));
    m["sim.swing_support_weight"] = real(F(c.sim.swing_support_weight));
    m["sim.unsupported_sag_m"] = real(F(c.sim.unsupported_sag_m));
    m["sim.stumble_gain"] = real(F(c.sim.stumble_gain));
    m["sim.stumble_jolt_gain"] = real(F(c.sim.stumble_jolt_gain));
    m["sim.stumble_tolerance_m"] = real(F(c.sim.stumble_tolerance_m));
    m["sim.stumble_window"] = real(F(c.sim.stumble_window));
    m["sim.slope_contact_gain"] = real(F(c.sim.slope_contact_gain));
    m["sim.jolt_frequency_hz"] = real(F(c.sim.jolt_frequency_hz));
    m["sim.jolt_damping"] = real(F(c.sim.jolt_damping));
    m["sim.contact_tolerance_m"] = real(F(c.sim.contact_tolerance_m));
    m["sim.resync_each_stride"] = boolean(F(c.sim.resync_each_stride));

    m["trainer.total_timesteps"] = integer(F(c.trainer.total_timesteps));
    m["trainer.workers"] = integer(F(c.trainer.workers));
    m["trainer.rollout_len"] = integer(F(c.trainer.rollout_len));
    m["trainer.minibatch"] = integer(F(c.trainer.minibatch));
    m["trainer.epochs"] = integer(F(c.trainer.epochs));
    m["trainer.clip_eps"] = real(F(c.trainer.clip_eps));
    m["trainer.gamma"] = real(F(c.trainer.gamma));
    m["trainer.gae_lambda"] = real(F(c.trainer.gae_lambda));
    m["trainer.learning_rate"] = real(F(c.trainer.learning_rate));
    m["trainer.entropy_coef"] = real(F(c.trainer.entropy_coef));
    m["trainer.value_coef"] = real(F(c.trainer.value_coef));
    m["trainer.max_grad_norm"] = real(F(c.trainer.max_grad_norm));
    m["trainer.init_log_std"] = real(F(c.trainer.init_log_std));
    m["trainer.hidden"] = integer(F(c.trainer.hidden));
    m["trainer.hidden_layers"] = integer(F(c.trainer.hidden_layers));
    m["trainer.normalize_obs"] = boolean(F(c.trainer.normalize_obs));
    m["trainer.normalize_reward"] = boolean(F(c.trainer.normalize_reward));
    m["trainer.checkpoint_every"] = integer(F(c.checkpoint_every));

    m["eval.episodes"] = integer(F(c.eval_episodes));
    m["seed"] = {[](const RunConfig& c) { return std::to_string(c.seed); },
                 [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_u64(k, v); }};
    m["output.dir"] = {[](const RunConfig& c) { return c.output_dir; },
                       [](RunConfig& c, const std::string& k, const std::string& v) {
                         if (v.empty()) bad(k, v, "a directory name");
                         c.output_dir = v;
                       }};
    return m;
  }();
  return r;
}

#undef F

}  // namespace

void set_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& r = registry();
  const auto it = r.find(key);
  if (it == r.end()) throw ConfigError("config: unknown key '" + key + "'");
  it->second.set(cfg, key, trim(value));
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& [k, e] : registry()) out.push_back(k);
  return out;
}

std::map<std::string, std::string> parse_entries(const std::string& text, const std::string& source) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw ConfigError("config: " + where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config: " + where + ": missing key");
    if (out.count(key)) throw ConfigError("config: " + where + ": duplicate key '" + key + "'");
    if (!registry().count(key)) throw ConfigError("config: " + where + ": unknown key '" + key + "'");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("config: cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  for (const auto& [k, v] : parse_entries(ss.str(), path)) set_value(cfg, k, v);
}

std::string to_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, e] : registry()) out += k + " = " + e.get(cfg) + "\n";
  return out;
}

sim::Terrain make_terrain(const RunConfig& cfg) { return sim::make_terrain(cfg.terrain_kind, cfg.terrain); }

reward::TaskSpec make_task(const RunConfig& cfg, const sim::Terrain& terrain) {
  auto task = reward::default_task(terrain);
  if (cfg.task_kind && *cfg.task_kind != task.kind) {
    task.kind = *cfg.task_kind;
    if (task.kind == reward::TaskKind::spiral_climb) {
      task.required = {true, false, true};
    } else {
      task.required = {false, true, true};
    }
  }
  task.forward_ref_m_s = cfg.task_refs.forward_ref_m_s;
  task.vertical_ref_m_s = cfg.task_refs.vertical_ref_m_s;
  task.yaw_ref_rad_s = cfg.task_refs.yaw_ref_rad_s;
  for (std::size_t i = 0; i < 3; ++i)
    if (cfg.task_target[i]) task.target[i] = *cfg.task_target[i];
  return task;
}

reward::RewardConfig make_reward(const RunConfig& cfg, const reward::TaskSpec& task) {
  auto r = reward::default_reward_config(task);
  r.fall_penalty = cfg.reward.fall_penalty;
  r.omega_f = cfg.reward.omega_f;
  r.theta_u = cfg.reward.theta_u;
  r.k_lat = cfg.reward.k_lat;
  r.alpha_lat = cfg.reward.alpha_lat;
  r.delta = cfg.reward.delta;
  for (std::size_t i = 0; i < 3; ++i) {
    r.axes[i].k = cfg.reward_k;
    r.axes[i].alpha = cfg.reward_alpha;
    r.axes[i].gamma = cfg.reward_gamma;
    if (cfg.reward_beta[i]) r.axes[i].beta = *cfg.reward_beta[i];
  }
  return r;
}

rl::LocomotionConfig make_env_config(const RunConfig& cfg) {
  rl::LocomotionConfig lc;
  lc.terrain = make_terrain(cfg);
  lc.sim = cfg.sim;
  lc.gait = cfg.gait;
  lc.task = make_task(cfg, lc.terrain);
  lc.reward = make_reward(cfg, lc.task);
  return lc;
}

void validate(const RunConfig& cfg) {
  auto wrap = [](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  };
  wrap([&] {
    const auto lc = make_env_config(cfg);
    sim::validate(lc.sim);
    gait::validate(lc.gait);
    reward::validate(lc.task);
    reward::validate(lc.reward);
    rl::validate(cfg.trainer);
  });
  if (cfg.checkpoint_every < 0) throw ConfigError("config: trainer.checkpoint_every: must be >= 0");
  if (cfg.eval_episodes < 1) throw ConfigError("config: eval.episodes: must be >= 1");
  if (cfg.output_dir.find("..") != std::string::npos)
    throw ConfigError("config: output.dir: must not contain '..'");
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace strider::cli
