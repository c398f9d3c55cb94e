#include "strider/rl/env.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "strider/csv.hpp"

namespace strider::rl {

ActionBox action_box(const gait::ActionBounds& b) {
  ActionBox box;
  for (std::size_t i = 0; i < gait::kLimbs; ++i) {
    box.low.push_back(b.rho_min);
    box.high.push_back(b.rho_max);
  }
  for (std::size_t i = 0; i < gait::kLimbs; ++i) {
    box.low.push_back(b.theta_min);
    box.high.push_back(b.theta_max);
  }
  for (std::size_t i = 0; i < gait::kLimbs; ++i) {
    box.low.push_back(b.freq_min_hz);
    box.high.push_back(b.freq_max_hz);
  }
  return box;
}

namespace {

sim::SimConfig with_fall_threshold(sim::SimConfig s, const reward::RewardConfig& r) {
  s.fall_threshold_rad_s = r.omega_f;
  return s;
}

}  // namespace

LocomotionEnv::LocomotionEnv(LocomotionConfig cfg)
    : cfg_(std::move(cfg)),
      sim_(cfg_.terrain, with_fall_threshold(cfg_.sim, cfg_.reward), cfg_.gait),
      prev_(gait::neutral_action(cfg_.gait.bounds)) {
  reward::validate(cfg_.task);
  reward::validate(cfg_.reward);
}

ActionBox LocomotionEnv::action_box() const { return rl::action_box(cfg_.gait.bounds); }

std::vector<double> LocomotionEnv::reset(std::uint64_t seed) {
  seed_ = seed;
  actions_.clear();
  prev_ = gait::neutral_action(cfg_.gait.bounds);
  const auto r = sim_.reset(seed);
  const auto state = perception::build_state(r.imu, cfg_.sim.sample_rate_hz, prev_);
  return {state.values.begin(), state.values.end()};
}

std::string LocomotionEnv::episode_log_header() {
  return "stride,rho0,rho1,rho2,rho3,theta0,theta1,theta2,theta3,freq0,freq1,freq2,freq3,"
         "s_x,s_y,s_z,omega_d,sub_x,sub_y,sub_z,loss_heading,loss_lateral,reward,terminal,"
         "outcome_code,distance_m";
}

void LocomotionEnv::set_episode_log(std::ostream* out) { log_ = out; }

StepResult LocomotionEnv::step(std::span<const double> raw) {
  if (raw.size() != gait::kActionDim) throw std::invalid_argument("rl: action must have 12 values");
  const auto action = gait::clamp_action(raw, cfg_.gait.bounds);
  actions_.push_back(action);
  const auto sr = sim_.step(action);
  const auto m = reward::measure(sr.kinematics, cfg_.task, cfg_.sim.fall_axis);
  auto b = reward::evaluate(m, cfg_.task, cfg_.reward);
  if (sr.status.outcome == sim::Outcome::fall && !b.terminal) {
    b = {};
    b.total = cfg_.reward.fall_penalty;
    b.terminal = true;
  }

  StepResult out;
  out.reward = b.total;
  out.outcome = sr.status.outcome;
  out.terminal = sr.status.outcome != sim::Outcome::running;

  if (log_) {
    std::vector<std::string> cells{std::to_string(sr.status.strides_used)};
    for (double v : action.encode()) cells.push_back(csv::num(v));
    for (double v : {m.s_x, m.s_y, m.s_z, m.omega_d, b.sub[0], b.sub[1], b.sub[2], b.heading,
                     b.lateral, b.total})
      cells.push_back(csv::num(v));
    cells.push_back(out.terminal ? "1" : "0");
    cells.push_back(std::to_string(static_cast<int>(out.outcome)));
    cells.push_back(csv::num(sr.status.distance_m));
    *log_ << csv::join(cells) << '\n';
  }

  prev_ = action;
  const auto state = perception::build_state(sr.imu, cfg_.sim.sample_rate_hz, prev_);
  out.obs.assign(state.values.begin(), state.values.end());
  return out;
}

ToyEnv::ToyEnv(int horizon) : horizon_(horizon) {
  if (horizon < 1) throw std::invalid_argument("rl: toy horizon must be positive");
}

reward::AxisParams ToyEnv::params() { return {1.0, 10.0, 0.0, 0.5, true}; }

std::vector<double> ToyEnv::reset(std::uint64_t) {
  t_ = 0;
  prev_ = 0.0;
  return {prev_};
}

StepResult ToyEnv::step(std::span<const double> raw) {
  if (raw.size() != 1) throw std::invalid_argument("rl: toy action must have 1 value");
  const double a = std::clamp(raw[0], -1.0, 1.0);
  prev_ = a;
  ++t_;
  StepResult out;
  out.obs = {prev_};
  out.reward = reward::sub_reward(a, params());
  out.terminal = t_ >= horizon_;
  out.outcome = out.terminal ? sim::Outcome::stride_budget_exceeded : sim::Outcome::running;
  return out;
}

}  // namespace strider::rl
