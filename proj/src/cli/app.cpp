#include "strider/cli/app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "strider/cli/config.hpp"
#include "strider/csv.hpp"
#include "strider/perception.hpp"
#include "strider/rl/checkpoint.hpp"
#include "strider/rl/trainer.hpp"
#include "strider/signal.hpp"
#include "strider/simd/kernels.hpp"

namespace strider::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  std::string config;
  std::vector<std::string> sets;
  std::string terrain;
  std::string step_height_mm;
  std::string seed;
  std::string run_name;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config, "Config file (key = value lines)");
  sub->add_option("--set", o.sets, "Override a config key: key=value (repeatable)");
  sub->add_option("--terrain", o.terrain, "Shorthand for terrain.kind");
  sub->add_option("--step-height-mm", o.step_height_mm, "Shorthand for terrain.step_height_mm");
  sub->add_option("--seed", o.seed, "Shorthand for seed");
  sub->add_option("--run-name", o.run_name, "Run directory name (default: command-timestamp-seed)");
}

// defaults < file < --set < named flags
RunConfig resolve(const CommonOpts& o) {
  RunConfig cfg;
  if (!o.config.empty()) apply_file(cfg, o.config);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("config: --set expects key=value, got '" + kv + "'");
    set_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.terrain.empty()) set_value(cfg, "terrain.kind", o.terrain);
  if (!o.step_height_mm.empty()) set_value(cfg, "terrain.step_height_mm", o.step_height_mm);
  if (!o.seed.empty()) set_value(cfg, "seed", o.seed);
  validate(cfg);
  return cfg;
}

fs::path output_root() {
  const char* env = std::getenv("STRIDER_OUTPUT_ROOT");
  return (env && *env) ? fs::path(env) : fs::current_path();
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return buf;
}

fs::path make_run_dir(const std::string& output_dir, const std::string& command, std::uint64_t seed,
                      const std::string& name) {
  if (!name.empty() && (name.find('/') != std::string::npos || name == "." || name == ".."))
    throw UsageError("cli: --run-name must be a plain directory name");
  const fs::path base = output_root() / output_dir;
  const std::string stem = name.empty() ? command + "-" + timestamp() + "-s" + std::to_string(seed) : name;
  fs::path dir = base / stem;
  for (int k = 2; fs::exists(dir); ++k) dir = base / (stem + "-" + std::to_string(k));
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cli: cannot write " + path.string());
  out << text;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_manifest(const fs::path& dir, const std::string& command, std::uint64_t seed,
                    const std::string& config_text, const std::vector<std::string>& outputs,
                    nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["config_file"] = "config.resolved";
  j["config_hash"] = "fnv1a64:" + hex64(fnv1a(config_text));
  j["simd"] = std::string(simd::isa_name(simd::active().isa));
  j["outputs"] = outputs;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  write_file(dir / "manifest.json", j.dump(2) + "\n");
}

std::string actions_header() {
  std::string h = "stride";
  for (const char* p : {"rho", "theta", "freq"})
    for (std::size_t i = 0; i < gait::kLimbs; ++i) h += std::string(",") + p + std::to_string(i);
  return h;
}

std::string actions_csv(std::uint64_t seed, const std::vector<gait::Action>& actions) {
  std::string out = "# seed=" + std::to_string(seed) + "\n" + actions_header() + "\n";
  for (std::size_t k = 0; k < actions.size(); ++k) {
    std::vector<std::string> cells{std::to_string(k + 1)};
    for (double v : actions[k].encode()) cells.push_back(csv::num(v));
    out += csv::join(cells) + "\n";
  }
  return out;
}

const char* outcome_name(sim::Outcome o) { return sim::to_string(o).data(); }

// ---------------------------------------------------------------- train

int cmd_train(const CommonOpts& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve(o);
  const auto lc = make_env_config(cfg);
  const fs::path dir = make_run_dir(cfg.output_dir, "train", cfg.seed, o.run_name);
  const std::string cfg_text = to_text(cfg);
  write_file(dir / "config.resolved", cfg_text);

  rl::TrainerConfig tc = cfg.trainer;
  tc.seed = cfg.seed;
  std::ofstream curve(dir / "curve.csv", std::ios::binary);
  curve << "update_idx,timesteps,mean_ep_reward,std,fall_rate\n";
  std::vector<std::string> outputs{"config.resolved", "curve.csv"};
  if (cfg.checkpoint_every > 0) fs::create_directories(dir / "checkpoints");

  rl::TrainResult res;
  try {
    res = rl::train([&] { return std::make_unique<rl::LocomotionEnv>(lc); }, tc,
                    [&](const rl::CurveRow& row, const rl::ActorCritic& model, const rl::RunningNorm& norm) {
                      curve << row.update_idx << ',' << row.timesteps << ',' << csv::num(row.mean_ep_reward)
                            << ',' << csv::num(row.std_ep_reward) << ',' << csv::num(row.fall_rate) << '\n';
                      curve.flush();
                      if (cfg.checkpoint_every > 0 && (row.update_idx + 1) % cfg.checkpoint_every == 0) {
                        char name[64];
                        std::snprintf(name, sizeof name, "update_%05d.ckpt", row.update_idx + 1);
                        rl::save_checkpoint((dir / "checkpoints" / name).string(), model, norm);
                        outputs.push_back(std::string("checkpoints/") + name);
                      }
                    });
  } catch (const rl::TrainerFault& e) {
    write_file(dir / "fault_actions.csv", actions_csv(e.episode_seed(), e.actions()));
    err << e.what() << "\nreplay with: replay --config " << (dir / "config.resolved").string()
        << " --actions " << (dir / "fault_actions.csv").string() << "\n";
    return kExitFailure;
  }
  rl::save_checkpoint((dir / "model.ckpt").string(), res.model, res.norm);
  outputs.push_back("model.ckpt");

  std::ofstream eps(dir / "episodes.csv", std::ios::binary);
  eps << "update_idx,worker,seed,reward,steps,outcome_code\n";
  for (const auto& e : res.episodes)
    eps << e.update_idx << ',' << e.worker << ',' << e.seed << ',' << csv::num(e.reward) << ','
        << e.steps << ',' << static_cast<int>(e.outcome) << '\n';
  outputs.push_back("episodes.csv");
  outputs.push_back("manifest.json");
  write_manifest(dir, "train", cfg.seed, cfg_text, outputs,
                 {{"updates", res.curve.size()}, {"timesteps", res.curve.back().timesteps}});

  const auto& last = res.curve.back();
  out << "run directory: " << dir.string() << "\n"
      << "updates: " << res.curve.size() << "  timesteps: " << last.timesteps
      << "  final mean episode reward: " << csv::num(last.mean_ep_reward)
      << "  fall rate: " << csv::num(last.fall_rate) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalOpts {
  std::string checkpoint;
  bool random_policy = false;
  std::string episodes;
  int record_episode = -1;
};

int cmd_eval(const CommonOpts& o, const EvalOpts& eo, std::ostream& out, std::ostream&) {
  RunConfig cfg;
  {
    CommonOpts oo = o;
    if (!eo.episodes.empty()) oo.sets.push_back("eval.episodes=" + eo.episodes);
    cfg = resolve(oo);
  }
  if (eo.checkpoint.empty() == !eo.random_policy)
    throw UsageError("eval: give exactly one of --checkpoint or --random-policy");
  if (eo.record_episode >= cfg.eval_episodes)
    throw UsageError("eval: --record-episode must be below eval.episodes");

  auto lc = make_env_config(cfg);
  rl::LocomotionEnv env(lc);
  std::optional<rl::Checkpoint> ck;
  if (!eo.checkpoint.empty()) {
    ck = rl::load_checkpoint(eo.checkpoint);
    const auto box = env.action_box();
    const auto& sh = ck->model.shape();
    if (sh.obs_dim != env.obs_dim() || sh.act_dim != box.dim())
      throw rl::CheckpointError(rl::CheckpointError::Kind::corrupt,
                                "checkpoint: dimensions do not match this configuration");
    if (ck->model.box().low != box.low || ck->model.box().high != box.high)
      throw rl::CheckpointError(rl::CheckpointError::Kind::corrupt,
                                "checkpoint: action boxes differ from gait.* bounds in the config");
  }

  const fs::path dir = make_run_dir(cfg.output_dir, "eval", cfg.seed, o.run_name);
  const std::string cfg_text = to_text(cfg);
  write_file(dir / "config.resolved", cfg_text);
  std::vector<std::string> outputs{"config.resolved", "eval.csv", "eval_summary.csv"};

  std::ofstream trace, strides;
  auto hook = [&](int episode, rl::LocomotionEnv& e, bool starting) {
    if (episode != eo.record_episode) return;
    if (starting) {
      trace.open(dir / "episode_trace.csv", std::ios::binary);
      strides.open(dir / "episode_strides.csv", std::ios::binary);
      trace << sim::Simulator::trace_header() << '\n';
      strides << rl::LocomotionEnv::episode_log_header() << '\n';
      e.simulator().set_trace(&trace);
      e.set_episode_log(&strides);
    } else {
      e.simulator().set_trace(nullptr);
      e.set_episode_log(nullptr);
      trace.close();
      strides.close();
      write_file(dir / "episode_actions.csv", actions_csv(e.episode_seed(), e.action_log()));
    }
  };
  const auto summary = ck ? rl::evaluate(ck->model, ck->norm, env, cfg.eval_episodes, cfg.seed, hook)
                          : rl::random_baseline(env, cfg.eval_episodes, cfg.seed, hook);
  if (eo.record_episode >= 0) {
    outputs.push_back("episode_trace.csv");
    outputs.push_back("episode_strides.csv");
    outputs.push_back("episode_actions.csv");
  }

  std::ostringstream table;
  table << "episode,seed,outcome,success,fall,strides,sim_time_s,distance_m,reward\n";
  double dist = 0.0;
  for (std::size_t i = 0; i < summary.episodes.size(); ++i) {
    const auto& e = summary.episodes[i];
    dist += e.distance_m;
    table << i << ',' << e.seed << ',' << outcome_name(e.outcome) << ','
          << (e.outcome == sim::Outcome::success ? 1 : 0) << ',' << (e.outcome == sim::Outcome::fall ? 1 : 0)
          << ',' << e.strides << ',' << csv::num(e.sim_time_s) << ',' << csv::num(e.distance_m) << ','
          << csv::num(e.reward) << '\n';
  }
  dist /= static_cast<double>(summary.episodes.size());
  table << "aggregate,,," << csv::num(summary.success_rate.mean) << ',' << csv::num(summary.fall_rate.mean)
        << ',' << csv::num(summary.strides.mean) << ',' << csv::num(summary.sim_time_s.mean) << ','
        << csv::num(dist) << ',' << csv::num(summary.reward.mean) << '\n';
  write_file(dir / "eval.csv", table.str());

  std::ostringstream sum;
  sum << "metric,mean,ci95_lo,ci95_hi\n";
  const std::pair<const char*, const rl::Interval*> rows[] = {
      {"success_rate", &summary.success_rate}, {"fall_rate", &summary.fall_rate},
      {"strides", &summary.strides},           {"sim_time_s", &summary.sim_time_s},
      {"episode_reward", &summary.reward}};
  for (const auto& [name, iv] : rows)
    sum << name << ',' << csv::num(iv->mean) << ',' << csv::num(iv->lo) << ',' << csv::num(iv->hi) << '\n';
  write_file(dir / "eval_summary.csv", sum.str());
  outputs.push_back("manifest.json");
  write_manifest(dir, "eval", cfg.seed, cfg_text, outputs,
                 {{"policy", ck ? eo.checkpoint : std::string("random")}, {"episodes", cfg.eval_episodes}});

  out << "run directory: " << dir.string() << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-15s %10s %10s %10s\n", "metric", "mean", "ci95_lo", "ci95_hi");
  out << line;
  for (const auto& [name, iv] : rows) {
    std::snprintf(line, sizeof line, "%-15s %10.4f %10.4f %10.4f\n", name, iv->mean, iv->lo, iv->hi);
    out << line;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOpts {
  std::string trace;
  double band_lo = signal::kRetentionBand.lo_hz;
  double band_hi = signal::kRetentionBand.hi_hz;
  double stride_freq = 1.0;
  std::string output_dir = "runs";
  std::string run_name;
};

int cmd_analyze(const AnalyzeOpts& a, std::ostream& out, std::ostream&) {
  const signal::BandSpec band{a.band_lo, a.band_hi};
  try {
    signal::validate(band);
  } catch (const std::exception& e) {
    throw UsageError(std::string("analyze: --band-lo/--band-hi: ") + e.what());
  }
  if (!(a.stride_freq > 0.0) || !std::isfinite(a.stride_freq))
    throw UsageError("analyze: --stride-freq must be positive");
  std::ifstream in(a.trace);
  if (!in) throw UsageError("analyze: cannot read trace '" + a.trace + "'");
  const auto table = csv::read_numeric(in, a.trace);
  const auto t = table.column_values("t_s");
  const std::array<const char*, perception::kChannels> names{"gyro_x", "gyro_y", "gyro_z", "acc_y"};
  std::array<std::vector<double>, perception::kChannels> ch;
  for (std::size_t c = 0; c < names.size(); ++c) ch[c] = table.column_values(names[c]);
  if (t.size() < 2) throw csv::CsvError(a.trace, 2, 1, "need at least two samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dt > 0.0)) throw csv::CsvError(a.trace, 2, 1, "t_s must increase");
  const std::size_t tcol = table.column("t_s") + 1;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs((t[i] - t[i - 1]) - dt) > 1e-6 * std::max(1.0, dt) + 1e-9)
      throw csv::CsvError(a.trace, i + 2, tcol, "non-uniform sample spacing");
  // t_s is printed in shortest form, so snap the rate to a micro-hertz grid
  const double rate = std::round(1e6 / dt) / 1e6;
  const auto n = static_cast<std::size_t>(std::lround(rate / a.stride_freq));
  if (n < signal::kMinWindow)
    throw UsageError("analyze: window of " + std::to_string(n) + " samples is too short; lower --stride-freq");
  const std::size_t windows = t.size() / n;
  if (windows == 0) throw UsageError("analyze: trace is shorter than one window");

  const fs::path dir = make_run_dir(a.output_dir, "analyze", 0, a.run_name);
  std::ostringstream params;
  params << "trace = " << a.trace << "\nband_lo_hz = " << csv::num(a.band_lo) << "\nband_hi_hz = "
         << csv::num(a.band_hi) << "\nstride_freq_hz = " << csv::num(a.stride_freq)
         << "\nsample_rate_hz = " << csv::num(rate) << "\nwindow_samples = " << n << "\n";
  write_file(dir / "config.resolved", params.str());

  std::ostringstream desc, recon;
  {
    std::vector<std::string> h{"window", "t_start_s"};
    for (const auto& name : perception::descriptor_header()) h.push_back(name);
    h.push_back("degenerate_channels");
    h.push_back("distance_prev");
    desc << csv::join(h) << '\n';
    std::vector<std::string> r{"t_s"};
    for (const char* name : names)
      for (const char* view : {"raw", "filtered", "fit"}) r.push_back(std::string(name) + "." + view);
    recon << csv::join(r) << '\n';
  }
  std::array<perception::EnvDescriptor, perception::kChannels> prev{};
  for (std::size_t w = 0; w < windows; ++w) {
    std::array<perception::EnvDescriptor, perception::kChannels> d{};
    std::array<std::vector<double>, perception::kChannels> filt;
    std::array<signal::TwoSinusoidFit, perception::kChannels> fits;
    int degenerate = 0;
    for (std::size_t c = 0; c < ch.size(); ++c) {
      signal::TimeSeries ts;
      ts.samples.assign(ch[c].begin() + static_cast<std::ptrdiff_t>(w * n),
                        ch[c].begin() + static_cast<std::ptrdiff_t>((w + 1) * n));
      ts.sample_rate_hz = rate;
      ts.window_index = static_cast<std::int64_t>(w);
      const auto spec = signal::band_filter(signal::fft_forward(ts), band);
      fits[c] = signal::dominant_pair(spec, band);
      d[c] = perception::EnvDescriptor::from_fit(fits[c]);
      degenerate += d[c].degenerate ? 1 : 0;
      filt[c] = signal::ifft_inverse(spec).samples;
      // restore the level the band removed so the three views overlay
      if (!band.contains(0.0))
        for (double& v : filt[c]) v += spec.dc_offset;
    }
    std::vector<std::string> row{std::to_string(w), csv::num(t[w * n])};
    for (const auto& dc : d)
      for (double v : dc.flatten()) row.push_back(csv::num(v));
    row.push_back(std::to_string(degenerate));
    row.push_back(csv::num(w == 0 ? 0.0 : perception::descriptor_distance(prev, d)));
    desc << csv::join(row) << '\n';
    prev = d;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = w * n + j;
      std::vector<std::string> r{csv::num(t[k])};
      for (std::size_t c = 0; c < ch.size(); ++c) {
        r.push_back(csv::num(ch[c][k]));
        r.push_back(csv::num(filt[c][j]));
        r.push_back(csv::num(signal::evaluate_fit(fits[c], static_cast<double>(j) / rate)));
      }
      recon << csv::join(r) << '\n';
    }
  }
  write_file(dir / "descriptors.csv", desc.str());
  write_file(dir / "reconstruction.csv", recon.str());
  write_manifest(dir, "analyze", 0, params.str(),
                 {"config.resolved", "descriptors.csv", "reconstruction.csv", "manifest.json"},
                 {{"windows", windows}});
  out << "run directory: " << dir.string() << "\n"
      << "windows: " << windows << " of " << n << " samples at " << csv::num(rate) << " Hz\n";
  return kExitOk;
}

// ---------------------------------------------------------------- replay

struct ReplayOpts {
  std::string actions;
  std::string episode_seed;
};

int cmd_replay(const CommonOpts& o, const ReplayOpts& ro, std::ostream& out, std::ostream&) {
  if (o.config.empty()) throw UsageError("replay: --config is required (use the run's config.resolved)");
  const RunConfig cfg = resolve(o);
  std::ifstream in(ro.actions);
  if (!in) throw UsageError("replay: cannot read actions '" + ro.actions + "'");
  const auto table = csv::read_numeric(in, ro.actions);
  std::optional<std::uint64_t> seed;
  for (const auto& c : table.comments) {
    const auto pos = c.find("seed=");
    if (pos != std::string::npos) seed = std::stoull(c.substr(pos + 5));
  }
  if (!ro.episode_seed.empty()) seed = std::stoull(ro.episode_seed);
  if (!seed) throw UsageError("replay: no '# seed=' line in the actions file; pass --episode-seed");
  std::vector<std::size_t> cols;
  for (const auto& name : csv::split(actions_header()))
    if (name != "stride") cols.push_back(table.column(name));

  const fs::path dir = make_run_dir(cfg.output_dir, "replay", *seed, o.run_name);
  const std::string cfg_text = to_text(cfg);
  write_file(dir / "config.resolved", cfg_text);
  rl::LocomotionEnv env(make_env_config(cfg));
  std::ofstream trace(dir / "episode_trace.csv", std::ios::binary);
  std::ofstream strides(dir / "episode_strides.csv", std::ios::binary);
  trace << sim::Simulator::trace_header() << '\n';
  strides << rl::LocomotionEnv::episode_log_header() << '\n';
  env.simulator().set_trace(&trace);
  env.set_episode_log(&strides);
  env.reset(*seed);
  std::size_t used = 0;
  for (const auto& row : table.rows) {
    if (env.simulator().status().outcome != sim::Outcome::running) break;
    std::vector<double> a;
    for (std::size_t c : cols) a.push_back(row[c]);
    env.step(a);
    ++used;
  }
  env.simulator().set_trace(nullptr);
  env.set_episode_log(nullptr);
  write_manifest(dir, "replay", *seed, cfg_text,
                 {"config.resolved", "episode_trace.csv", "episode_strides.csv", "manifest.json"},
                 {{"actions_file", ro.actions}, {"episode_seed", *seed}});
  const auto& st = env.simulator().status();
  out << "run directory: " << dir.string() << "\n"
      << "replayed " << used << " of " << table.rows.size() << " strides; outcome "
      << outcome_name(st.outcome) << ", distance " << csv::num(st.distance_m) << " m\n";
  if (used < table.rows.size()) out << "episode ended before the action log did\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"strider: IMU-descriptor locomotion learning on a desk-scale quadruped model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOpts train_o, eval_o, replay_o;
  EvalOpts eval_x;
  AnalyzeOpts an;
  ReplayOpts rep;

  auto* train = app.add_subcommand("train", "Train a policy and write a run directory");
  add_common(train, train_o);
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint (mean action) or the random policy");
  add_common(eval, eval_o);
  eval->add_option("--checkpoint", eval_x.checkpoint, "Checkpoint file");
  eval->add_flag("--random-policy", eval_x.random_policy, "Uniform random actions instead of a checkpoint");
  eval->add_option("--episodes", eval_x.episodes, "Shorthand for eval.episodes");
  eval->add_option("--record-episode", eval_x.record_episode,
                   "Write trace, per-stride rewards and actions of this episode index");
  auto* analyze = app.add_subcommand("analyze", "Per-window descriptors and reconstructions of an IMU trace");
  analyze->add_option("--trace", an.trace, "Trace CSV with t_s, gyro_x, gyro_y, gyro_z, acc_y")->required();
  analyze->add_option("--band-lo", an.band_lo, "Band lower edge, Hz");
  analyze->add_option("--band-hi", an.band_hi, "Band upper edge, Hz");
  analyze->add_option("--stride-freq", an.stride_freq, "Stride frequency, Hz (window = 1 / f)");
  analyze->add_option("--output-dir", an.output_dir, "Directory under the output root");
  analyze->add_option("--run-name", an.run_name, "Run directory name");
  auto* replay = app.add_subcommand("replay", "Re-run a logged episode from its seed and action log");
  add_common(replay, replay_o);
  replay->add_option("--actions", rep.actions, "Actions CSV (with a '# seed=' line)")->required();
  replay->add_option("--episode-seed", rep.episode_seed, "Episode seed, overriding the file");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(train_o, out, err);
    if (eval->parsed()) return cmd_eval(eval_o, eval_x, out, err);
    if (analyze->parsed()) return cmd_analyze(an, out, err);
    if (replay->parsed()) return cmd_replay(replay_o, rep, out, err);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const csv::CsvError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const rl::CheckpointError& e) {
    err << e.what() << "\n";
    return e.kind() == rl::CheckpointError::Kind::io ? kExitUsage : kExitCheckpoint;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace strider::cli
