// Copyright 2026 The Primo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// primo: command-line front end over libprimo.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "primo/primo.h"

namespace {

enum Exit : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitData = 4,
};

int exit_code(primo_status s) {
  switch (s) {
    case PRIMO_OK:
      return kExitOk;
    case PRIMO_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    case PRIMO_ERR_DEGENERATE_BASIS:
    case PRIMO_ERR_DIVERGENCE:
    case PRIMO_ERR_UNDEFINED_STEERING:
      return kExitNumerical;
    case PRIMO_ERR_INSUFFICIENT_DATA:
    case PRIMO_ERR_NON_PHYSICAL_FIT:
    case PRIMO_ERR_DEGENERATE_DATA:
      return kExitData;
    default:
      return kExitFailure;
  }
}

// Thrown out of a command body once the error has been printed.
struct Failed {
  int code;
};

void check(primo_status s) {
  if (s == PRIMO_OK) return;
  std::cerr << "primo: " << primo_status_name(s) << ": " << primo_last_error() << '\n';
  if (s == PRIMO_ERR_DIVERGENCE) {
    std::cerr << "primo: diverged at step " << primo_last_error_step() << '\n';
  }
  throw Failed{exit_code(s)};
}

[[noreturn]] void usage(const std::string& msg) {
  std::cerr << "primo: " << msg << '\n';
  throw Failed{kExitUsage};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Demo = Handle<primo_raw_demo, primo_demo_free>;
using Traj = Handle<primo_trajectory, primo_trajectory_free>;
using Dmp = Handle<primo_dmp, primo_dmp_free>;
using SceneH = Handle<primo_scene, primo_scene_free>;
using Log = Handle<primo_rollout_log, primo_log_free>;

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "primo: io: cannot open '" << path << "'\n";
    throw Failed{kExitFailure};
  }
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool is_trajectory_csv(const std::string& path) {
  return first_line(path).rfind("t,dof0_x", 0) == 0;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Preprocessing flags shared by several commands.
struct PreprocessOpts {
  std::optional<double> resample_dt;
  std::optional<int> hampel_window;
  std::optional<double> hampel_nsigma;
  std::optional<int> smooth_window;

  void add(CLI::App* app) {
    app->add_option("--resample-dt", resample_dt, "Uniform resampling step (s)")->check(CLI::PositiveNumber);
    app->add_option("--hampel-window", hampel_window, "Outlier window (samples, odd)");
    app->add_option("--hampel-nsigma", hampel_nsigma, "Outlier threshold (MAD sigmas)");
    app->add_option("--smooth-window", smooth_window, "Smoothing window (samples, odd)");
  }

  std::string json() const {
    std::ostringstream os;
    os.precision(17);
    os << '{';
    const char* sep = "";
    if (resample_dt) { os << sep << "\"resample_dt\":" << *resample_dt; sep = ","; }
    if (hampel_window) { os << sep << "\"hampel_window\":" << *hampel_window; sep = ","; }
    if (hampel_nsigma) { os << sep << "\"hampel_nsigma\":" << *hampel_nsigma; sep = ","; }
    if (smooth_window) { os << sep << "\"smooth_window\":" << *smooth_window; }
    os << '}';
    return os.str();
  }
};

// Trajectory CSV as is; raw demo CSV through preprocessing.
Traj load_demo(const std::string& path, const PreprocessOpts& pre) {
  Traj traj;
  if (is_trajectory_csv(path)) {
    check(primo_trajectory_read(path.c_str(), traj.out()));
    return traj;
  }
  Demo raw;
  check(primo_demo_read(path.c_str(), raw.out()));
  check(primo_demo_preprocess(raw.get(), pre.json().c_str(), traj.out()));
  return traj;
}

std::vector<double> need_dims(const std::vector<double>& v, int dims, const char* flag) {
  if (static_cast<int>(v.size()) != dims) {
    usage(std::string(flag) + ": expected " + std::to_string(dims) + " comma-separated values");
  }
  return v;
}

// ---- gen-demo ----

struct GenDemoOpts {
  std::string profile = "min-jerk";
  std::vector<double> from, to, obstacle;
  double duration = 1.0;
  double dt = 1e-3;
  double noise = 0.0;
  double jitter = 0.0;
  std::uint64_t seed = 0;
  double gamma = 1000.0;
  double beta_oa = 20.0 / 3.14159265358979323846;
  int n_basis = 50;
  double influence_radius = 0.0;
  std::string out = "demo.csv";
  std::string clean_out;
};

int cmd_gen_demo(const GenDemoOpts& o) {
  if (o.from.size() != o.to.size()) usage("--from and --to need the same number of values");
  primo_demo_spec spec;
  primo_demo_spec_init(&spec);
  spec.profile = o.profile == "dmp-rollout" ? PRIMO_PROFILE_DMP_ROLLOUT : PRIMO_PROFILE_MIN_JERK;
  spec.dims = static_cast<int>(o.from.size());
  spec.start = o.from.data();
  spec.goal = o.to.data();
  spec.duration = o.duration;
  spec.dt = o.dt;
  spec.noise_sigma = o.noise;
  spec.time_jitter = o.jitter;
  spec.seed = o.seed;
  spec.dmp_n_basis = o.n_basis;
  spec.gamma = o.gamma;
  spec.beta_oa = o.beta_oa;
  spec.influence_radius = o.influence_radius;
  if (!o.obstacle.empty()) {
    if (spec.profile != PRIMO_PROFILE_DMP_ROLLOUT) usage("--obstacle requires --profile dmp-rollout");
    need_dims(o.obstacle, spec.dims, "--obstacle");
    spec.obstacle = o.obstacle.data();
  }
  Demo demo;
  check(primo_demo_generate(&spec, demo.out()));
  check(primo_demo_write(demo.get(), o.out.c_str()));
  if (!o.clean_out.empty()) {
    primo_demo_spec clean = spec;
    clean.noise_sigma = 0.0;
    clean.time_jitter = 0.0;
    Demo c;
    check(primo_demo_generate(&clean, c.out()));
    check(primo_demo_write(c.get(), o.clean_out.c_str()));
  }
  std::cout << "wrote " << o.out << ": " << primo_demo_size(demo.get()) << " samples, "
            << primo_demo_dims(demo.get()) << " dims, profile " << o.profile << ", noise "
            << fmt(o.noise) << " m, seed " << o.seed << '\n';
  return kExitOk;
}

// ---- preprocess ----

struct PreprocessCmdOpts {
  std::string in;
  std::string out = "trajectory.csv";
  PreprocessOpts pre;
};

int cmd_preprocess(const PreprocessCmdOpts& o) {
  Demo raw;
  check(primo_demo_read(o.in.c_str(), raw.out()));
  Traj traj;
  check(primo_demo_preprocess(raw.get(), o.pre.json().c_str(), traj.out()));
  check(primo_trajectory_write(traj.get(), o.out.c_str()));
  std::cout << "wrote " << o.out << ": " << primo_trajectory_size(traj.get()) << " samples at dt "
            << fmt(primo_trajectory_dt(traj.get())) << " s\n";
  return kExitOk;
}

// ---- learn dmp ----

struct LearnDmpOpts {
  std::string demo;
  std::string out = "dmp.json";
  std::string rollout_out;
  double alpha = 25.0;
  double alpha_k = 8.0;
  int n_basis = 50;
  PreprocessOpts pre;
};

int cmd_learn_dmp(const LearnDmpOpts& o) {
  Traj demo = load_demo(o.demo, o.pre);
  primo_dmp_params params{o.alpha, o.alpha_k, o.n_basis};
  Dmp dmp;
  check(primo_dmp_fit(demo.get(), &params, dmp.out()));
  check(primo_dmp_write(dmp.get(), o.out.c_str()));

  primo_rollout_spec spec;
  primo_rollout_spec_init(&spec);
  spec.dt = primo_trajectory_dt(demo.get());
  spec.n_steps = static_cast<int>(primo_trajectory_size(demo.get()));
  Traj repro;
  check(primo_dmp_rollout(dmp.get(), &spec, repro.out()));
  if (!o.rollout_out.empty()) check(primo_trajectory_write(repro.get(), o.rollout_out.c_str()));
  double rmse = 0.0, range = 0.0;
  check(primo_trajectory_rmse(demo.get(), repro.get(), &rmse));
  check(primo_trajectory_range(demo.get(), &range));
  std::cout << "wrote " << o.out << ": " << o.n_basis << " basis functions\n"
            << "fit rmse " << fmt(rmse) << " m ("
            << fmt(range > 0.0 ? 100.0 * rmse / range : 0.0) << "% of range " << fmt(range)
            << " m)\n";
  return kExitOk;
}

// ---- learn oa ----

struct LearnOaOpts {
  std::string demo;
  std::string baseline;
  std::vector<double> obstacle;
  std::string method = "trajectory";
  double alpha = 25.0;
  double alpha_k = 8.0;
  int n_basis = 50;
  double influence_radius = 0.0;
  std::string out = "avoidance.json";
  std::string series_out;
  PreprocessOpts pre;
};

int cmd_learn_oa(const LearnOaOpts& o) {
  Traj obs = load_demo(o.demo, o.pre);
  Traj base = load_demo(o.baseline, o.pre);
  need_dims(o.obstacle, primo_trajectory_dims(base.get()), "--obstacle");
  primo_oa_options options;
  primo_oa_options_init(&options);
  options.method = o.method == "log-linear" ? PRIMO_OA_LOG_LINEAR
                   : o.method == "rate"     ? PRIMO_OA_RATE
                                            : PRIMO_OA_TRAJECTORY;
  options.alpha = o.alpha;
  options.alpha_k = o.alpha_k;
  options.n_basis = o.n_basis;
  options.influence_radius = o.influence_radius;
  if (!o.series_out.empty()) {
    check(primo_oa_write_series(obs.get(), base.get(), o.obstacle.data(), &options,
                                o.series_out.c_str()));
  }
  primo_oa_fit fit{};
  check(primo_oa_learn(obs.get(), base.get(), o.obstacle.data(), &options, &fit));
  check(primo_oa_write(fit.gamma, fit.beta_oa, o.out.c_str()));
  std::cout << "wrote " << o.out << ": gamma " << fmt(fit.gamma) << ", beta_oa "
            << fmt(fit.beta_oa) << " (" << o.method << ")\n";
  if (fit.samples_used > 0) {
    std::cout << "series regression r^2 " << fmt(fit.r_squared) << " over "
              << fit.samples_used << " samples\n";
  }
  if (options.method == PRIMO_OA_TRAJECTORY) {
    std::cout << "rollout residual " << fmt(fit.rms) << " m rms after " << fit.evaluations
              << " rollouts\n";
  }
  return kExitOk;
}

// ---- inspect ----

int cmd_inspect(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".csv") {
    if (is_trajectory_csv(path)) {
      Traj t;
      check(primo_trajectory_read(path.c_str(), t.out()));
      double range = 0.0;
      check(primo_trajectory_range(t.get(), &range));
      std::cout << "trajectory: " << primo_trajectory_size(t.get()) << " samples, "
                << primo_trajectory_dims(t.get()) << " dims, dt " << fmt(primo_trajectory_dt(t.get()))
                << " s, range " << fmt(range) << " m\n";
    } else {
      Demo d;
      check(primo_demo_read(path.c_str(), d.out()));
      std::cout << "raw demo: " << primo_demo_size(d.get()) << " samples, "
                << primo_demo_dims(d.get()) << " dims\n";
    }
    return kExitOk;
  }
  Dmp dmp;
  if (primo_dmp_read(path.c_str(), dmp.out()) == PRIMO_OK) {
    primo_dmp_info info{};
    check(primo_dmp_info_get(dmp.get(), &info));
    std::vector<double> x0(static_cast<std::size_t>(info.dims)), g(x0.size());
    check(primo_dmp_start(dmp.get(), x0.data()));
    check(primo_dmp_goal(dmp.get(), g.data()));
    auto list = [](const std::vector<double>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
      return s;
    };
    std::cout << "dmp: " << info.dims << " dims, " << info.n_basis << " basis functions\n"
              << "alpha " << fmt(info.alpha) << ", beta " << fmt(info.beta) << ", alpha_k "
              << fmt(info.alpha_k) << ", tau " << fmt(info.tau) << " s\n"
              << "x0 " << list(x0) << ", g " << list(g) << '\n';
    return kExitOk;
  }
  double gamma = 0.0, beta = 0.0;
  if (primo_oa_read(path.c_str(), &gamma, &beta) == PRIMO_OK) {
    double peak = 0.0;
    check(primo_turning_rate(1.0 / beta, gamma, beta, &peak));
    std::cout << "avoidance: gamma " << fmt(gamma) << ", beta_oa " << fmt(beta)
              << ", peak turning rate " << fmt(peak) << " rad/s at theta " << fmt(1.0 / beta)
              << " rad\n";
    return kExitOk;
  }
  SceneH scene;
  check(primo_scene_load(path.c_str(), scene.out()));
  primo_scene_info info{};
  check(primo_scene_info_get(scene.get(), &info));
  std::cout << "scene: " << (info.pick_and_raise ? "pick-and-raise" : "pick-and-place") << ", "
            << info.dims << " dims, " << info.n_obstacles << " obstacles, " << info.n_absolute
            << " absolute and " << info.n_relative << " relative skills, dt " << fmt(info.dt)
            << " s, horizon " << fmt(info.horizon) << " s\n";
  return kExitOk;
}

// ---- simulate / batch ----

struct SceneOverrides {
  std::string library;
  bool no_avoidance = false;
  bool no_relative = false;

  void add(CLI::App* app) {
    app->add_option("--library", library, "Skill library JSON replacing the scene's own");
    app->add_flag("--no-avoidance", no_avoidance, "Disable obstacle couplings");
    app->add_flag("--no-relative", no_relative, "Disable relative (grasp) skills");
  }

  SceneH load(const std::string& path) const {
    SceneH scene;
    check(primo_scene_load(path.c_str(), scene.out()));
    if (!library.empty()) check(primo_scene_load_library(scene.get(), library.c_str()));
    if (no_avoidance) check(primo_scene_set_avoidance(scene.get(), 0));
    if (no_relative) check(primo_scene_disable_relative(scene.get()));
    return scene;
  }
};

std::string metrics_line(const primo_metrics& m) {
  std::string s = "success " + std::string(m.success ? "true" : "false") + ", goal_error " +
                  fmt(m.goal_error) + " m, min_clearance " +
                  (m.has_min_clearance ? fmt(m.min_clearance) + " m" : std::string("n/a")) +
                  ", max_grasp_deviation " + fmt(m.max_grasp_deviation) + " m";
  return s;
}

struct SimulateOpts {
  std::string scene;
  std::string out = "rollout";
  SceneOverrides overrides;
};

int cmd_simulate(const SimulateOpts& o) {
  SceneH scene = o.overrides.load(o.scene);
  Log log;
  check(primo_simulate(scene.get(), log.out()));
  check(primo_log_write(log.get(), o.out.c_str()));
  primo_metrics m{};
  check(primo_log_metrics(log.get(), &m));
  std::cout << "wrote " << o.out << "/: " << metrics_line(m) << '\n';
  return m.success ? kExitOk : kExitFailure;
}

struct BatchOpts {
  std::vector<std::string> scenes;
  int runs = 1;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out = "batch";
  SceneOverrides overrides;
};

int cmd_batch(const BatchOpts& o) {
  std::vector<SceneH> loaded;
  for (const auto& path : o.scenes) loaded.push_back(o.overrides.load(path));
  std::vector<const primo_scene*> scenes;
  std::vector<std::uint64_t> seeds;
  for (const auto& s : loaded) {
    for (int r = 0; r < o.runs; ++r) {
      scenes.push_back(s.get());
      seeds.push_back(o.seed.value_or(0) + static_cast<std::uint64_t>(r));
    }
  }
  std::vector<primo_rollout_log*> logs(scenes.size(), nullptr);
  std::vector<primo_status> statuses(scenes.size(), PRIMO_OK);
  primo_simulate_batch(scenes.data(), scenes.size(), o.seed ? seeds.data() : nullptr, o.threads,
                       logs.data(), statuses.data());

  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  int code = kExitOk;
  int succeeded = 0;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    Log log;
    log.p = logs[i];
    char name[32];
    std::snprintf(name, sizeof name, "run_%04zu", i);
    const std::string dir = (std::filesystem::path(o.out) / name).string();
    if (statuses[i] != PRIMO_OK) {
      std::cout << name << ": " << primo_status_name(statuses[i]) << '\n';
      code = std::max(code, exit_code(statuses[i]));
      continue;
    }
    check(primo_log_write(log.get(), dir.c_str()));
    primo_metrics m{};
    check(primo_log_metrics(log.get(), &m));
    std::cout << name << ": " << metrics_line(m) << '\n';
    if (m.success) {
      ++succeeded;
    } else if (code == kExitOk) {
      code = kExitFailure;
    }
  }
  std::cout << succeeded << "/" << scenes.size() << " runs succeeded\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"primo: movement primitives for dual-arm object manipulation", "primo"};
  app.set_version_flag("--version", primo_version());
  app.set_config("--config", "", "TOML/INI file with option defaults ([subcommand] sections)")
      ->envname("PRIMO_CONFIG");
  app.require_subcommand(1);

  GenDemoOpts gen;
  auto* gen_cmd = app.add_subcommand("gen-demo", "Generate a synthetic demonstration CSV");
  gen_cmd->add_option("--profile", gen.profile, "Clean profile")
      ->check(CLI::IsMember({"min-jerk", "dmp-rollout"}))
      ->capture_default_str();
  gen_cmd->add_option("--from", gen.from, "Start position, comma separated")
      ->delimiter(',')
      ->required();
  gen_cmd->add_option("--to", gen.to, "Goal position, comma separated")
      ->delimiter(',')
      ->required();
  gen_cmd->add_option("--duration", gen.duration, "Movement duration (s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--dt", gen.dt, "Sample period (s)")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Gaussian position noise sigma (m)")->capture_default_str();
  gen_cmd->add_option("--jitter", gen.jitter, "Timestamp jitter, fraction of dt")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--obstacle", gen.obstacle, "Obstacle to avoid (dmp-rollout profile)")
      ->delimiter(',');
  gen_cmd->add_option("--gamma", gen.gamma, "Avoidance gamma (1/s)")->capture_default_str();
  gen_cmd->add_option("--beta-oa", gen.beta_oa, "Avoidance beta_oa (1/rad)")->capture_default_str();
  gen_cmd->add_option("--n-basis", gen.n_basis, "Basis functions (dmp-rollout profile)")
      ->capture_default_str();
  gen_cmd->add_option("--influence-radius", gen.influence_radius,
                      "Avoidance tapers to zero at this distance (m, 0: unlimited)")
      ->capture_default_str();
  gen_cmd->add_option("-o,--out", gen.out, "Output CSV")->capture_default_str();
  gen_cmd->add_option("--clean-out", gen.clean_out, "Also write the noise-free demo here");

  PreprocessCmdOpts pre;
  auto* pre_cmd = app.add_subcommand("preprocess", "Resample, filter and smooth a raw demo");
  pre_cmd->add_option("-i,--in", pre.in, "Raw demo CSV")->required()->check(CLI::ExistingFile);
  pre_cmd->add_option("-o,--out", pre.out, "Trajectory CSV")->capture_default_str();
  pre.pre.add(pre_cmd);

  auto* learn_cmd = app.add_subcommand("learn", "Learn a model from demonstrations");
  learn_cmd->require_subcommand(1);

  LearnDmpOpts ldmp;
  auto* ldmp_cmd = learn_cmd->add_subcommand("dmp", "Fit a movement primitive to a demo");
  ldmp_cmd->add_option("-d,--demo", ldmp.demo, "Demo CSV (raw or trajectory)")
      ->required()
      ->check(CLI::ExistingFile);
  ldmp_cmd->add_option("-o,--out", ldmp.out, "Model JSON")->capture_default_str();
  ldmp_cmd->add_option("--rollout-out", ldmp.rollout_out, "Write the reproduction CSV here");
  ldmp_cmd->add_option("--alpha", ldmp.alpha, "Spring gain")->capture_default_str();
  ldmp_cmd->add_option("--alpha-k", ldmp.alpha_k, "Phase decay")->capture_default_str();
  ldmp_cmd->add_option("--n-basis", ldmp.n_basis, "Basis functions")->capture_default_str();
  ldmp.pre.add(ldmp_cmd);

  LearnOaOpts loa;
  auto* loa_cmd = learn_cmd->add_subcommand("oa", "Learn avoidance parameters from a demo pair");
  loa_cmd->add_option("-d,--demo", loa.demo, "Demo passing the obstacle")
      ->required()
      ->check(CLI::ExistingFile);
  loa_cmd->add_option("-b,--baseline", loa.baseline, "Demo without the obstacle")
      ->required()
      ->check(CLI::ExistingFile);
  loa_cmd->add_option("--obstacle", loa.obstacle, "Obstacle position, comma separated")
      ->delimiter(',')
      ->required();
  loa_cmd->add_option("--method", loa.method, "Estimator")
      ->check(CLI::IsMember({"trajectory", "rate", "log-linear"}))
      ->capture_default_str();
  loa_cmd->add_option("--alpha", loa.alpha, "Spring gain of residual and baseline model")
      ->capture_default_str();
  loa_cmd->add_option("--alpha-k", loa.alpha_k, "Baseline model phase decay")->capture_default_str();
  loa_cmd->add_option("--n-basis", loa.n_basis, "Baseline model basis functions")->capture_default_str();
  loa_cmd->add_option("--influence-radius", loa.influence_radius,
                      "Influence radius the demo was recorded with (m, 0: unlimited)")
      ->capture_default_str();
  loa_cmd->add_option("-o,--out", loa.out, "Parameters JSON")->capture_default_str();
  loa_cmd->add_option("--series-out", loa.series_out, "Write theta,theta_dot CSV here");
  loa.pre.add(loa_cmd);

  std::string inspect_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a model, scene or CSV file");
  inspect_cmd->add_option("file", inspect_path, "File to inspect")->required()->check(CLI::ExistingFile);

  SimulateOpts sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a scene and write its rollout log");
  sim_cmd->add_option("-s,--scene", sim.scene, "Scene JSON")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("-o,--out", sim.out, "Output directory")->capture_default_str();
  sim.overrides.add(sim_cmd);

  BatchOpts batch;
  auto* batch_cmd = app.add_subcommand("batch", "Run scenes in parallel");
  batch_cmd->add_option("-s,--scene", batch.scenes, "Scene JSON (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  batch_cmd->add_option("-n,--runs", batch.runs, "Runs per scene")->check(CLI::PositiveNumber)->capture_default_str();
  batch_cmd->add_option("--seed", batch.seed, "Base seed; run r jitters obstacles with seed + r");
  batch_cmd->add_option("-j,--threads", batch.threads, "Worker threads (0: hardware)")->capture_default_str();
  batch_cmd->add_option("-o,--out", batch.out, "Output directory")->capture_default_str();
  batch.overrides.add(batch_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen_demo(gen);
    if (*pre_cmd) return cmd_preprocess(pre);
    if (*ldmp_cmd) return cmd_learn_dmp(ldmp);
    if (*loa_cmd) return cmd_learn_oa(loa);
    if (*inspect_cmd) return cmd_inspect(inspect_path);
    if (*sim_cmd) return cmd_simulate(sim);
    if (*batch_cmd) return cmd_batch(batch);
  } catch (const Failed& f) {
    return f.code;
  }
  return kExitUsage;
}
