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

#include "primo/primo.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "primo/avoidance.hpp"
#include "primo/csv.hpp"
#include "primo/demo.hpp"
#include "primo/dmp.hpp"
#include "primo/error.hpp"
#include "primo/serialization.hpp"
#include "primo/simulator.hpp"
#include "primo/trajectory.hpp"

struct primo_raw_demo {
  primo::RawDemo demo;
};

struct primo_trajectory {
  primo::Trajectory traj;
};

struct primo_dmp {
  primo::DmpModel model;
};

struct primo_scene {
  primo::Scene scene;
  primo::SkillLibrary library;
};

struct primo_rollout_log {
  primo::RolloutLog log;
  primo_trajectory object;
};

namespace {

thread_local std::string tl_error;
thread_local int64_t tl_error_step = -1;

primo_status set_error(primo_status status, const char* msg, int64_t step = -1) {
  tl_error = msg;
  tl_error_step = step;
  return status;
}

primo_status from_code(primo::ErrorCode code) {
  return static_cast<primo_status>(static_cast<int>(code));
}

// Runs body, translating exceptions into a status and the thread-local
// message.
template <typename F>
primo_status guarded(F&& body) {
  try {
    body();
    return PRIMO_OK;
  } catch (const primo::DivergenceError& e) {
    return set_error(PRIMO_ERR_DIVERGENCE, e.what(), e.step());
  } catch (const primo::Error& e) {
    return set_error(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PRIMO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PRIMO_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(PRIMO_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) primo::fail(primo::ErrorCode::kInvalidArgument, std::string("null pointer: ") + name);
}

Eigen::VectorXd vec(const double* p, int n) {
  return Eigen::Map<const Eigen::VectorXd>(p, n);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_out(const Eigen::VectorXd& v, double* out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i];
}

primo::AvoidanceLearnOptions learn_options(const primo_oa_options* options) {
  primo::AvoidanceLearnOptions o;
  if (options == nullptr) return o;
  switch (options->method) {
    case PRIMO_OA_LOG_LINEAR: o.method = primo::AvoidanceFitMethod::kLogLinear; break;
    case PRIMO_OA_RATE: o.method = primo::AvoidanceFitMethod::kRate; break;
    case PRIMO_OA_TRAJECTORY: o.method = primo::AvoidanceFitMethod::kTrajectory; break;
    default: primo::fail(primo::ErrorCode::kInvalidArgument, "unknown avoidance fit method");
  }
  o.dmp = {options->alpha, options->alpha_k, options->n_basis};
  if (options->influence_radius > 0.0) o.influence_radius = options->influence_radius;
  return o;
}

}  // namespace

extern "C" {

const char* primo_version(void) { return "0.1.0"; }

const char* primo_status_name(primo_status status) {
  switch (status) {
    case PRIMO_OK: return "ok";
    case PRIMO_ERR_INTERNAL: return "internal";
    default:
      if (status >= PRIMO_ERR_INVALID_ARGUMENT && status <= PRIMO_ERR_PARSE) {
        return primo::to_string(static_cast<primo::ErrorCode>(status));
      }
      return "unknown";
  }
}

const char* primo_last_error(void) { return tl_error.c_str(); }

int64_t primo_last_error_step(void) { return tl_error_step; }

void primo_string_free(char* s) { std::free(s); }

// ---- demonstrations ----

void primo_demo_spec_init(primo_demo_spec* spec) {
  if (spec == nullptr) return;
  const primo::SyntheticDemoSpec d;
  const primo::AvoidanceParams p;
  *spec = primo_demo_spec{};
  spec->profile = PRIMO_PROFILE_MIN_JERK;
  spec->dims = 2;
  spec->duration = d.duration;
  spec->dt = d.dt;
  spec->dmp_alpha = d.dmp.alpha;
  spec->dmp_alpha_k = d.dmp.alpha_k;
  spec->dmp_n_basis = d.dmp.n_basis;
  spec->gamma = p.gamma;
  spec->beta_oa = p.beta_oa;
  spec->influence_radius = 0.0;
}

primo_status primo_demo_generate(const primo_demo_spec* spec, primo_raw_demo** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    need(spec->start, "spec->start");
    need(spec->goal, "spec->goal");
    primo::require(spec->dims >= 1 && spec->dims <= 3, "dims must be 1, 2 or 3");
    primo::SyntheticDemoSpec s;
    if (spec->profile == PRIMO_PROFILE_MIN_JERK) {
      s.profile = primo::DemoProfile::kMinJerk;
    } else if (spec->profile == PRIMO_PROFILE_DMP_ROLLOUT) {
      s.profile = primo::DemoProfile::kDmpRollout;
    } else {
      primo::fail(primo::ErrorCode::kInvalidArgument, "unknown profile");
    }
    s.start = vec(spec->start, spec->dims);
    s.goal = vec(spec->goal, spec->dims);
    s.duration = spec->duration;
    s.dt = spec->dt;
    s.noise_sigma = spec->noise_sigma;
    s.time_jitter = spec->time_jitter;
    s.seed = spec->seed;
    s.dmp = {spec->dmp_alpha, spec->dmp_alpha_k, spec->dmp_n_basis};
    if (spec->obstacle != nullptr) {
      s.avoidance = primo::AvoidanceInjection{
          {vec(spec->obstacle, spec->dims), 0.0},
          {spec->gamma, spec->beta_oa},
          spec->influence_radius > 0.0 ? std::optional<double>(spec->influence_radius)
                                       : std::nullopt};
    }
    *out = new primo_raw_demo{primo::generate_synthetic_demo(s)};
  });
}

primo_status primo_demo_read(const char* path, primo_raw_demo** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream in(path);
    if (!in) primo::fail(primo::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    *out = new primo_raw_demo{primo::read_raw_csv(in)};
  });
}

primo_status primo_demo_write(const primo_raw_demo* demo, const char* path) {
  return guarded([&] {
    need(demo, "demo");
    need(path, "path");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) primo::fail(primo::ErrorCode::kIo, std::string("cannot write '") + path + "'");
    primo::write_raw_csv(demo->demo, out);
    if (!out) primo::fail(primo::ErrorCode::kIo, std::string("write failed: '") + path + "'");
  });
}

size_t primo_demo_size(const primo_raw_demo* demo) {
  return demo == nullptr ? 0 : demo->demo.size();
}

int primo_demo_dims(const primo_raw_demo* demo) {
  return demo == nullptr ? 0 : demo->demo.dims();
}

primo_status primo_demo_preprocess(const primo_raw_demo* demo, const char* config_json,
                                   primo_trajectory** out) {
  return guarded([&] {
    need(demo, "demo");
    need(out, "out");
    primo::PreprocessConfig config;
    if (config_json != nullptr) {
      primo::Json j;
      try {
        j = primo::Json::parse(config_json);
      } catch (const primo::Json::exception& e) {
        primo::fail(primo::ErrorCode::kParse, std::string("preprocess config: ") + e.what());
      }
      config = primo::preprocess_config_from_json(j);
    }
    *out = new primo_trajectory{primo::preprocess(demo->demo, config)};
  });
}

void primo_demo_free(primo_raw_demo* demo) { delete demo; }

// ---- trajectories ----

primo_status primo_trajectory_read(const char* path, primo_trajectory** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new primo_trajectory{primo::read_trajectory_file(path)};
  });
}

primo_status primo_trajectory_write(const primo_trajectory* traj, const char* path) {
  return guarded([&] {
    need(traj, "traj");
    need(path, "path");
    primo::write_trajectory_file(path, traj->traj);
  });
}

primo_status primo_trajectory_from_positions(double dt, size_t n, int dims,
                                             const double* positions,
                                             primo_trajectory** out) {
  return guarded([&] {
    need(positions, "positions");
    need(out, "out");
    primo::require(dims >= 1 && dims <= 3, "dims must be 1, 2 or 3");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::MatrixXd x = Eigen::Map<const RowMajor>(positions, static_cast<Eigen::Index>(n), dims);
    *out = new primo_trajectory{primo::Trajectory::from_positions(dt, std::move(x))};
  });
}

size_t primo_trajectory_size(const primo_trajectory* traj) {
  return traj == nullptr ? 0 : static_cast<size_t>(traj->traj.size());
}

int primo_trajectory_dims(const primo_trajectory* traj) {
  return traj == nullptr ? 0 : traj->traj.dims();
}

double primo_trajectory_dt(const primo_trajectory* traj) {
  return traj == nullptr ? 0.0 : traj->traj.dt();
}

primo_status primo_trajectory_positions(const primo_trajectory* traj, double* out) {
  return guarded([&] {
    need(traj, "traj");
    need(out, "out");
    const Eigen::MatrixXd& x = traj->traj.positions();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index d = 0; d < x.cols(); ++d) out[i * x.cols() + d] = x(i, d);
    }
  });
}

primo_status primo_trajectory_range(const primo_trajectory* traj, double* out) {
  return guarded([&] {
    need(traj, "traj");
    need(out, "out");
    *out = traj->traj.range();
  });
}

primo_status primo_trajectory_rmse(const primo_trajectory* a, const primo_trajectory* b,
                                   double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = primo::position_rmse(a->traj, b->traj);
  });
}

void primo_trajectory_free(primo_trajectory* traj) { delete traj; }

// ---- movement primitives ----

void primo_dmp_params_init(primo_dmp_params* params) {
  if (params == nullptr) return;
  const primo::DmpParams d;
  *params = {d.alpha, d.alpha_k, d.n_basis};
}

primo_status primo_dmp_fit(const primo_trajectory* demo, const primo_dmp_params* params,
                           primo_dmp** out) {
  return guarded([&] {
    need(demo, "demo");
    need(out, "out");
    primo::DmpParams p;
    if (params != nullptr) p = {params->alpha, params->alpha_k, params->n_basis};
    *out = new primo_dmp{primo::fit_weights(demo->traj, p)};
  });
}

primo_status primo_dmp_read(const char* path, primo_dmp** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new primo_dmp{primo::dmp_from_json(primo::read_json_file(path))};
  });
}

primo_status primo_dmp_write(const primo_dmp* dmp, const char* path) {
  return guarded([&] {
    need(dmp, "dmp");
    need(path, "path");
    primo::write_json_file(path, primo::dmp_to_json(dmp->model));
  });
}

primo_status primo_dmp_to_json(const primo_dmp* dmp, char** out) {
  return guarded([&] {
    need(dmp, "dmp");
    need(out, "out");
    *out = dup(primo::dmp_to_json(dmp->model).dump(2));
  });
}

primo_status primo_dmp_info_get(const primo_dmp* dmp, primo_dmp_info* out) {
  return guarded([&] {
    need(dmp, "dmp");
    need(out, "out");
    const primo::DmpModel& m = dmp->model;
    *out = {m.dims(), m.n_basis(), m.alpha, m.beta, m.tau, m.alpha_k};
  });
}

primo_status primo_dmp_start(const primo_dmp* dmp, double* out) {
  return guarded([&] {
    need(dmp, "dmp");
    need(out, "out");
    copy_out(dmp->model.x0, out);
  });
}

primo_status primo_dmp_goal(const primo_dmp* dmp, double* out) {
  return guarded([&] {
    need(dmp, "dmp");
    need(out, "out");
    copy_out(dmp->model.g, out);
  });
}

void primo_rollout_spec_init(primo_rollout_spec* spec) {
  if (spec == nullptr) return;
  const primo::RolloutSpec r;
  const primo::AvoidanceParams p;
  *spec = primo_rollout_spec{};
  spec->dt = r.dt;
  spec->n_steps = r.n_steps;
  spec->gamma = p.gamma;
  spec->beta_oa = p.beta_oa;
}

primo_status primo_dmp_rollout(const primo_dmp* dmp, const primo_rollout_spec* spec,
                               primo_trajectory** out) {
  return guarded([&] {
    need(dmp, "dmp");
    need(spec, "spec");
    need(out, "out");
    const primo::DmpModel& m = dmp->model;
    const int dims = m.dims();
    primo::RolloutSpec r;
    r.x0 = spec->x0 != nullptr ? vec(spec->x0, dims) : m.x0;
    r.g = spec->goal != nullptr ? vec(spec->goal, dims) : m.g;
    r.tau = spec->tau > 0.0 ? spec->tau : m.tau;
    r.dt = spec->dt;
    r.n_steps = spec->n_steps;
    std::vector<primo::Coupling> couplings;
    if (spec->n_obstacles > 0) {
      need(spec->obstacles, "spec->obstacles");
      std::vector<primo::Obstacle> obstacles;
      for (size_t i = 0; i < spec->n_obstacles; ++i) {
        obstacles.push_back({vec(spec->obstacles + i * static_cast<size_t>(dims), dims), 0.0});
      }
      primo::AvoidanceParams p{spec->gamma, spec->beta_oa};
      p.validate();
      couplings.push_back(primo::make_avoidance_coupling(std::move(obstacles), p));
    }
    *out = new primo_trajectory{primo::rollout(m, r, couplings)};
  });
}

void primo_dmp_free(primo_dmp* dmp) { delete dmp; }

// ---- obstacle avoidance ----

primo_status primo_turning_rate(double theta, double gamma, double beta_oa, double* out) {
  return guarded([&] {
    need(out, "out");
    primo::AvoidanceParams p{gamma, beta_oa};
    p.validate();
    *out = primo::turning_rate(theta, p);
  });
}

void primo_oa_options_init(primo_oa_options* options) {
  if (options == nullptr) return;
  const primo::AvoidanceLearnOptions d;
  options->method = PRIMO_OA_TRAJECTORY;
  options->alpha = d.dmp.alpha;
  options->alpha_k = d.dmp.alpha_k;
  options->n_basis = d.dmp.n_basis;
  options->influence_radius = 0.0;
}

primo_status primo_oa_learn(const primo_trajectory* demo_obs, const primo_trajectory* demo_base,
                            const double* obstacle, const primo_oa_options* options,
                            primo_oa_fit* out) {
  return guarded([&] {
    need(demo_obs, "demo_obs");
    need(demo_base, "demo_base");
    need(obstacle, "obstacle");
    need(out, "out");
    const primo::AvoidanceLearnOptions o = learn_options(options);
    const primo::Obstacle ob{vec(obstacle, demo_base->traj.dims()), 0.0};
    const primo::AvoidanceLearnResult r =
        primo::learn_avoidance(demo_obs->traj, demo_base->traj, ob, o);
    *out = primo_oa_fit{};
    out->gamma = r.params.gamma;
    out->beta_oa = r.params.beta_oa;
    out->r_squared = r.series_fit.r_squared;
    out->samples_used = r.series_fit.samples_used;
    if (r.refinement) {
      out->rms = r.refinement->rms;
      out->evaluations = r.refinement->evaluations;
    }
  });
}

primo_status primo_oa_write_series(const primo_trajectory* demo_obs,
                                   const primo_trajectory* demo_base, const double* obstacle,
                                   const primo_oa_options* options, const char* path) {
  return guarded([&] {
    need(demo_obs, "demo_obs");
    need(demo_base, "demo_base");
    need(obstacle, "obstacle");
    need(path, "path");
    const primo::AvoidanceLearnOptions o = learn_options(options);
    const primo::Obstacle ob{vec(obstacle, demo_base->traj.dims()), 0.0};
    const auto series = primo::extract_turning_series(demo_obs->traj, demo_base->traj, ob,
                                                      o.dmp.alpha, o.influence_radius);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) primo::fail(primo::ErrorCode::kIo, std::string("cannot write '") + path + "'");
    primo::csv::write_header(out, {"theta", "theta_dot", "speed", "influence"});
    for (const auto& s : series) {
      primo::csv::write_row(out, {s.theta, s.theta_dot, s.speed, s.influence});
    }
    if (!out) primo::fail(primo::ErrorCode::kIo, std::string("write failed: '") + path + "'");
  });
}

primo_status primo_oa_write(double gamma, double beta_oa, const char* path) {
  return guarded([&] {
    need(path, "path");
    const primo::AvoidanceParams p{gamma, beta_oa};
    p.validate();
    primo::write_json_file(path, primo::avoidance_to_json(p));
  });
}

primo_status primo_oa_read(const char* path, double* gamma, double* beta_oa) {
  return guarded([&] {
    need(path, "path");
    need(gamma, "gamma");
    need(beta_oa, "beta_oa");
    const primo::AvoidanceParams p = primo::avoidance_from_json(primo::read_json_file(path));
    *gamma = p.gamma;
    *beta_oa = p.beta_oa;
  });
}

// ---- scenes and simulation ----

primo_status primo_scene_load(const char* path, primo_scene** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    primo::SceneFile file = primo::load_scene_file(path);
    if (!file.library) {
      primo::fail(primo::ErrorCode::kParse, std::string(path) + ": scene has no library");
    }
    *out = new primo_scene{std::move(file.scene), std::move(*file.library)};
  });
}

primo_status primo_scene_load_library(primo_scene* scene, const char* path) {
  return guarded([&] {
    need(scene, "scene");
    need(path, "path");
    const std::filesystem::path p(path);
    scene->library = primo::library_from_json(primo::read_json_file(p), p.parent_path());
  });
}

primo_status primo_scene_set_avoidance(primo_scene* scene, int enabled) {
  return guarded([&] {
    need(scene, "scene");
    scene->scene.avoidance_enabled = enabled != 0;
  });
}

primo_status primo_scene_disable_relative(primo_scene* scene) {
  return guarded([&] {
    need(scene, "scene");
    for (double& w : scene->library.weights_rel) w = 0.0;
    for (auto& e : scene->scene.schedule) {
      for (double& w : e.w_rel) w = 0.0;
    }
  });
}

primo_status primo_scene_info_get(const primo_scene* scene, primo_scene_info* out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    const primo::Scene& s = scene->scene;
    *out = {s.dims,
            s.task == primo::SceneTask::kPickAndRaise ? 1 : 0,
            s.obstacles.size(),
            scene->library.absolute.size(),
            scene->library.relative.size(),
            s.dt,
            s.horizon};
  });
}

primo_status primo_scene_to_json(const primo_scene* scene, char** out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    primo::Json j = primo::scene_to_json(scene->scene);
    j["library"] = primo::library_to_json(scene->library);
    *out = dup(j.dump(2));
  });
}

primo_status primo_simulate(const primo_scene* scene, primo_rollout_log** out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    primo::RolloutLog log = primo::run(scene->scene, scene->library);
    primo::Trajectory object = log.object;
    *out = new primo_rollout_log{std::move(log), primo_trajectory{std::move(object)}};
  });
}

primo_status primo_simulate_batch(const primo_scene* const* scenes, size_t n,
                                  const uint64_t* seeds, int threads,
                                  primo_rollout_log** logs, primo_status* statuses) {
  primo_status first = PRIMO_OK;
  const primo_status st = guarded([&] {
    need(scenes, "scenes");
    need(logs, "logs");
    need(statuses, "statuses");
    std::vector<primo::BatchJob> jobs;
    jobs.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      need(scenes[i], "scenes[i]");
      jobs.push_back({scenes[i]->scene, &scenes[i]->library,
                      seeds != nullptr ? std::optional<uint64_t>(seeds[i]) : std::nullopt});
    }
    std::vector<primo::BatchEntry> results = primo::batch_run(jobs, threads);
    for (size_t i = 0; i < n; ++i) {
      logs[i] = nullptr;
      if (results[i].log) {
        primo::Trajectory object = results[i].log->object;
        logs[i] = new primo_rollout_log{std::move(*results[i].log),
                                        primo_trajectory{std::move(object)}};
        statuses[i] = PRIMO_OK;
      } else {
        statuses[i] = from_code(*results[i].error);
        if (first == PRIMO_OK) {
          first = statuses[i];
          set_error(first, results[i].message.c_str());
        }
      }
    }
  });
  return st != PRIMO_OK ? st : first;
}

void primo_scene_free(primo_scene* scene) { delete scene; }

primo_status primo_log_metrics(const primo_rollout_log* log, primo_metrics* out) {
  return guarded([&] {
    need(log, "log");
    need(out, "out");
    const primo::Metrics& m = log->log.metrics;
    *out = {m.goal_error,
            m.min_clearance ? 1 : 0,
            m.min_clearance.value_or(0.0),
            m.max_grasp_deviation,
            m.stress,
            m.collided ? 1 : 0,
            m.success ? 1 : 0};
  });
}

primo_status primo_log_write(const primo_rollout_log* log, const char* dir) {
  return guarded([&] {
    need(log, "log");
    need(dir, "dir");
    primo::write_rollout_log(log->log, dir);
  });
}

const primo_trajectory* primo_log_object(const primo_rollout_log* log) {
  return log == nullptr ? nullptr : &log->object;
}

void primo_log_free(primo_rollout_log* log) { delete log; }

}  // extern "C"
