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

// C interface to libprimo.
//
// Every fallible call returns a primo_status. On failure the message is
// available from primo_last_error() on the calling thread until the next
// failing call; divergence failures also record the offending step.
// Objects are opaque handles released with their *_free function; freeing
// NULL is a no-op. Arrays are row-major (sample, coordinate).

#ifndef PRIMO_PRIMO_H_
#define PRIMO_PRIMO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PRIMO_API __declspec(dllexport)
#else
#define PRIMO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum primo_status {
  PRIMO_OK = 0,
  PRIMO_ERR_INVALID_ARGUMENT = 1,
  PRIMO_ERR_DEGENERATE_BASIS = 2,
  PRIMO_ERR_DIVERGENCE = 3,
  PRIMO_ERR_UNDEFINED_STEERING = 4,
  PRIMO_ERR_INSUFFICIENT_DATA = 5,
  PRIMO_ERR_NON_PHYSICAL_FIT = 6,
  PRIMO_ERR_DEGENERATE_DATA = 7,
  PRIMO_ERR_IO = 8,
  PRIMO_ERR_PARSE = 9,
  PRIMO_ERR_INTERNAL = 99
} primo_status;

typedef struct primo_raw_demo primo_raw_demo;
typedef struct primo_trajectory primo_trajectory;
typedef struct primo_dmp primo_dmp;
typedef struct primo_scene primo_scene;
typedef struct primo_rollout_log primo_rollout_log;

PRIMO_API const char* primo_version(void);
PRIMO_API const char* primo_status_name(primo_status status);
PRIMO_API const char* primo_last_error(void);
// Step index of the last divergence on this thread, -1 otherwise.
PRIMO_API int64_t primo_last_error_step(void);
PRIMO_API void primo_string_free(char* s);

// ---- demonstrations ----

typedef enum primo_profile {
  PRIMO_PROFILE_MIN_JERK = 0,
  PRIMO_PROFILE_DMP_ROLLOUT = 1
} primo_profile;

typedef struct primo_demo_spec {
  primo_profile profile;
  int dims;             // 1..3
  const double* start;  // dims
  const double* goal;   // dims
  double duration;      // s
  double dt;            // s
  double noise_sigma;   // m
  double time_jitter;   // fraction of dt
  uint64_t seed;
  // dmp-rollout profile
  double dmp_alpha;
  double dmp_alpha_k;
  int dmp_n_basis;
  const double* obstacle;  // dims, or NULL for no injected avoidance
  double gamma;
  double beta_oa;
  double influence_radius;  // m, <= 0: unlimited
} primo_demo_spec;

// Library defaults; start/goal left NULL.
PRIMO_API void primo_demo_spec_init(primo_demo_spec* spec);
PRIMO_API primo_status primo_demo_generate(const primo_demo_spec* spec,
                                           primo_raw_demo** out);
PRIMO_API primo_status primo_demo_read(const char* path, primo_raw_demo** out);
PRIMO_API primo_status primo_demo_write(const primo_raw_demo* demo,
                                        const char* path);
PRIMO_API size_t primo_demo_size(const primo_raw_demo* demo);
PRIMO_API int primo_demo_dims(const primo_raw_demo* demo);
// config_json: {resample_dt, hampel_window, hampel_nsigma, smooth_window},
// any subset, or NULL for defaults.
PRIMO_API primo_status primo_demo_preprocess(const primo_raw_demo* demo,
                                             const char* config_json,
                                             primo_trajectory** out);
PRIMO_API void primo_demo_free(primo_raw_demo* demo);

// ---- trajectories ----

PRIMO_API primo_status primo_trajectory_read(const char* path,
                                             primo_trajectory** out);
PRIMO_API primo_status primo_trajectory_write(const primo_trajectory* traj,
                                              const char* path);
// Velocities and accelerations by finite differences.
PRIMO_API primo_status primo_trajectory_from_positions(
    double dt, size_t n, int dims, const double* positions,
    primo_trajectory** out);
PRIMO_API size_t primo_trajectory_size(const primo_trajectory* traj);
PRIMO_API int primo_trajectory_dims(const primo_trajectory* traj);
PRIMO_API double primo_trajectory_dt(const primo_trajectory* traj);
// out: size * dims
PRIMO_API primo_status primo_trajectory_positions(const primo_trajectory* traj,
                                                  double* out);
// Largest per-coordinate extent of the positions.
PRIMO_API primo_status primo_trajectory_range(const primo_trajectory* traj,
                                              double* out);
PRIMO_API primo_status primo_trajectory_rmse(const primo_trajectory* a,
                                             const primo_trajectory* b,
                                             double* out);
PRIMO_API void primo_trajectory_free(primo_trajectory* traj);

// ---- movement primitives ----

typedef struct primo_dmp_params {
  double alpha;
  double alpha_k;
  int n_basis;
} primo_dmp_params;

typedef struct primo_dmp_info {
  int dims;
  int n_basis;
  double alpha;
  double beta;
  double tau;
  double alpha_k;
} primo_dmp_info;

PRIMO_API void primo_dmp_params_init(primo_dmp_params* params);
PRIMO_API primo_status primo_dmp_fit(const primo_trajectory* demo,
                                     const primo_dmp_params* params,
                                     primo_dmp** out);
PRIMO_API primo_status primo_dmp_read(const char* path, primo_dmp** out);
PRIMO_API primo_status primo_dmp_write(const primo_dmp* dmp, const char* path);
// Caller releases *out with primo_string_free.
PRIMO_API primo_status primo_dmp_to_json(const primo_dmp* dmp, char** out);
PRIMO_API primo_status primo_dmp_info_get(const primo_dmp* dmp,
                                          primo_dmp_info* out);
// out: dims values each
PRIMO_API primo_status primo_dmp_start(const primo_dmp* dmp, double* out);
PRIMO_API primo_status primo_dmp_goal(const primo_dmp* dmp, double* out);

typedef struct primo_rollout_spec {
  const double* x0;    // dims, NULL: the model's start
  const double* goal;  // dims, NULL: the model's goal
  double tau;          // <= 0: the model's tau
  double dt;
  int n_steps;         // output samples
  const double* obstacles;  // n_obstacles * dims, may be NULL
  size_t n_obstacles;
  double gamma;
  double beta_oa;
} primo_rollout_spec;

PRIMO_API void primo_rollout_spec_init(primo_rollout_spec* spec);
PRIMO_API primo_status primo_dmp_rollout(const primo_dmp* dmp,
                                         const primo_rollout_spec* spec,
                                         primo_trajectory** out);
PRIMO_API void primo_dmp_free(primo_dmp* dmp);

// ---- obstacle avoidance ----

typedef enum primo_oa_method {
  PRIMO_OA_LOG_LINEAR = 0,  // regression on log(theta_dot / theta)
  PRIMO_OA_RATE = 1,        // least squares on theta_dot
  PRIMO_OA_TRAJECTORY = 2   // rollout matched to the demo positions
} primo_oa_method;

typedef struct primo_oa_options {
  primo_oa_method method;
  double alpha;             // spring gain of the residual and baseline model
  double alpha_k;           // baseline model phase decay
  int n_basis;              // baseline model basis functions
  double influence_radius;  // m, <= 0: unlimited
} primo_oa_options;

typedef struct primo_oa_fit {
  double gamma;
  double beta_oa;
  double r_squared;  // series regression; 0 when it was skipped
  int samples_used;
  double rms;        // m, trajectory method only
  int evaluations;   // rollouts, trajectory method only
} primo_oa_fit;

PRIMO_API void primo_oa_options_init(primo_oa_options* options);

PRIMO_API primo_status primo_turning_rate(double theta, double gamma,
                                          double beta_oa, double* out);
// Fits avoidance parameters from a demonstration passing an obstacle and a
// baseline without it. obstacle: dims values.
// options may be NULL for defaults.
PRIMO_API primo_status primo_oa_learn(const primo_trajectory* demo_obs,
                                      const primo_trajectory* demo_base,
                                      const double* obstacle,
                                      const primo_oa_options* options,
                                      primo_oa_fit* out);
// Writes the (theta, theta_dot) series of the pair as
// `theta,theta_dot,speed,influence` CSV.
PRIMO_API primo_status primo_oa_write_series(const primo_trajectory* demo_obs,
                                             const primo_trajectory* demo_base,
                                             const double* obstacle,
                                             const primo_oa_options* options,
                                             const char* path);
PRIMO_API primo_status primo_oa_write(double gamma, double beta_oa,
                                      const char* path);
PRIMO_API primo_status primo_oa_read(const char* path, double* gamma,
                                     double* beta_oa);

// ---- scenes and simulation ----

typedef struct primo_metrics {
  double goal_error;
  int has_min_clearance;
  double min_clearance;
  double max_grasp_deviation;
  double stress;
  int collided;
  int success;
} primo_metrics;

typedef struct primo_scene_info {
  int dims;
  int pick_and_raise;
  size_t n_obstacles;
  size_t n_absolute;
  size_t n_relative;
  double dt;
  double horizon;
} primo_scene_info;

// The scene file must carry a skill library ("library": inline or path).
PRIMO_API primo_status primo_scene_load(const char* path, primo_scene** out);
// Replaces the scene's library with the one in a JSON file.
PRIMO_API primo_status primo_scene_load_library(primo_scene* scene,
                                                const char* path);
PRIMO_API primo_status primo_scene_set_avoidance(primo_scene* scene,
                                                 int enabled);
// Disables every relative skill (all relative weights zero).
PRIMO_API primo_status primo_scene_disable_relative(primo_scene* scene);
PRIMO_API primo_status primo_scene_info_get(const primo_scene* scene,
                                            primo_scene_info* out);
PRIMO_API primo_status primo_scene_to_json(const primo_scene* scene, char** out);
PRIMO_API primo_status primo_simulate(const primo_scene* scene,
                                      primo_rollout_log** out);
// Runs n scenes, possibly in parallel (threads <= 0: hardware). With seeds,
// scene i gets its obstacles jittered from seeds[i]. logs[i] is NULL where
// statuses[i] != PRIMO_OK. Returns the first failing status, if any.
PRIMO_API primo_status primo_simulate_batch(const primo_scene* const* scenes,
                                            size_t n, const uint64_t* seeds,
                                            int threads,
                                            primo_rollout_log** logs,
                                            primo_status* statuses);
PRIMO_API void primo_scene_free(primo_scene* scene);

PRIMO_API primo_status primo_log_metrics(const primo_rollout_log* log,
                                         primo_metrics* out);
// object.csv, left.csv, right.csv, commands.csv, metrics.json
PRIMO_API primo_status primo_log_write(const primo_rollout_log* log,
                                       const char* dir);
PRIMO_API const primo_trajectory* primo_log_object(const primo_rollout_log* log);
PRIMO_API void primo_log_free(primo_rollout_log* log);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // PRIMO_PRIMO_H_
