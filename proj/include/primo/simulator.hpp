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

#ifndef PRIMO_SIMULATOR_HPP_
#define PRIMO_SIMULATOR_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "primo/avoidance.hpp"
#include "primo/composition.hpp"
#include "primo/error.hpp"
#include "primo/grasp.hpp"
#include "primo/trajectory.hpp"

namespace primo {

// Piecewise-constant weights, active from t_start until the next entry.
struct WeightEntry {
  double t_start = 0.0;
  std::vector<double> w_abs;
  std::vector<double> w_rel;
};

// External velocity pushing both contacts toward the object frame.
struct SqueezeDisturbance {
  double t_start = 0.0;   // s
  double duration = 0.0;  // s
  double speed = 0.0;     // m/s, inward
};

enum class SceneTask { kPickAndPlace, kPickAndRaise };

struct Scene {
  SceneTask task = SceneTask::kPickAndPlace;
  int dims = 2;
  Eigen::VectorXd start;
  Eigen::VectorXd goal;
  GraspConfig grasp;
  bool symmetric_grasp = false;
  std::vector<Obstacle> obstacles;
  std::vector<WeightEntry> schedule;  // empty: library default weights
  double dt = 1e-3;
  double horizon = 5.0;
  std::optional<double> tau;  // overrides every absolute skill's tau
  bool avoidance_enabled = true;
  std::optional<double> influence_radius;
  std::optional<SqueezeDisturbance> disturbance;
  double obstacle_jitter = 0.0;  // m, used by randomized()
  double goal_tolerance = 1e-3;
  double grasp_tolerance = 1e-3;

  void validate() const;
};

struct Metrics {
  double goal_error = 0.0;                   // m
  std::optional<double> min_clearance;       // m; empty without obstacles
  double max_grasp_deviation = 0.0;          // m
  double stress = 0.0;                       // max |D_r - D_d|, m
  bool collided = false;
  bool success = false;
};

struct RolloutLog {
  Trajectory object;
  Trajectory left;   // contact points, always 3D
  Trajectory right;
  Eigen::MatrixXd commands;  // n x 12: merged [left twist; right twist]
  Metrics metrics;
};

// Desired object-to-contact distance per side: the first distance skill's
// setpoint, otherwise the grasp offset length.
double desired_contact_distance(const Scene& scene, const SkillLibrary& library,
                                Side side);

// Metrics derived purely from the logged series.
Metrics compute_metrics(const Scene& scene, const SkillLibrary& library,
                        const Trajectory& object, const Trajectory& left,
                        const Trajectory& right);

// Per step: advance each absolute skill's phase, evaluate its transformation
// system plus avoidance couplings, evaluate relative corrections from the
// measured contact distances, merge at the velocity level, move the
// contacts, and log. Deterministic.
RolloutLog run_scene(const Scene& scene, const SkillLibrary& library);

// Pick-and-raise variant: the library must hold a distance grasp skill.
RolloutLog run_pick_and_raise(const Scene& scene, const SkillLibrary& library);

// Dispatches on scene.task.
RolloutLog run(const Scene& scene, const SkillLibrary& library);

// Copy of the scene with each obstacle shifted uniformly within
// +-obstacle_jitter per axis.
Scene randomized(const Scene& scene, std::uint64_t seed);

struct BatchEntry {
  std::optional<RolloutLog> log;
  std::optional<ErrorCode> error;
  std::string message;
};

// Independent rollouts, possibly in parallel. With seeds, scene i is
// randomized(scenes[i], seeds[i]) first. Errors stay with their entry.
std::vector<BatchEntry> batch_run(std::span<const Scene> scenes,
                                  const SkillLibrary& library,
                                  std::span<const std::uint64_t> seeds = {},
                                  int threads = 0);

// One scene with its own library; `library` must outlive the call.
struct BatchJob {
  Scene scene;
  const SkillLibrary* library = nullptr;
  std::optional<std::uint64_t> seed;  // randomize the scene first
};
std::vector<BatchEntry> batch_run(std::span<const BatchJob> jobs, int threads = 0);

}  // namespace primo

#endif  // PRIMO_SIMULATOR_HPP_
