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

// JSON and file formats: models, avoidance parameters, skills, scenes,
// preprocessing config, rollout logs.

#ifndef PRIMO_SERIALIZATION_HPP_
#define PRIMO_SERIALIZATION_HPP_

#include <filesystem>
#include <optional>

#include "json.hpp"
#include "primo/avoidance.hpp"
#include "primo/composition.hpp"
#include "primo/demo.hpp"
#include "primo/dmp.hpp"
#include "primo/simulator.hpp"
#include "primo/trajectory.hpp"

namespace primo {

using Json = nlohmann::json;

// {alpha, beta, tau, alpha_k, centers[], widths[], weights[][dof], x0[], g[], dims}
Json dmp_to_json(const DmpModel& model);
DmpModel dmp_from_json(const Json& j);

// {gamma, beta_oa}
Json avoidance_to_json(const AvoidanceParams& params);
AvoidanceParams avoidance_from_json(const Json& j);

// {type: "distance"|"force", gain: [..], setpoint: [..]}. Distance setpoints
// are [d_left, d_right]; force setpoints the desired force vector.
Json relative_skill_to_json(const RelativeSkill& skill);
RelativeSkill relative_skill_from_json(const Json& j);

// {resample_dt, hampel_window, hampel_nsigma, smooth_window}; missing keys
// keep their defaults.
PreprocessConfig preprocess_config_from_json(const Json& j);

// {absolute: [{name, dmp, avoidance, weight}], relative: [{..., weight}]}.
// `dmp` and `avoidance` may be inline objects or paths resolved against
// base_dir.
SkillLibrary library_from_json(const Json& j,
                               const std::filesystem::path& base_dir = {});
Json library_to_json(const SkillLibrary& library);

Scene scene_from_json(const Json& j);
Json scene_to_json(const Scene& scene);

struct SceneFile {
  Scene scene;
  std::optional<SkillLibrary> library;  // from the "library" key, if present
};
SceneFile load_scene_file(const std::filesystem::path& path);

// {goal_error, min_clearance, max_grasp_deviation, stress, collided, success}
Json metrics_to_json(const Metrics& metrics);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);
Trajectory read_trajectory_file(const std::filesystem::path& path);
void write_trajectory_file(const std::filesystem::path& path,
                           const Trajectory& traj);

// object.csv, left.csv, right.csv, commands.csv, metrics.json under dir.
void write_rollout_log(const RolloutLog& log, const std::filesystem::path& dir);

}  // namespace primo

#endif  // PRIMO_SERIALIZATION_HPP_
