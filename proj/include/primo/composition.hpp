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

#ifndef PRIMO_COMPOSITION_HPP_
#define PRIMO_COMPOSITION_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primo/avoidance.hpp"
#include "primo/dmp.hpp"
#include "primo/grasp.hpp"
#include "primo/grasp_maintenance.hpp"

namespace primo {

// Velocity commands for the two end-effectors.
struct CommandPair {
  Twist left;
  Twist right;
};

// Absolute skill: a primitive moving the object frame, optionally with an
// obstacle-avoidance coupling injected into its transformation system.
struct AbsoluteSkill {
  std::string name;
  DmpModel model;
  std::optional<AvoidanceParams> avoidance;
};

struct SkillLibrary {
  std::vector<AbsoluteSkill> absolute;
  std::vector<RelativeSkill> relative;
  std::vector<double> weights_abs;  // one per absolute skill
  std::vector<double> weights_rel;  // one per relative skill

  void validate() const;
};

// [x_L; x_R] = G^T sum_j w_j x_oj + sum_k w_k [x_CL,k; x_CR,k].
// Weights are used as given, without normalization.
CommandPair merge(const GraspConfig& grasp, std::span<const Twist> abs_velocities,
                  std::span<const double> w_abs,
                  std::span<const CommandPair> rel_velocities,
                  std::span<const double> w_rel);

}  // namespace primo

#endif  // PRIMO_COMPOSITION_HPP_
