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

#include "primo/composition.hpp"

#include <cmath>

#include "primo/error.hpp"

namespace primo {
namespace {

void check_weights(std::span<const double> w, const char* what) {
  for (double x : w) {
    require(std::isfinite(x) && x >= 0.0,
            std::string("merge: ") + what + " weights must be finite and >= 0");
  }
}

}  // namespace

void SkillLibrary::validate() const {
  require(weights_abs.size() == absolute.size(),
          "library: one absolute weight per absolute skill");
  require(weights_rel.size() == relative.size(),
          "library: one relative weight per relative skill");
  check_weights(weights_abs, "absolute");
  check_weights(weights_rel, "relative");
  require(!absolute.empty() || !relative.empty(), "library: no skills");
  for (const auto& s : absolute) {
    s.model.validate();
    if (s.avoidance) s.avoidance->validate();
  }
  for (const auto& s : relative) {
    std::visit([](const auto& skill) { skill.validate(); }, s);
  }
}

CommandPair merge(const GraspConfig& grasp, std::span<const Twist> abs_velocities,
                  std::span<const double> w_abs,
                  std::span<const CommandPair> rel_velocities,
                  std::span<const double> w_rel) {
  require(abs_velocities.size() == w_abs.size(),
          "merge: absolute velocities and weights differ in length");
  require(rel_velocities.size() == w_rel.size(),
          "merge: relative velocities and weights differ in length");
  check_weights(w_abs, "absolute");
  check_weights(w_rel, "relative");

  Vector6d object = Vector6d::Zero();
  for (std::size_t j = 0; j < abs_velocities.size(); ++j) {
    object += w_abs[j] * abs_velocities[j].stacked();
  }
  Eigen::Matrix<double, 12, 1> out = global_grasp_map(grasp).transpose() * object;
  for (std::size_t k = 0; k < rel_velocities.size(); ++k) {
    out.head<6>() += w_rel[k] * rel_velocities[k].left.stacked();
    out.tail<6>() += w_rel[k] * rel_velocities[k].right.stacked();
  }
  return {Twist::from_stacked(out.head<6>()), Twist::from_stacked(out.tail<6>())};
}

}  // namespace primo
