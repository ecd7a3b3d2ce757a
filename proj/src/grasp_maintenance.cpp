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

#include "primo/grasp_maintenance.hpp"

#include <cmath>

#include "primo/error.hpp"

namespace primo {

void ForceCouplingSkill::validate() const {
  require(gain.allFinite() && (gain.array() >= 0.0).all(),
          "force skill: gains must be finite and >= 0");
  require(f_desired.allFinite(), "force skill: desired force must be finite");
}

void DistanceCouplingSkill::validate(bool symmetric_task) const {
  require(gain.allFinite() && (gain.array() >= 0.0).all(),
          "distance skill: gains must be finite and >= 0");
  require(std::isfinite(d_desired_left) && std::isfinite(d_desired_right) &&
              d_desired_left >= 0.0 && d_desired_right >= 0.0,
          "distance skill: desired distances must be finite and >= 0");
  if (symmetric_task) {
    require(d_desired_left == d_desired_right,
            "distance skill: symmetric task requires equal desired distances");
  }
}

Eigen::Vector3d force_correction(const ForceCouplingSkill& skill,
                                 const Eigen::Vector3d& f_measured) {
  require(f_measured.allFinite(), "force skill: measured force must be finite");
  return skill.gain.asDiagonal() * (skill.f_desired - f_measured);
}

Eigen::Vector3d distance_correction(const DistanceCouplingSkill& skill,
                                    Side side, double d_measured,
                                    const Eigen::Vector3d& axis) {
  require(std::isfinite(d_measured), "distance skill: distance must be finite");
  const double len = axis.norm();
  require(std::isfinite(len) && len > 0.0,
          "distance skill: contact axis must be nonzero");
  const double error = skill.desired(side) - d_measured;
  return skill.gain.asDiagonal() * (axis * (error / len));
}

}  // namespace primo
