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

#ifndef PRIMO_GRASP_MAINTENANCE_HPP_
#define PRIMO_GRASP_MAINTENANCE_HPP_

#include <variant>

#include <Eigen/Dense>

#include "primo/grasp.hpp"

namespace primo {

// Contact velocity proportional to the contact-force error. Gains are the
// diagonal of K in (m/s)/N. Corrections are expressed in the object frame.
struct ForceCouplingSkill {
  Eigen::Vector3d gain = Eigen::Vector3d::Ones();
  Eigen::Vector3d f_desired = Eigen::Vector3d::Zero();  // N

  void validate() const;
};

// Distance proxy for the force loop: regulate the object-to-contact distance
// of each arm. Gains are the diagonal of K in 1/s.
struct DistanceCouplingSkill {
  Eigen::Vector3d gain = Eigen::Vector3d::Ones();
  double d_desired_left = 0.0;   // m
  double d_desired_right = 0.0;  // m

  double desired(Side side) const {
    return side == Side::kLeft ? d_desired_left : d_desired_right;
  }

  void validate(bool symmetric_task = false) const;
};

using RelativeSkill = std::variant<DistanceCouplingSkill, ForceCouplingSkill>;

// K (F_d - F_r).
Eigen::Vector3d force_correction(const ForceCouplingSkill& skill,
                                 const Eigen::Vector3d& f_measured);

// K (D_d - D_r) u, with u the unit object-to-contact axis: a contact that
// sits too close is pushed outward.
Eigen::Vector3d distance_correction(const DistanceCouplingSkill& skill,
                                    Side side, double d_measured,
                                    const Eigen::Vector3d& axis);

}  // namespace primo

#endif  // PRIMO_GRASP_MAINTENANCE_HPP_
