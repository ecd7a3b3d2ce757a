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

#include "primo/grasp.hpp"

#include "primo/error.hpp"

namespace primo {

Vector6d Twist::stacked() const {
  Vector6d out;
  out << linear, angular;
  return out;
}

Twist Twist::from_stacked(const Vector6d& v) {
  return {v.head<3>(), v.tail<3>()};
}

void GraspConfig::validate(bool symmetric_task, double tol) const {
  require(r_left.allFinite() && r_right.allFinite(),
          "grasp: contact offsets must be finite");
  if (symmetric_task) {
    require((r_left + r_right).norm() <= tol,
            "grasp: symmetric task requires r_left = -r_right");
  }
}

Eigen::Matrix3d skew(const Eigen::Vector3d& r) {
  Eigen::Matrix3d s;
  s << 0.0, -r.z(), r.y(),
       r.z(), 0.0, -r.x(),
       -r.y(), r.x(), 0.0;
  return s;
}

Matrix6d grasp_matrix(const Eigen::Vector3d& r) {
  Matrix6d g = Matrix6d::Identity();
  g.block<3, 3>(3, 0) = skew(r);
  return g;
}

Twist contact_twist(const Eigen::Vector3d& r, const Twist& object_twist) {
  return Twist::from_stacked(grasp_matrix(r).transpose() * object_twist.stacked());
}

Twist contact_twist(const GraspConfig& config, Side side,
                    const Twist& object_twist) {
  return contact_twist(config.offset(side), object_twist);
}

Matrix6x12d global_grasp_map(const GraspConfig& config) {
  Matrix6x12d g;
  g << grasp_matrix(config.r_left), grasp_matrix(config.r_right);
  return g;
}

}  // namespace primo
