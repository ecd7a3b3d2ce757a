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

#ifndef PRIMO_GRASP_HPP_
#define PRIMO_GRASP_HPP_

#include <Eigen/Dense>

namespace primo {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix6x12d = Eigen::Matrix<double, 6, 12>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

enum class Side { kLeft, kRight };

// Stacked (linear; angular) velocity of a frame.
struct Twist {
  Eigen::Vector3d linear = Eigen::Vector3d::Zero();   // m/s
  Eigen::Vector3d angular = Eigen::Vector3d::Zero();  // rad/s

  Vector6d stacked() const;
  static Twist from_stacked(const Vector6d& v);

  Twist operator+(const Twist& o) const { return {linear + o.linear, angular + o.angular}; }
  Twist operator*(double s) const { return {linear * s, angular * s}; }
};

// Offsets from the object frame to the two contact points.
struct GraspConfig {
  Eigen::Vector3d r_left = Eigen::Vector3d::Zero();
  Eigen::Vector3d r_right = Eigen::Vector3d::Zero();

  const Eigen::Vector3d& offset(Side side) const {
    return side == Side::kLeft ? r_left : r_right;
  }

  // Finite offsets; with symmetric_task also r_left ~= -r_right.
  void validate(bool symmetric_task = false, double tol = 1e-9) const;
};

// S(r) u = r x u.
Eigen::Matrix3d skew(const Eigen::Vector3d& r);

// [I 0; S(r) I].
Matrix6d grasp_matrix(const Eigen::Vector3d& r);

// G^T applied to the object twist: linear part v + w x r, angular unchanged.
Twist contact_twist(const Eigen::Vector3d& r, const Twist& object_twist);
Twist contact_twist(const GraspConfig& config, Side side, const Twist& object_twist);

// [G_L G_R].
Matrix6x12d global_grasp_map(const GraspConfig& config);

}  // namespace primo

#endif  // PRIMO_GRASP_HPP_
