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


#include <random>

#include <gtest/gtest.h>

#include "primo/grasp.hpp"
#include "testing.hpp"

namespace primo {
namespace {

using testing::throws_code;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  Eigen::Vector3d vec() { return {u_(gen_), u_(gen_), u_(gen_)}; }
  Twist twist() { return {vec(), vec()}; }
  double scalar() { return u_(gen_); }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> u_{-1.0, 1.0};
};

TEST(Skew, MatchesCrossProduct) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d r = rng.vec();
    const Eigen::Vector3d u = rng.vec();
    const Eigen::Vector3d want(r[1] * u[2] - r[2] * u[1], r[2] * u[0] - r[0] * u[2],
                               r[0] * u[1] - r[1] * u[0]);
    EXPECT_LT((skew(r) * u - want).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Skew, ExactlyAntisymmetric) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Matrix3d s = skew(rng.vec());
    EXPECT_TRUE(s.transpose() == -s);
  }
}

TEST(GraspMatrix, BlockLayout) {
  const Eigen::Vector3d r(0.1, -0.2, 0.3);
  const Matrix6d g = grasp_matrix(r);
  Matrix6d want;
  want << Eigen::Matrix3d::Identity(), Eigen::Matrix3d::Zero(), skew(r),
      Eigen::Matrix3d::Identity();
  EXPECT_TRUE(g == want);
}

TEST(GraspMatrix, ComposesByAddingOffsets) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d r1 = rng.vec();
    const Eigen::Vector3d r2 = rng.vec();
    const Matrix6d prod = grasp_matrix(r1) * grasp_matrix(r2);
    EXPECT_LT((prod - grasp_matrix(r1 + r2)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ContactTwist, PureRotation) {
  const Twist obj{Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, 1)};
  const Twist c = contact_twist(Eigen::Vector3d(0.1, 0, 0), obj);
  EXPECT_LT((c.linear - Eigen::Vector3d(0, 0.1, 0)).norm(), 1e-15);
  EXPECT_TRUE(c.angular == obj.angular);
}

TEST(ContactTwist, MatchesTransposedGraspMatrix) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d r = rng.vec();
    const Twist t = rng.twist();
    const Vector6d want = grasp_matrix(r).transpose() * t.stacked();
    EXPECT_LT((contact_twist(r, t).stacked() - want).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ContactTwist, ZeroOffsetIsIdentity) {
  Rng rng(5);
  const Twist t = rng.twist();
  const Twist c = contact_twist(Eigen::Vector3d::Zero(), t);
  EXPECT_TRUE(c.linear == t.linear);
  EXPECT_TRUE(c.angular == t.angular);
}

TEST(ContactTwist, Linear) {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d r = rng.vec();
    const Twist a = rng.twist();
    const Twist b = rng.twist();
    const double s = rng.scalar();
    const Vector6d lhs = contact_twist(r, a * s + b).stacked();
    const Vector6d rhs = contact_twist(r, a).stacked() * s + contact_twist(r, b).stacked();
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ContactTwist, RigidBodyConsistency) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const GraspConfig g{rng.vec(), rng.vec()};
    const Twist t = rng.twist();
    const Eigen::Vector3d dv = contact_twist(g, Side::kLeft, t).linear -
                               contact_twist(g, Side::kRight, t).linear;
    EXPECT_LT((dv - t.angular.cross(g.r_left - g.r_right)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ContactTwist, SymmetricGraspUnderPureRotation) {
  const GraspConfig g{Eigen::Vector3d(0, 0.06, 0), Eigen::Vector3d(0, -0.06, 0)};
  const Twist t{Eigen::Vector3d::Zero(), Eigen::Vector3d(0.3, -0.2, 1.0)};
  const Eigen::Vector3d dv = contact_twist(g, Side::kLeft, t).linear -
                             contact_twist(g, Side::kRight, t).linear;
  EXPECT_LT((dv - t.angular.cross(g.r_left - g.r_right)).norm(), 1e-15);
}

TEST(GlobalMap, StacksBothContacts) {
  Rng rng(8);
  const GraspConfig g{rng.vec(), rng.vec()};
  const Twist t = rng.twist();
  const Eigen::Matrix<double, 12, 1> both = global_grasp_map(g).transpose() * t.stacked();
  EXPECT_LT((both.head<6>() - contact_twist(g, Side::kLeft, t).stacked()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((both.tail<6>() - contact_twist(g, Side::kRight, t).stacked()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GraspConfig, Validation) {
  GraspConfig g{Eigen::Vector3d(0, 0.06, 0), Eigen::Vector3d(0, -0.06, 0)};
  EXPECT_NO_THROW(g.validate(true));
  g.r_right = Eigen::Vector3d(0, -0.05, 0);
  EXPECT_NO_THROW(g.validate(false));
  EXPECT_TRUE(throws_code([&] { g.validate(true); }, ErrorCode::kInvalidArgument));
  g.r_left[0] = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(throws_code([&] { g.validate(false); }, ErrorCode::kInvalidArgument));
}

TEST(TwistType, StackedRoundTrip) {
  Rng rng(9);
  const Twist t = rng.twist();
  const Twist back = Twist::from_stacked(t.stacked());
  EXPECT_TRUE(back.linear == t.linear && back.angular == t.angular);
  EXPECT_TRUE(t.stacked().head<3>() == t.linear);
}

}  // namespace
}  // namespace primo
