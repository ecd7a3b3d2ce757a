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
#include <vector>

#include <gtest/gtest.h>

#include "primo/composition.hpp"
#include "testing.hpp"

namespace primo {
namespace {

using testing::throws_code;

struct Inputs {
  GraspConfig grasp;
  std::vector<Twist> abs;
  std::vector<double> w_abs;
  std::vector<CommandPair> rel;
  std::vector<double> w_rel;
};

Inputs random_inputs(std::uint64_t seed, int j, int k) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto vec = [&] { return Eigen::Vector3d(u(rng), u(rng), u(rng)); };
  Inputs in;
  in.grasp = {vec(), vec()};
  for (int i = 0; i < j; ++i) {
    in.abs.push_back({vec(), vec()});
    in.w_abs.push_back(0.5 * (u(rng) + 1.0));
  }
  for (int i = 0; i < k; ++i) {
    in.rel.push_back({{vec(), vec()}, {vec(), vec()}});
    in.w_rel.push_back(0.5 * (u(rng) + 1.0));
  }
  return in;
}

CommandPair run(const Inputs& in) {
  return merge(in.grasp, in.abs, in.w_abs, in.rel, in.w_rel);
}

double gap(const CommandPair& a, const CommandPair& b) {
  Eigen::Matrix<double, 12, 1> x, y;
  x << a.left.stacked(), a.right.stacked();
  y << b.left.stacked(), b.right.stacked();
  return (x - y).cwiseAbs().maxCoeff();
}

// Component-wise arithmetic, written out without the grasp matrix.
CommandPair brute_force(const Inputs& in) {
  CommandPair out;
  Twist* sides[2] = {&out.left, &out.right};
  const Eigen::Vector3d* offsets[2] = {&in.grasp.r_left, &in.grasp.r_right};
  for (int s = 0; s < 2; ++s) {
    double lin[3] = {0, 0, 0};
    double ang[3] = {0, 0, 0};
    const Eigen::Vector3d& r = *offsets[s];
    for (std::size_t j = 0; j < in.abs.size(); ++j) {
      const Eigen::Vector3d& v = in.abs[j].linear;
      const Eigen::Vector3d& w = in.abs[j].angular;
      const double cross[3] = {w[1] * r[2] - w[2] * r[1], w[2] * r[0] - w[0] * r[2],
                               w[0] * r[1] - w[1] * r[0]};
      for (int c = 0; c < 3; ++c) {
        lin[c] += in.w_abs[j] * (v[c] + cross[c]);
        ang[c] += in.w_abs[j] * w[c];
      }
    }
    for (std::size_t k = 0; k < in.rel.size(); ++k) {
      const Twist& t = s == 0 ? in.rel[k].left : in.rel[k].right;
      for (int c = 0; c < 3; ++c) {
        lin[c] += in.w_rel[k] * t.linear[c];
        ang[c] += in.w_rel[k] * t.angular[c];
      }
    }
    sides[s]->linear = Eigen::Vector3d(lin[0], lin[1], lin[2]);
    sides[s]->angular = Eigen::Vector3d(ang[0], ang[1], ang[2]);
  }
  return out;
}

TEST(Merge, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Inputs in = random_inputs(seed, 2, 1);
    EXPECT_LT(gap(run(in), brute_force(in)), 1e-12);
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Inputs in = random_inputs(1000 + seed, 1 + seed % 4, seed % 3);
    EXPECT_LT(gap(run(in), brute_force(in)), 1e-12);
  }
}

TEST(Merge, ZeroWeightsGiveZeroCommands) {
  Inputs in = random_inputs(1, 2, 2);
  for (auto& w : in.w_abs) w = 0.0;
  for (auto& w : in.w_rel) w = 0.0;
  EXPECT_EQ(gap(run(in), CommandPair{}), 0.0);
}

TEST(Merge, WeightsAreNotNormalized) {
  Inputs in = random_inputs(2, 1, 0);
  const CommandPair one = run(in);
  in.w_abs[0] *= 3.0;
  const CommandPair three = run(in);
  EXPECT_LT((three.left.linear - 3.0 * one.left.linear).norm(), 1e-12);
}

TEST(Merge, LinearInVelocitiesAndWeights) {
  const Inputs a = random_inputs(3, 2, 2);
  Inputs b = random_inputs(4, 2, 2);
  b.grasp = a.grasp;
  b.w_abs = a.w_abs;
  b.w_rel = a.w_rel;
  Inputs sum = a;
  for (std::size_t j = 0; j < 2; ++j) sum.abs[j] = a.abs[j] + b.abs[j];
  for (std::size_t k = 0; k < 2; ++k) {
    sum.rel[k].left = a.rel[k].left + b.rel[k].left;
    sum.rel[k].right = a.rel[k].right + b.rel[k].right;
  }
  const CommandPair ra = run(a), rb = run(b);
  const CommandPair want{ra.left + rb.left, ra.right + rb.right};
  EXPECT_LT(gap(run(sum), want), 1e-12);

  Inputs wa = a, wb = a, ws = a;
  wb.w_abs = {0.3, 0.1};
  wb.w_rel = {0.7, 0.2};
  for (std::size_t j = 0; j < 2; ++j) ws.w_abs[j] = wa.w_abs[j] + wb.w_abs[j];
  for (std::size_t k = 0; k < 2; ++k) ws.w_rel[k] = wa.w_rel[k] + wb.w_rel[k];
  const CommandPair rwa = run(wa), rwb = run(wb);
  EXPECT_LT(gap(run(ws), {rwa.left + rwb.left, rwa.right + rwb.right}), 1e-12);
}

TEST(Merge, PermutationInvariant) {
  const Inputs in = random_inputs(5, 3, 2);
  Inputs p = in;
  std::swap(p.abs[0], p.abs[2]);
  std::swap(p.w_abs[0], p.w_abs[2]);
  std::swap(p.rel[0], p.rel[1]);
  std::swap(p.w_rel[0], p.w_rel[1]);
  EXPECT_LT(gap(run(in), run(p)), 1e-12);
}

TEST(Merge, SymmetricRelativeSkillDoesNotTranslateObject) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d r(u(rng), u(rng), u(rng));
    const Eigen::Vector3d c(u(rng), u(rng), u(rng));
    Inputs in;
    in.grasp = {r, -r};
    in.rel.push_back({{c, Eigen::Vector3d::Zero()}, {-c, Eigen::Vector3d::Zero()}});
    in.w_rel.push_back(0.5 * (u(rng) + 1.0));
    const CommandPair out = run(in);
    EXPECT_LT((0.5 * (out.left.linear + out.right.linear)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Merge, LengthMismatch) {
  Inputs in = random_inputs(7, 2, 1);
  in.w_abs.pop_back();
  EXPECT_TRUE(throws_code([&] { run(in); }, ErrorCode::kInvalidArgument));
  in = random_inputs(7, 2, 1);
  in.w_rel.push_back(1.0);
  EXPECT_TRUE(throws_code([&] { run(in); }, ErrorCode::kInvalidArgument));
}

TEST(Library, Validation) {
  SkillLibrary lib;
  EXPECT_TRUE(throws_code([&] { lib.validate(); }, ErrorCode::kInvalidArgument));
  lib.relative.push_back(DistanceCouplingSkill{});
  lib.weights_rel.push_back(1.0);
  EXPECT_NO_THROW(lib.validate());
  lib.weights_rel[0] = -1.0;
  EXPECT_TRUE(throws_code([&] { lib.validate(); }, ErrorCode::kInvalidArgument));
  lib.weights_rel.clear();
  EXPECT_TRUE(throws_code([&] { lib.validate(); }, ErrorCode::kInvalidArgument));
}

}  // namespace
}  // namespace primo
