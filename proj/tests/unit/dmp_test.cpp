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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "primo/demo.hpp"
#include "primo/dmp.hpp"
#include "testing.hpp"

namespace primo {
namespace {

using testing::throws_code;

DmpModel random_model(int n_basis, int dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  DmpModel m;
  const Basis b = make_basis(n_basis, m.alpha_k);
  m.centers = b.centers;
  m.widths = b.widths;
  m.weights = Eigen::MatrixXd::NullaryExpr(n_basis, dims, [&] { return 200.0 * n(rng); });
  m.x0 = Eigen::VectorXd::NullaryExpr(dims, [&] { return 0.1 * n(rng); });
  m.g = Eigen::VectorXd::NullaryExpr(dims, [&] { return 0.3 * n(rng); });
  return m;
}

RolloutSpec spec_for(const DmpModel& m, double dt, int n_steps) {
  RolloutSpec s;
  s.x0 = m.x0;
  s.g = m.g;
  s.tau = m.tau;
  s.dt = dt;
  s.n_steps = n_steps;
  return s;
}

Trajectory min_jerk_demo(int dims) {
  Eigen::VectorXd a(dims), b(dims);
  a.setZero();
  for (int d = 0; d < dims; ++d) b[d] = 0.3 - 0.2 * d;
  return min_jerk(a, b, 1.0, 1e-3);
}

TEST(Canonical, MatchesClosedForm) {
  const auto k = canonical_rollout(4.0, 2.0, 1e-3, 2001);
  ASSERT_EQ(k.size(), 2001u);
  EXPECT_EQ(k[0], 1.0);
  EXPECT_NEAR(k[2000] / std::exp(-4.0), 1.0, 1e-3);
  for (std::size_t i = 1; i < k.size(); ++i) {
    EXPECT_LT(k[i], k[i - 1]);
    EXPECT_GT(k[i], 0.0);
  }
}

TEST(Canonical, UnitDecayAtOneTau) {
  const auto k = canonical_rollout(1.0, 1.0, 1e-4, 10001);
  EXPECT_NEAR(k.back(), 0.36787944117144233, 1e-9);
}

TEST(Canonical, RejectsNonPositiveParameters) {
  EXPECT_TRUE(throws_code([] { canonical_rollout(0.0, 1.0, 1e-3, 10); },
                          ErrorCode::kInvalidArgument));
  EXPECT_TRUE(throws_code([] { canonical_rollout(1.0, -1.0, 1e-3, 10); },
                          ErrorCode::kInvalidArgument));
  EXPECT_TRUE(throws_code([] { canonical_rollout(1.0, 1.0, 0.0, 10); },
                          ErrorCode::kInvalidArgument));
  EXPECT_TRUE(throws_code([] { canonical_rollout(1.0, 1.0, 1e-3, 0); },
                          ErrorCode::kInvalidArgument));
}

TEST(Basis, ExponentialPlacement) {
  const Basis b = make_basis(7, 8.0);
  ASSERT_EQ(b.centers.size(), 7);
  for (int i = 0; i < 7; ++i) {
    EXPECT_DOUBLE_EQ(b.centers[i], std::exp(-8.0 * i / 6.0));
  }
  for (int i = 0; i < 6; ++i) {
    const double gap = b.centers[i + 1] - b.centers[i];
    EXPECT_DOUBLE_EQ(b.widths[i], 1.0 / (gap * gap));
  }
  EXPECT_EQ(b.widths[6], b.widths[5]);
}

TEST(Forcing, MatchesDirectFormula) {
  const DmpModel m = random_model(10, 2, 7);
  const double k = 0.5;
  for (int d = 0; d < 2; ++d) {
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double diff = k - m.centers[i];
      const double psi = std::exp(-m.widths[i] * diff * diff);
      num += m.weights(i, d) * psi;
      den += psi;
    }
    EXPECT_NEAR(forcing_term(m, k, d), k * num / den, 1e-12 * std::abs(k * num / den));
  }
}

TEST(Forcing, DegenerateBasisReported) {
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(1, 1.0);
  const Eigen::VectorXd h = Eigen::VectorXd::Constant(1, 1e6);
  EXPECT_TRUE(throws_code([&] { basis_row(c, h, 1e-3); }, ErrorCode::kDegenerateBasis));
}

TEST(Fit, ExactFamilyRoundTrip) {
  DmpModel m = random_model(20, 2, 11);
  const Trajectory demo = reproduce(m, 1e-3, 1001);
  DmpParams p;
  p.n_basis = 20;
  const DmpModel fitted = fit_weights(demo, p);
  const Trajectory again = reproduce(fitted, 1e-3, 1001);
  EXPECT_LT(position_rmse(demo, again), 1e-6 * demo.range());
}

TEST(Fit, MinJerkRoundTripUnderTwoPercent) {
  for (int dims : {1, 2, 3}) {
    const Trajectory demo = min_jerk_demo(dims);
    const DmpModel m = fit_weights(demo);
    const Trajectory r = reproduce(m, demo.dt(), static_cast<int>(demo.size()));
    EXPECT_LT(position_rmse(demo, r), 0.02 * demo.range()) << dims;
  }
}

// x(t) = g + (x0 - g)(1 + w t) e^{-w t} with w = alpha / (2 tau) solves the
// unforced, critically damped system, so it should need no forcing at all.
TEST(Fit, UnforcedSolutionNeedsNoForcing) {
  const double alpha = 25.0;
  const double tau = 1.0;
  const double w = alpha / (2.0 * tau);
  const double x0 = 0.1;
  const double g = 0.4;
  const int n = 1001;
  const double dt = 1e-3;
  Eigen::MatrixXd x(n, 1), v(n, 1), a(n, 1);
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    const double e = std::exp(-w * t);
    x(i, 0) = g + (x0 - g) * (1.0 + w * t) * e;
    v(i, 0) = -(x0 - g) * w * w * t * e;
    a(i, 0) = -(x0 - g) * w * w * (1.0 - w * t) * e;
  }
  const Trajectory demo(dt, x, v, a);
  const Eigen::MatrixXd f =
      forcing_targets(demo, alpha, tau, Eigen::VectorXd::Constant(1, g));
  EXPECT_LT(f.cwiseAbs().maxCoeff(), 1e-12 * alpha * alpha * std::abs(g - x0));

  const auto k = canonical_rollout(8.0, tau, dt, n);
  const Basis b = make_basis(50, 8.0);
  const Eigen::MatrixXd wts = solve_weights(b, k, f);
  EXPECT_LT(wts.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Fit, Idempotent) {
  const DmpModel first = fit_weights(min_jerk_demo(2));
  const Trajectory r = reproduce(first, 1e-3, 1001);
  // The rollout has not fully settled at t = tau, so refit against the
  // original goal rather than the last sample.
  const auto k = canonical_rollout(first.alpha_k, first.tau, r.dt(), static_cast<int>(r.size()));
  const Eigen::MatrixXd second = solve_weights(
      {first.centers, first.widths}, k, forcing_targets(r, first.alpha, first.tau, first.g));
  EXPECT_LT((second - first.weights).norm(), 1e-6 * first.weights.norm());
}

TEST(Fit, LinearInTargets) {
  const Trajectory d1 = min_jerk_demo(2);
  const Trajectory d2 = min_jerk(Eigen::Vector2d(0.2, -0.1), Eigen::Vector2d(-0.3, 0.4), 1.0, 1e-3);
  const auto k = canonical_rollout(8.0, 1.0, 1e-3, static_cast<int>(d1.size()));
  const Basis b = make_basis(50, 8.0);
  const Eigen::MatrixXd t1 = forcing_targets(d1, 25.0, 1.0, d1.position(d1.size() - 1));
  const Eigen::MatrixXd t2 = forcing_targets(d2, 25.0, 1.0, d2.position(d2.size() - 1));
  const Eigen::MatrixXd sum = solve_weights(b, k, t1 + t2);
  const Eigen::MatrixXd parts = solve_weights(b, k, t1) + solve_weights(b, k, t2);
  EXPECT_LT((sum - parts).norm(), 1e-9 * sum.norm());
}

TEST(Fit, RankDeficientDesignStaysFinite) {
  Eigen::MatrixXd x(3, 1);
  x << 0.0, 0.1, 0.3;
  const Trajectory demo = Trajectory::from_positions(0.01, x);
  const DmpModel m = fit_weights(demo);
  EXPECT_TRUE(m.weights.allFinite());
}

TEST(Fit, RejectsShortDemo) {
  EXPECT_TRUE(throws_code([] { Trajectory::from_positions(1e-3, Eigen::MatrixXd::Zero(1, 2)); },
                          ErrorCode::kInvalidArgument));
}

TEST(Model, ValidateCatchesBrokenInvariants) {
  DmpModel m = random_model(5, 2, 3);
  EXPECT_NO_THROW(m.validate());
  DmpModel bad = m;
  bad.beta = 7.0;
  EXPECT_TRUE(throws_code([&] { bad.validate(); }, ErrorCode::kInvalidArgument));
  bad = m;
  bad.widths[2] = 0.0;
  EXPECT_TRUE(throws_code([&] { bad.validate(); }, ErrorCode::kInvalidArgument));
  bad = m;
  std::swap(bad.centers[1], bad.centers[2]);
  EXPECT_TRUE(throws_code([&] { bad.validate(); }, ErrorCode::kInvalidArgument));
  bad = m;
  bad.tau = 0.0;
  EXPECT_TRUE(throws_code([&] { bad.validate(); }, ErrorCode::kInvalidArgument));
}

TEST(Rollout, NoOvershootWithoutForcing) {
  DmpModel m = random_model(5, 3, 5);
  m.weights.setZero();
  const Trajectory r = rollout(m, spec_for(m, 1e-3, 5000));
  for (int d = 0; d < 3; ++d) {
    const double sign0 = m.g[d] - m.x0[d];
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      EXPECT_GE((m.g[d] - r.positions()(i, d)) * sign0, 0.0) << "dof " << d << " step " << i;
    }
  }
}

// With e = g - x and state z = (e, v), one explicit-Euler step is z' = A z.
// P solving A^T P A - P = -I is a Lyapunov function of that map, so
// z^T P z must fall at every step.
TEST(Rollout, DiscreteLyapunovFunctionDecreases) {
  DmpModel m = random_model(5, 1, 9);
  m.weights.setZero();
  const double dt = 1e-3;
  const double tau = m.tau;
  Eigen::Matrix2d a;
  a << 1.0, -dt, dt * m.alpha * m.beta / (tau * tau), 1.0 - dt * m.alpha / tau;
  Eigen::Matrix4d kron;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) kron.block<2, 2>(2 * i, 2 * j) = a(j, i) * a.transpose();
  const Eigen::Vector4d vec_p =
      (kron - Eigen::Matrix4d::Identity()).lu().solve(-Eigen::Vector4d(1, 0, 0, 1));
  const Eigen::Matrix2d p = Eigen::Map<const Eigen::Matrix2d>(vec_p.data());

  const Trajectory r = rollout(m, spec_for(m, dt, 3000));
  double prev = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const Eigen::Vector2d z(m.g[0] - r.positions()(i, 0), r.velocities()(i, 0));
    const double v = z.dot(p * z);
    EXPECT_LT(v, prev) << "step " << i;
    prev = v;
  }
}

TEST(Rollout, TranslationInvariant) {
  const DmpModel m = random_model(30, 3, 13);
  const Eigen::Vector3d shift(0.5, -1.25, 2.0);
  RolloutSpec s = spec_for(m, 1e-3, 1500);
  const Trajectory a = rollout(m, s);
  s.x0 += shift;
  s.g += shift;
  const Trajectory b = rollout(m, s);
  const Eigen::MatrixXd diff = b.positions().rowwise() - shift.transpose();
  EXPECT_LT((diff - a.positions()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Rollout, TemporalScalingWithMatchingStep) {
  const DmpModel m = random_model(30, 2, 17);
  RolloutSpec s = spec_for(m, 1e-3, 1500);
  const Trajectory a = rollout(m, s);
  s.tau *= 2.0;
  s.dt *= 2.0;
  const Trajectory b = rollout(m, s);
  EXPECT_LT((a.positions() - b.positions()).cwiseAbs().maxCoeff(), 1e-9 * a.range());
}

TEST(Rollout, TemporalScalingWithFinerStep) {
  const DmpModel m = random_model(30, 2, 17);
  RolloutSpec s = spec_for(m, 1e-3, 1001);
  const Trajectory a = rollout(m, s);
  s.tau *= 2.0;
  s.dt *= 0.5;
  s.n_steps = 4001;
  const Trajectory b = rollout(m, s);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, (a.position(i) - b.position(4 * i)).norm());
  }
  // Same path up to the Euler discretisation error of the coarser run.
  EXPECT_LT(worst, 1e-2 * a.range());
}

TEST(Rollout, ConvergesToNewGoal) {
  const DmpModel m = fit_weights(min_jerk_demo(3));
  RolloutSpec s = spec_for(m, 1e-3, 10001);
  s.g = Eigen::Vector3d(-0.2, 0.5, 0.25);
  const Trajectory r = rollout(m, s);
  EXPECT_LT((r.position(r.size() - 1) - s.g).norm(), 1e-3);
}

TEST(Rollout, DivergenceNamesTheStep) {
  const DmpModel m = random_model(5, 2, 19);
  Coupling bad = [](const Eigen::VectorXd& x, const Eigen::VectorXd&, double k) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
    if (k < 0.9) out[0] = std::numeric_limits<double>::quiet_NaN();
    return out;
  };
  const std::vector<Coupling> couplings{bad};
  try {
    rollout(m, spec_for(m, 1e-3, 1000), couplings);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.step(), 0);
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

TEST(Rollout, RejectsBadSpec) {
  const DmpModel m = random_model(5, 2, 23);
  RolloutSpec s = spec_for(m, 1e-3, 100);
  s.tau = 0.0;
  EXPECT_TRUE(throws_code([&] { rollout(m, s); }, ErrorCode::kInvalidArgument));
  s = spec_for(m, 1e-3, 100);
  s.g = Eigen::Vector3d::Zero();
  EXPECT_TRUE(throws_code([&] { rollout(m, s); }, ErrorCode::kInvalidArgument));
}

}  // namespace
}  // namespace primo
