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

#ifndef PRIMO_DMP_HPP_
#define PRIMO_DMP_HPP_

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "primo/trajectory.hpp"

namespace primo {

// Object-frame discrete movement primitive.
//
// The transformation system is integrated in the scaled-velocity form
//
//   tau * z' = alpha * (beta * (g - x) - z) + f(k),   tau * x' = z,
//
// i.e. tau^2 x'' = alpha * (beta * (g - x) - tau * x') + f(k), which is
// critically damped for every tau when beta = alpha / 4. The forcing term is
// the k-scaled normalized RBF mixture f(k) = k * sum(w_i psi_i) / sum(psi_i),
// psi_i(k) = exp(-h_i (k - c_i)^2), and the phase obeys tau k' = -alpha_k k.
struct DmpModel {
  double alpha = 25.0;
  double beta = 6.25;
  double tau = 1.0;
  double alpha_k = 8.0;
  Eigen::VectorXd centers;  // N, strictly decreasing
  Eigen::VectorXd widths;   // N, > 0
  Eigen::MatrixXd weights;  // N x dims
  Eigen::VectorXd x0;
  Eigen::VectorXd g;

  int dims() const { return static_cast<int>(x0.size()); }
  int n_basis() const { return static_cast<int>(centers.size()); }

  // Throws kInvalidArgument when any invariant is broken.
  void validate() const;
};

struct DmpParams {
  double alpha = 25.0;
  double alpha_k = 8.0;
  int n_basis = 50;
};

struct Basis {
  Eigen::VectorXd centers;
  Eigen::VectorXd widths;
};

// Centers c_i = exp(-alpha_k * i / (N - 1)), widths 1 / (c_{i+1} - c_i)^2
// with the last width repeating its neighbour.
Basis make_basis(int n_basis, double alpha_k);

// Phase samples k[0..n_steps-1], k[0] = 1. Each step multiplies by
// exp(-alpha_k * dt / tau), the exact one-step map of tau k' = -alpha_k k.
std::vector<double> canonical_rollout(double alpha_k, double tau, double dt,
                                      int n_steps);

double forcing_term(const DmpModel& model, double k, int dof);
Eigen::VectorXd forcing(const DmpModel& model, double k);

// Normalized, k-scaled basis activations; the row of the least-squares
// design matrix for phase k. Throws kDegenerateBasis if every psi_i(k)
// underflows.
Eigen::VectorXd basis_row(const Eigen::VectorXd& centers,
                          const Eigen::VectorXd& widths, double k);

// Forcing the demo requires at each sample:
//   tau^2 a - alpha * (beta * (g - x) - tau * v).
Eigen::MatrixXd forcing_targets(const Trajectory& demo, double alpha,
                                double tau, const Eigen::VectorXd& goal);

// Batch least squares for the weights of every DoF at once. Rank-deficient
// designs fall back to the minimum-norm solution.
Eigen::MatrixXd solve_weights(const Basis& basis, std::span<const double> phases,
                              const Eigen::MatrixXd& targets);

// tau = demo duration, x0 = first sample, g = last sample.
DmpModel fit_weights(const Trajectory& demo, const DmpParams& params = {});

// Extra acceleration (m/s^2) injected into the transformation system, given
// the current position, velocity and phase.
using Coupling = std::function<Eigen::VectorXd(
    const Eigen::VectorXd& x, const Eigen::VectorXd& v, double k)>;

struct RolloutSpec {
  Eigen::VectorXd x0;
  Eigen::VectorXd g;
  double tau = 1.0;
  double dt = 1e-3;
  int n_steps = 1000;  // number of output samples
};

// Acceleration of the uncoupled transformation system at (x, v, k).
Eigen::VectorXd dmp_acceleration(const DmpModel& model,
                                 const Eigen::VectorXd& goal, double tau,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& v, double k);

// Explicit Euler; starts at rest at spec.x0. Throws DivergenceError with
// the offending step when the state stops being finite.
Trajectory rollout(const DmpModel& model, const RolloutSpec& spec,
                   std::span<const Coupling> couplings = {});

// Rolls out with the model's own x0, g, tau over the demo's time base.
Trajectory reproduce(const DmpModel& model, double dt, int n_steps);

}  // namespace primo

#endif  // PRIMO_DMP_HPP_
