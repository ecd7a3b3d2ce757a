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

#ifndef PRIMO_AVOIDANCE_HPP_
#define PRIMO_AVOIDANCE_HPP_

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "primo/dmp.hpp"
#include "primo/trajectory.hpp"

namespace primo {

inline constexpr double kSteeringEpsilon = 1e-9;

// Avoidance style: gamma sets how abruptly the heading turns away, beta_oa
// how quickly that urge fades as the obstacle leaves the line of motion.
struct AvoidanceParams {
  double gamma = 1000.0;  // 1/s
  double beta_oa = 20.0 / 3.14159265358979323846;  // 1/rad

  void validate() const;
};

struct Obstacle {
  Eigen::VectorXd position;
  double radius = 0.0;  // clearance metrics only; the coupling sees a point
};

// Unsigned angle in [0, pi] between v and (obstacle - x). Throws
// kUndefinedSteering when |v| or |obstacle - x| is at most kSteeringEpsilon.
double steering_angle(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                      const Obstacle& obstacle);

// gamma * theta * exp(-beta_oa * |theta|).
double turning_rate(double theta, const AvoidanceParams& params);

// Unit vector obtained by rotating v by +pi/2 about (obstacle - x) x v.
// Empty when the turn direction is undefined and theta < pi/2 (heading
// straight at the obstacle); when the obstacle is dead behind, a fixed
// axis is chosen: +z in 2D, otherwise v x e_j for the first coordinate axis
// e_j not parallel to v. 2D inputs are embedded in the z = 0 plane.
std::optional<Eigen::VectorXd> turn_direction(const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& v,
                                              const Eigen::VectorXd& obstacle);

// R * v * theta_dot. Zero for |v| <= eps, a coincident obstacle, or a
// degenerate heading. dims must be 2 or 3.
Eigen::VectorXd avoidance_coupling(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& v,
                                   const Obstacle& obstacle,
                                   const AvoidanceParams& params);

// 1 within radius / 2, smoothstep down to 0 at radius.
double influence_weight(double distance, double radius);

// Sum of per-obstacle couplings, each scaled by influence_weight when an
// influence radius is set.
Coupling make_avoidance_coupling(std::vector<Obstacle> obstacles,
                                 AvoidanceParams params,
                                 std::optional<double> influence_radius = {});

struct TurningSample {
  double theta = 0.0;
  double theta_dot = 0.0;
  double speed = 1.0;      // |v| at the sample, m/s
  double influence = 1.0;  // influence_weight at the sample, in (0, 1]
};

// Turning-rate series hidden in a demonstration pair. The residual
// acceleration at each sample is the difference of the forcing profiles the
// two demos require from the spring-damper (same alpha, tau = baseline
// duration, goal = baseline end point), converted back to m/s^2; the turning
// rate is its projection on the turn direction divided by |v|. Samples with
// an undefined angle or turn direction are dropped. With influence_radius
// set, samples outside it are dropped and the rest carry their
// influence_weight, which the fits treat as a known factor of the rate. Throws
// kInsufficientData if fewer than three remain.
std::vector<TurningSample> extract_turning_series(
    const Trajectory& demo_obs, const Trajectory& demo_base,
    const Obstacle& obstacle, double alpha = 25.0,
    std::optional<double> influence_radius = {});

struct AvoidanceFit {
  AvoidanceParams params;
  double r_squared = 0.0;  // of the log-linear regression
  int samples_used = 0;
};

// Log-linear least squares:
//   log(theta_dot / influence) - log(theta) = log(gamma) - beta_oa * theta,
// over samples with theta > eps and theta_dot > eps. Each row is weighted
// by (theta_dot * speed)^2, the inverse variance of its logarithm when the
// residual acceleration carries noise of constant size; on exact data every
// weighting returns the same parameters.
// Throws kInsufficientData (< 3 usable samples) or kNonPhysicalFit
// (no spread in theta or in the rate, or beta_oa <= 0).
AvoidanceFit fit_avoidance_params(std::span<const TurningSample> series);

// Least squares in rate space:
//   min sum speed^2 * (theta_dot - influence * gamma * theta * exp(-beta_oa * theta))^2
// over every sample with theta > eps, including non-positive rates. gamma is
// solved in closed form for each beta_oa and beta_oa by a bracketed 1-D
// search on [1e-3, 1e3]. Unlike the log-linear form it tolerates samples
// whose rate sits at the noise floor. r_squared is that of the rate fit.
// Throws kInsufficientData (< 3 samples with theta_dot > eps) or
// kNonPhysicalFit (no spread in theta or in the rate, gamma <= 0, or beta_oa
// at a bound).
AvoidanceFit fit_avoidance_params_rate(std::span<const TurningSample> series);

enum class AvoidanceFitMethod { kLogLinear, kRate, kTrajectory };

// kLogLinear or kRate on a series.
AvoidanceFit fit_avoidance(std::span<const TurningSample> series,
                           AvoidanceFitMethod method);

struct AvoidanceRefinement {
  AvoidanceParams params;
  double rms = 0.0;  // m, position residual at the optimum
  int evaluations = 0;
};

// Output-error fit: rolls `baseline` out from demo_obs's first sample with
// the avoidance coupling and adjusts (gamma, beta_oa) by Levenberg-Marquardt
// on their logarithms until the rollout's positions match demo_obs's in the
// least-squares sense. Needs no differentiated data, so noisy demos do not
// bias it the way they bias the series fits. Throws kNonPhysicalFit when the
// search leaves the finite range.
AvoidanceRefinement refine_avoidance_params(
    const DmpModel& baseline, const Trajectory& demo_obs,
    const Obstacle& obstacle, const AvoidanceParams& initial,
    std::optional<double> influence_radius = {});

struct AvoidanceLearnOptions {
  AvoidanceFitMethod method = AvoidanceFitMethod::kTrajectory;
  DmpParams dmp;  // baseline model; dmp.alpha also sets the residual's alpha
  std::optional<double> influence_radius;
};

struct AvoidanceLearnResult {
  AvoidanceParams params;
  AvoidanceFit series_fit;  // kLogLinear or kRate stage
  std::optional<AvoidanceRefinement> refinement;  // kTrajectory only
};

// extract_turning_series, then the chosen fit. kTrajectory seeds the
// output-error fit with the kRate estimate (library defaults when that is
// non-physical) and a baseline model fitted to demo_base.
AvoidanceLearnResult learn_avoidance(const Trajectory& demo_obs,
                                     const Trajectory& demo_base,
                                     const Obstacle& obstacle,
                                     const AvoidanceLearnOptions& options = {});

inline AvoidanceParams learn_params(std::span<const TurningSample> series) {
  return fit_avoidance_params(series).params;
}

}  // namespace primo

#endif  // PRIMO_AVOIDANCE_HPP_
