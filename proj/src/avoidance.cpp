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

#include "primo/avoidance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "primo/error.hpp"

namespace primo {
namespace {

Eigen::Vector3d embed(const Eigen::VectorXd& v) {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  out.head(v.size()) = v;
  return out;
}

void check_workspace(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                     const Eigen::VectorXd& obstacle) {
  require(x.size() == v.size() && x.size() == obstacle.size(),
          "avoidance: position/velocity/obstacle dimension mismatch");
  require(x.size() >= 1 && x.size() <= 3, "avoidance: dims must be 1..3");
}

}  // namespace

void AvoidanceParams::validate() const {
  require(std::isfinite(gamma) && gamma > 0.0, "avoidance: gamma must be > 0");
  require(std::isfinite(beta_oa) && beta_oa > 0.0,
          "avoidance: beta_oa must be > 0");
}

double steering_angle(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                      const Obstacle& obstacle) {
  check_workspace(x, v, obstacle.position);
  const Eigen::Vector3d to_obstacle = embed(obstacle.position - x);
  const Eigen::Vector3d vel = embed(v);
  if (vel.norm() <= kSteeringEpsilon || to_obstacle.norm() <= kSteeringEpsilon) {
    fail(ErrorCode::kUndefinedSteering,
         "steering angle: zero velocity or coincident obstacle");
  }
  return std::atan2(to_obstacle.cross(vel).norm(), to_obstacle.dot(vel));
}

double turning_rate(double theta, const AvoidanceParams& params) {
  params.validate();
  require(std::isfinite(theta), "turning rate: theta must be finite");
  return params.gamma * theta * std::exp(-params.beta_oa * std::abs(theta));
}

std::optional<Eigen::VectorXd> turn_direction(const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& v,
                                              const Eigen::VectorXd& obstacle) {
  check_workspace(x, v, obstacle);
  const int d = static_cast<int>(x.size());
  require(d >= 2, "avoidance: coupling needs a 2D or 3D workspace");
  const Eigen::Vector3d o = embed(obstacle - x);
  const Eigen::Vector3d vel = embed(v);
  if (vel.norm() <= kSteeringEpsilon || o.norm() <= kSteeringEpsilon) {
    return std::nullopt;
  }
  const Eigen::Vector3d v_hat = vel.normalized();
  Eigen::Vector3d axis = o.cross(vel);
  if (axis.norm() <= 1e-12 * o.norm() * vel.norm()) {
    if (o.dot(vel) > 0.0) return std::nullopt;
    if (d == 2) {
      axis = Eigen::Vector3d::UnitZ();
    } else {
      for (int j = 0; j < 3; ++j) {
        const Eigen::Vector3d e = Eigen::Vector3d::Unit(j);
        if (std::abs(e.dot(v_hat)) < 1.0 - 1e-12) {
          axis = v_hat.cross(e);
          break;
        }
      }
    }
  }
  const Eigen::Vector3d dir = axis.normalized().cross(v_hat);
  return Eigen::VectorXd(dir.head(d));
}

Eigen::VectorXd avoidance_coupling(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& v,
                                   const Obstacle& obstacle,
                                   const AvoidanceParams& params) {
  params.validate();
  const auto dir = turn_direction(x, v, obstacle.position);
  if (!dir) return Eigen::VectorXd::Zero(x.size());
  const double theta = steering_angle(x, v, obstacle);
  return *dir * (v.norm() * turning_rate(theta, params));
}

double influence_weight(double distance, double radius) {
  const double inner = 0.5 * radius;
  if (distance <= inner) return 1.0;
  if (distance >= radius) return 0.0;
  const double s = (radius - distance) / (radius - inner);
  return s * s * (3.0 - 2.0 * s);
}

Coupling make_avoidance_coupling(std::vector<Obstacle> obstacles,
                                 AvoidanceParams params,
                                 std::optional<double> influence_radius) {
  params.validate();
  return [obstacles = std::move(obstacles), params, influence_radius](
             const Eigen::VectorXd& x, const Eigen::VectorXd& v, double) {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(x.size());
    for (const auto& obs : obstacles) {
      const double w = influence_radius
                           ? influence_weight((obs.position - x).norm(), *influence_radius)
                           : 1.0;
      if (w > 0.0) total += w * avoidance_coupling(x, v, obs, params);
    }
    return total;
  };
}

std::vector<TurningSample> extract_turning_series(
    const Trajectory& demo_obs, const Trajectory& demo_base,
    const Obstacle& obstacle, double alpha,
    std::optional<double> influence_radius) {
  require(demo_obs.dims() == demo_base.dims(),
          "extract: demos differ in dimension");
  require(demo_obs.dims() >= 2, "extract: needs a 2D or 3D workspace");
  require(obstacle.position.size() == demo_obs.dims(),
          "extract: obstacle dimension mismatch");
  require(std::abs(demo_obs.dt() - demo_base.dt()) <= 1e-9 * demo_base.dt(),
          "extract: demos must share dt");
  require(std::isfinite(alpha) && alpha > 0.0, "extract: alpha must be > 0");
  require(!influence_radius || *influence_radius > 0.0,
          "extract: influence_radius must be > 0");

  const double tau = demo_base.duration();
  const double beta = alpha / 4.0;
  const Eigen::Index n = std::min(demo_obs.size(), demo_base.size());

  std::vector<TurningSample> series;
  series.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd x = demo_obs.position(i);
    const double influence =
        influence_radius ? influence_weight((obstacle.position - x).norm(), *influence_radius)
                         : 1.0;
    if (!(influence > 0.0)) continue;
    const Eigen::VectorXd v = demo_obs.velocity(i);
    const Eigen::VectorXd residual =
        (demo_obs.acceleration(i) - demo_base.acceleration(i)) +
        (alpha / (tau * tau)) *
            (beta * (x - demo_base.position(i)) +
             tau * (v - demo_base.velocity(i)));
    const auto dir = turn_direction(x, v, obstacle.position);
    if (!dir) continue;
    double theta = 0.0;
    try {
      theta = steering_angle(x, v, obstacle);
    } catch (const Error&) {
      continue;
    }
    series.push_back({theta, residual.dot(*dir) / v.norm(), v.norm(), influence});
  }
  if (series.size() < 3) {
    fail(ErrorCode::kInsufficientData,
         "extract: fewer than 3 usable samples");
  }
  return series;
}

namespace {

// A rate that never changes carries no information about its theta
// dependence, whatever the regression would make of it.
void require_rate_spread(std::span<const TurningSample> usable) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : usable) {
    const double r = s.theta_dot / s.influence;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (!(hi - lo > 1e-9 * std::max(std::abs(hi), std::abs(lo)))) {
    fail(ErrorCode::kNonPhysicalFit,
         "learn avoidance: turning rate does not vary with theta");
  }
}

}  // namespace

AvoidanceFit fit_avoidance_params(std::span<const TurningSample> series) {
  std::vector<TurningSample> usable;
  for (const auto& s : series) {
    if (std::isfinite(s.theta) && std::isfinite(s.theta_dot) &&
        std::isfinite(s.speed) && s.influence > 0.0 && s.theta > kSteeringEpsilon &&
        s.theta_dot > kSteeringEpsilon) {
      usable.push_back(s);
    }
  }
  if (usable.size() < 3) {
    fail(ErrorCode::kInsufficientData,
         "learn avoidance: fewer than 3 samples with theta > 0 and theta_dot > 0");
  }

  require_rate_spread(usable);

  const auto n = static_cast<Eigen::Index>(usable.size());
  Eigen::VectorXd y(n), theta(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = usable[static_cast<std::size_t>(i)];
    theta[i] = s.theta;
    y[i] = std::log(s.theta_dot / s.influence) - std::log(s.theta);
    w[i] = s.theta_dot * s.theta_dot * s.speed * s.speed;
  }
  w /= w.maxCoeff();

  const double w_sum = w.sum();
  const double theta_mean = w.dot(theta) / w_sum;
  const double y_mean = w.dot(y) / w_sum;
  const Eigen::ArrayXd dt = theta.array() - theta_mean;
  const Eigen::ArrayXd dy = y.array() - y_mean;
  const double sxx = (w.array() * dt * dt).sum();
  const double sxy = (w.array() * dt * dy).sum();
  if (!(sxx > 1e-12 * w_sum * std::max(1.0, theta_mean * theta_mean))) {
    fail(ErrorCode::kNonPhysicalFit,
         "learn avoidance: theta has no spread, sensitivity is unidentifiable");
  }
  const double slope = sxy / sxx;  // = -beta_oa
  const double intercept = y_mean - slope * theta_mean;
  const double beta_oa = -slope;
  if (!(beta_oa > 0.0) || !std::isfinite(intercept)) {
    fail(ErrorCode::kNonPhysicalFit,
         "learn avoidance: fitted beta_oa <= 0 (no decaying sensitivity)");
  }

  const double ss_tot = (w.array() * dy * dy).sum();
  const Eigen::ArrayXd resid = y.array() - (intercept + slope * theta.array());
  const double ss_res = (w.array() * resid * resid).sum();

  AvoidanceFit fit;
  fit.params = {std::exp(intercept), beta_oa};
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.samples_used = static_cast<int>(n);
  return fit;
}

AvoidanceFit fit_avoidance_params_rate(std::span<const TurningSample> series) {
  std::vector<TurningSample> usable;
  int positive = 0;
  for (const auto& s : series) {
    if (std::isfinite(s.theta) && std::isfinite(s.theta_dot) &&
        std::isfinite(s.speed) && s.influence > 0.0 && s.theta > kSteeringEpsilon) {
      usable.push_back(s);
      if (s.theta_dot > kSteeringEpsilon) ++positive;
    }
  }
  if (positive < 3) {
    fail(ErrorCode::kInsufficientData,
         "learn avoidance: fewer than 3 samples with theta > 0 and theta_dot > 0");
  }
  require_rate_spread(usable);
  const auto n = static_cast<Eigen::Index>(usable.size());
  Eigen::ArrayXd theta(n), y(n), w(n), u(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = usable[static_cast<std::size_t>(i)];
    theta[i] = s.theta;
    y[i] = s.theta_dot;
    w[i] = s.speed * s.speed;
    u[i] = s.influence;
  }
  w /= w.maxCoeff();
  if (!(theta.maxCoeff() - theta.minCoeff() > 1e-9 * std::max(1.0, theta.maxCoeff()))) {
    fail(ErrorCode::kNonPhysicalFit,
         "learn avoidance: theta has no spread, sensitivity is unidentifiable");
  }

  auto gain = [&](double beta) {
    const Eigen::ArrayXd g = u * theta * (-beta * theta).exp();
    const double gg = (w * g * g).sum();
    return gg > 0.0 ? (w * y * g).sum() / gg : 0.0;
  };
  // Residual with gamma eliminated, as a function of log(beta).
  auto cost = [&](double log_beta) {
    const double beta = std::exp(log_beta);
    const Eigen::ArrayXd r = y - gain(beta) * u * theta * (-beta * theta).exp();
    return (w * r * r).sum();
  };

  const double lo = std::log(1e-3);
  const double hi = std::log(1e3);
  constexpr int kGrid = 241;
  int best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double c = cost(lo + (hi - lo) * i / (kGrid - 1));
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  if (best == 0 || best == kGrid - 1) {
    fail(ErrorCode::kNonPhysicalFit,
         "learn avoidance: beta_oa runs to the search bound");
  }
  const double step = (hi - lo) / (kGrid - 1);
  const auto [log_beta, min_cost] = boost::math::tools::brent_find_minima(
      cost, lo + (best - 1) * step, lo + (best + 1) * step,
      std::numeric_limits<double>::digits / 2);
  const double beta = std::exp(log_beta);
  const double gamma = gain(beta);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    fail(ErrorCode::kNonPhysicalFit,
         "learn avoidance: fitted gamma <= 0 (turning away from the obstacle absent)");
  }

  const double y_mean = (w * y).sum() / w.sum();
  const double ss_tot = (w * (y - y_mean) * (y - y_mean)).sum();
  AvoidanceFit fit;
  fit.params = {gamma, beta};
  fit.r_squared = ss_tot > 0.0 ? 1.0 - min_cost / ss_tot : 1.0;
  fit.samples_used = static_cast<int>(n);
  return fit;
}

AvoidanceFit fit_avoidance(std::span<const TurningSample> series,
                           AvoidanceFitMethod method) {
  switch (method) {
    case AvoidanceFitMethod::kLogLinear:
      return fit_avoidance_params(series);
    case AvoidanceFitMethod::kRate:
      return fit_avoidance_params_rate(series);
    case AvoidanceFitMethod::kTrajectory:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "fit_avoidance: series methods only");
}

namespace {

// Position residual of a coupled rollout, for Eigen's Levenberg-Marquardt.
struct RolloutResidual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const DmpModel* model;
  const Trajectory* target;
  const Obstacle* obstacle;
  std::optional<double> influence_radius;

  int inputs() const { return 2; }
  int values() const { return static_cast<int>(target->positions().size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    r.resize(values());
    const AvoidanceParams params{std::exp(p[0]), std::exp(p[1])};
    if (!std::isfinite(params.gamma) || !std::isfinite(params.beta_oa) ||
        !(params.gamma > 0.0) || !(params.beta_oa > 0.0)) {
      r.setConstant(1.0);
      return 0;
    }
    const RolloutSpec spec{target->position(0), model->g, model->tau, target->dt(),
                           static_cast<int>(target->size())};
    const std::vector<Coupling> couplings{
        make_avoidance_coupling({*obstacle}, params, influence_radius)};
    try {
      const Trajectory t = rollout(*model, spec, couplings);
      const Eigen::MatrixXd d = t.positions() - target->positions();
      r = Eigen::Map<const Eigen::VectorXd>(d.data(), d.size());
    } catch (const DivergenceError&) {
      r.setConstant(1.0);
    }
    return 0;
  }
};

}  // namespace

AvoidanceRefinement refine_avoidance_params(const DmpModel& baseline,
                                            const Trajectory& demo_obs,
                                            const Obstacle& obstacle,
                                            const AvoidanceParams& initial,
                                            std::optional<double> influence_radius) {
  baseline.validate();
  initial.validate();
  require(demo_obs.dims() == baseline.dims(), "refine: demo and model differ in dimension");
  require(obstacle.position.size() == demo_obs.dims(), "refine: obstacle dimension mismatch");

  RolloutResidual residual{&baseline, &demo_obs, &obstacle, influence_radius};
  Eigen::NumericalDiff<RolloutResidual> diff(residual);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<RolloutResidual>> lm(diff);
  Eigen::VectorXd p(2);
  p << std::log(initial.gamma), std::log(initial.beta_oa);
  lm.minimize(p);

  AvoidanceRefinement out;
  out.params = {std::exp(p[0]), std::exp(p[1])};
  if (!std::isfinite(out.params.gamma) || !std::isfinite(out.params.beta_oa) ||
      !(out.params.gamma > 0.0) || !(out.params.beta_oa > 0.0)) {
    fail(ErrorCode::kNonPhysicalFit, "refine: parameters left the finite range");
  }
  out.rms = std::sqrt(lm.fvec.squaredNorm() / static_cast<double>(lm.fvec.size()));
  out.evaluations = static_cast<int>(lm.nfev + lm.njev * 2);
  return out;
}

AvoidanceLearnResult learn_avoidance(const Trajectory& demo_obs,
                                     const Trajectory& demo_base,
                                     const Obstacle& obstacle,
                                     const AvoidanceLearnOptions& options) {
  const auto series = extract_turning_series(demo_obs, demo_base, obstacle,
                                             options.dmp.alpha, options.influence_radius);
  AvoidanceLearnResult out;
  if (options.method != AvoidanceFitMethod::kTrajectory) {
    out.series_fit = fit_avoidance(series, options.method);
    out.params = out.series_fit.params;
    return out;
  }
  AvoidanceParams initial;
  try {
    out.series_fit = fit_avoidance_params_rate(series);
    initial = out.series_fit.params;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonPhysicalFit) throw;
  }
  const DmpModel baseline = fit_weights(demo_base, options.dmp);
  out.refinement = refine_avoidance_params(baseline, demo_obs, obstacle, initial,
                                           options.influence_radius);
  out.params = out.refinement->params;
  return out;
}

}  // namespace primo
