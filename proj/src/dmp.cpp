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

#include "primo/dmp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "primo/error.hpp"

namespace primo {
namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void DmpModel::validate() const {
  require(positive_finite(alpha), "dmp: alpha must be > 0");
  require(positive_finite(beta), "dmp: beta must be > 0");
  require(std::abs(beta - alpha / 4.0) <= 1e-12 * alpha,
          "dmp: beta must equal alpha / 4");
  require(positive_finite(tau), "dmp: tau must be > 0");
  require(positive_finite(alpha_k), "dmp: alpha_k must be > 0");
  const int n = n_basis();
  require(n >= 1, "dmp: need at least one basis function");
  require(widths.size() == n, "dmp: widths/centers size mismatch");
  require(dims() >= 1 && dims() <= 3, "dmp: dims must be 1..3");
  require(g.size() == x0.size(), "dmp: x0/g size mismatch");
  require(weights.rows() == n && weights.cols() == dims(),
          "dmp: weights must be N x dims");
  require(centers.allFinite() && widths.allFinite() && weights.allFinite() &&
              x0.allFinite() && g.allFinite(),
          "dmp: non-finite parameter");
  for (int i = 0; i < n; ++i) {
    require(widths[i] > 0.0, "dmp: widths must be > 0");
    if (i > 0) {
      require(centers[i] < centers[i - 1],
              "dmp: centers must be strictly decreasing");
    }
  }
}

Basis make_basis(int n_basis, double alpha_k) {
  require(n_basis >= 1, "basis: n_basis must be >= 1");
  require(positive_finite(alpha_k), "basis: alpha_k must be > 0");
  Basis b;
  b.centers.resize(n_basis);
  b.widths.resize(n_basis);
  if (n_basis == 1) {
    b.centers[0] = 1.0;
    b.widths[0] = 1.0;
    return b;
  }
  for (int i = 0; i < n_basis; ++i) {
    b.centers[i] = std::exp(-alpha_k * i / static_cast<double>(n_basis - 1));
  }
  for (int i = 0; i + 1 < n_basis; ++i) {
    const double gap = b.centers[i + 1] - b.centers[i];
    b.widths[i] = 1.0 / (gap * gap);
  }
  b.widths[n_basis - 1] = b.widths[n_basis - 2];
  return b;
}

std::vector<double> canonical_rollout(double alpha_k, double tau, double dt,
                                      int n_steps) {
  require(positive_finite(alpha_k), "canonical: alpha_k must be > 0");
  require(positive_finite(tau), "canonical: tau must be > 0");
  require(positive_finite(dt), "canonical: dt must be > 0");
  require(n_steps >= 1, "canonical: n_steps must be >= 1");
  const double rate = alpha_k * dt / tau;
  std::vector<double> k(static_cast<std::size_t>(n_steps));
  for (int i = 0; i < n_steps; ++i) {
    k[static_cast<std::size_t>(i)] = std::exp(-rate * static_cast<double>(i));
  }
  return k;
}

Eigen::VectorXd basis_row(const Eigen::VectorXd& centers,
                          const Eigen::VectorXd& widths, double k) {
  Eigen::VectorXd psi(centers.size());
  for (Eigen::Index i = 0; i < centers.size(); ++i) {
    const double d = k - centers[i];
    psi[i] = std::exp(-widths[i] * d * d);
  }
  const double total = psi.sum();
  if (!(total >= std::numeric_limits<double>::min())) {
    fail(ErrorCode::kDegenerateBasis,
         "forcing term: all basis activations vanish at phase " +
             std::to_string(k));
  }
  return psi * (k / total);
}

Eigen::VectorXd forcing(const DmpModel& model, double k) {
  return model.weights.transpose() * basis_row(model.centers, model.widths, k);
}

double forcing_term(const DmpModel& model, double k, int dof) {
  require(dof >= 0 && dof < model.dims(), "forcing term: dof out of range");
  return basis_row(model.centers, model.widths, k).dot(model.weights.col(dof));
}

Eigen::MatrixXd forcing_targets(const Trajectory& demo, double alpha,
                                double tau, const Eigen::VectorXd& goal) {
  require(goal.size() == demo.dims(), "forcing targets: goal size mismatch");
  const double beta = alpha / 4.0;
  const Eigen::MatrixXd spring =
      (beta * ((-demo.positions()).rowwise() + goal.transpose()) -
       tau * demo.velocities()) *
      alpha;
  return tau * tau * demo.accelerations() - spring;
}

Eigen::MatrixXd solve_weights(const Basis& basis, std::span<const double> phases,
                              const Eigen::MatrixXd& targets) {
  const auto n = static_cast<Eigen::Index>(phases.size());
  require(n == targets.rows(), "solve weights: phase/target count mismatch");
  require(n >= 1, "solve weights: no samples");
  Eigen::MatrixXd design(n, basis.centers.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    design.row(i) =
        basis_row(basis.centers, basis.widths, phases[static_cast<std::size_t>(i)])
            .transpose();
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  return cod.solve(targets);
}

DmpModel fit_weights(const Trajectory& demo, const DmpParams& params) {
  require(positive_finite(params.alpha), "fit: alpha must be > 0");
  DmpModel model;
  model.alpha = params.alpha;
  model.beta = params.alpha / 4.0;
  model.alpha_k = params.alpha_k;
  model.tau = demo.duration();
  model.x0 = demo.position(0);
  model.g = demo.position(demo.size() - 1);

  const Basis basis = make_basis(params.n_basis, params.alpha_k);
  model.centers = basis.centers;
  model.widths = basis.widths;

  const auto phases = canonical_rollout(model.alpha_k, model.tau, demo.dt(),
                                        static_cast<int>(demo.size()));
  const Eigen::MatrixXd targets =
      forcing_targets(demo, model.alpha, model.tau, model.g);
  model.weights = solve_weights(basis, phases, targets);
  model.validate();
  return model;
}

Eigen::VectorXd dmp_acceleration(const DmpModel& model,
                                 const Eigen::VectorXd& goal, double tau,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& v, double k) {
  const Eigen::VectorXd spring =
      model.alpha * (model.beta * (goal - x) - tau * v);
  return (spring + forcing(model, k)) / (tau * tau);
}

Trajectory rollout(const DmpModel& model, const RolloutSpec& spec,
                   std::span<const Coupling> couplings) {
  model.validate();
  const int d = model.dims();
  require(spec.x0.size() == d && spec.g.size() == d,
          "rollout: x0/g must match model dims");
  require(spec.x0.allFinite() && spec.g.allFinite(),
          "rollout: non-finite x0/g");
  require(positive_finite(spec.tau), "rollout: tau must be > 0");
  require(spec.n_steps >= 2, "rollout: n_steps must be >= 2");
  const auto phases =
      canonical_rollout(model.alpha_k, spec.tau, spec.dt, spec.n_steps);

  Eigen::MatrixXd xs(spec.n_steps, d), vs(spec.n_steps, d),
      as(spec.n_steps, d);
  Eigen::VectorXd x = spec.x0;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < spec.n_steps; ++i) {
    const double k = phases[static_cast<std::size_t>(i)];
    Eigen::VectorXd a = dmp_acceleration(model, spec.g, spec.tau, x, v, k);
    for (const auto& coupling : couplings) {
      const Eigen::VectorXd c = coupling(x, v, k);
      require(c.size() == d, "rollout: coupling returned wrong dimension");
      a += c;
    }
    if (!x.allFinite() || !v.allFinite() || !a.allFinite()) {
      throw DivergenceError(i, "rollout: non-finite state");
    }
    xs.row(i) = x.transpose();
    vs.row(i) = v.transpose();
    as.row(i) = a.transpose();
    x += spec.dt * v;
    v += spec.dt * a;
  }
  return Trajectory(spec.dt, std::move(xs), std::move(vs), std::move(as));
}

Trajectory reproduce(const DmpModel& model, double dt, int n_steps) {
  return rollout(model, RolloutSpec{model.x0, model.g, model.tau, dt, n_steps});
}

}  // namespace primo
