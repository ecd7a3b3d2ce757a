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

#ifndef PRIMO_TRAJECTORY_HPP_
#define PRIMO_TRAJECTORY_HPP_

#include <iosfwd>

#include <Eigen/Dense>

namespace primo {

struct StateTriplet {
  double x = 0.0;  // m
  double v = 0.0;  // m/s
  double a = 0.0;  // m/s^2
};

// Uniformly sampled position/velocity/acceleration profile. Rows are samples,
// columns are degrees of freedom. Sample i sits at time i * dt.
class Trajectory {
 public:
  Trajectory(double dt, Eigen::MatrixXd positions, Eigen::MatrixXd velocities,
             Eigen::MatrixXd accelerations);

  // Fills velocities and accelerations by central finite differences.
  static Trajectory from_positions(double dt, Eigen::MatrixXd positions);

  double dt() const { return dt_; }
  int dims() const { return static_cast<int>(x_.cols()); }
  Eigen::Index size() const { return x_.rows(); }
  double duration() const { return dt_ * static_cast<double>(size() - 1); }

  const Eigen::MatrixXd& positions() const { return x_; }
  const Eigen::MatrixXd& velocities() const { return v_; }
  const Eigen::MatrixXd& accelerations() const { return a_; }

  Eigen::VectorXd position(Eigen::Index i) const { return x_.row(i).transpose(); }
  Eigen::VectorXd velocity(Eigen::Index i) const { return v_.row(i).transpose(); }
  Eigen::VectorXd acceleration(Eigen::Index i) const {
    return a_.row(i).transpose();
  }

  StateTriplet at(Eigen::Index sample, int dof) const {
    return {x_(sample, dof), v_(sample, dof), a_(sample, dof)};
  }

  // Largest per-DoF peak-to-peak position excursion.
  double range() const;

 private:
  double dt_;
  Eigen::MatrixXd x_;
  Eigen::MatrixXd v_;
  Eigen::MatrixXd a_;
};

// First derivative along rows: central differences inside, one-sided at the
// two ends.
Eigen::MatrixXd differentiate(const Eigen::MatrixXd& samples, double dt);

// Root-mean-square position difference over the common prefix of both.
double position_rmse(const Trajectory& a, const Trajectory& b);

// CSV with header `t,dof0_x,dof0_v,dof0_a,...`, one row per sample.
void write_csv(const Trajectory& traj, std::ostream& out);
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace primo

#endif  // PRIMO_TRAJECTORY_HPP_
