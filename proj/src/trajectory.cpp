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

#include "primo/trajectory.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "primo/csv.hpp"
#include "primo/error.hpp"

namespace primo {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDegenerateBasis: return "degenerate-basis";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kUndefinedSteering: return "undefined-steering";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kNonPhysicalFit: return "non-physical-fit";
    case ErrorCode::kDegenerateData: return "degenerate-data";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

Trajectory::Trajectory(double dt, Eigen::MatrixXd positions,
                       Eigen::MatrixXd velocities, Eigen::MatrixXd accelerations)
    : dt_(dt),
      x_(std::move(positions)),
      v_(std::move(velocities)),
      a_(std::move(accelerations)) {
  require(std::isfinite(dt_) && dt_ > 0.0, "trajectory: dt must be > 0");
  require(x_.rows() >= 2, "trajectory: need at least 2 samples");
  require(x_.cols() >= 1 && x_.cols() <= 3, "trajectory: dims must be 1..3");
  require(v_.rows() == x_.rows() && v_.cols() == x_.cols() &&
              a_.rows() == x_.rows() && a_.cols() == x_.cols(),
          "trajectory: position/velocity/acceleration shapes differ");
  require(x_.allFinite() && v_.allFinite() && a_.allFinite(),
          "trajectory: non-finite sample");
}

Trajectory Trajectory::from_positions(double dt, Eigen::MatrixXd positions) {
  require(std::isfinite(dt) && dt > 0.0, "trajectory: dt must be > 0");
  require(positions.rows() >= 2, "trajectory: need at least 2 samples");
  Eigen::MatrixXd v = differentiate(positions, dt);
  Eigen::MatrixXd a = differentiate(v, dt);
  return Trajectory(dt, std::move(positions), std::move(v), std::move(a));
}

double Trajectory::range() const {
  return (x_.colwise().maxCoeff() - x_.colwise().minCoeff()).maxCoeff();
}

Eigen::MatrixXd differentiate(const Eigen::MatrixXd& samples, double dt) {
  const Eigen::Index n = samples.rows();
  Eigen::MatrixXd d(n, samples.cols());
  if (n < 2) return Eigen::MatrixXd::Zero(n, samples.cols());
  d.row(0) = (samples.row(1) - samples.row(0)) / dt;
  d.row(n - 1) = (samples.row(n - 1) - samples.row(n - 2)) / dt;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    d.row(i) = (samples.row(i + 1) - samples.row(i - 1)) / (2.0 * dt);
  }
  return d;
}

double position_rmse(const Trajectory& a, const Trajectory& b) {
  require(a.dims() == b.dims(), "rmse: dimension mismatch");
  const Eigen::Index n = std::min(a.size(), b.size());
  const Eigen::MatrixXd diff =
      a.positions().topRows(n) - b.positions().topRows(n);
  return std::sqrt(diff.squaredNorm() / static_cast<double>(diff.size()));
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  std::vector<std::string> names{"t"};
  for (int d = 0; d < traj.dims(); ++d) {
    const std::string p = "dof" + std::to_string(d);
    names.push_back(p + "_x");
    names.push_back(p + "_v");
    names.push_back(p + "_a");
  }
  csv::write_header(out, names);
  std::vector<double> row(names.size());
  for (Eigen::Index i = 0; i < traj.size(); ++i) {
    row[0] = traj.dt() * static_cast<double>(i);
    for (int d = 0; d < traj.dims(); ++d) {
      const auto s = traj.at(i, d);
      row[1 + 3 * d] = s.x;
      row[2 + 3 * d] = s.v;
      row[3 + 3 * d] = s.a;
    }
    csv::write_row(out, row);
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  const csv::Table table = csv::read(in);
  const auto& h = table.header;
  if (h.empty() || h[0] != "t" || (h.size() - 1) % 3 != 0 || h.size() < 4) {
    fail(ErrorCode::kParse,
         "trajectory csv: expected header t,dof0_x,dof0_v,dof0_a,...");
  }
  const int dims = static_cast<int>((h.size() - 1) / 3);
  for (int d = 0; d < dims; ++d) {
    const std::string p = "dof" + std::to_string(d);
    if (h[1 + 3 * d] != p + "_x" || h[2 + 3 * d] != p + "_v" ||
        h[3 + 3 * d] != p + "_a") {
      fail(ErrorCode::kParse, "trajectory csv: bad column near '" +
                                  h[1 + 3 * d] + "'");
    }
  }
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  if (n < 2) fail(ErrorCode::kParse, "trajectory csv: need at least 2 rows");

  const double dt = table.rows[1][0] - table.rows[0][0];
  if (!(dt > 0.0)) fail(ErrorCode::kParse, "trajectory csv: t not increasing");
  Eigen::MatrixXd x(n, dims), v(n, dims), a(n, dims);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    const double expected_t = row[0] - table.rows[0][0];
    if (std::abs(expected_t - dt * static_cast<double>(i)) > 1e-6 * dt) {
      fail(ErrorCode::kParse, "trajectory csv: non-uniform sampling at row " +
                                  std::to_string(i + 1));
    }
    for (int d = 0; d < dims; ++d) {
      x(i, d) = row[1 + 3 * d];
      v(i, d) = row[2 + 3 * d];
      a(i, d) = row[3 + 3 * d];
    }
  }
  return Trajectory(dt, std::move(x), std::move(v), std::move(a));
}

}  // namespace primo
