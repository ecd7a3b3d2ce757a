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

#ifndef PRIMO_DEMO_HPP_
#define PRIMO_DEMO_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "primo/avoidance.hpp"
#include "primo/dmp.hpp"
#include "primo/trajectory.hpp"

namespace primo {

// Position stream as recorded, before any cleanup.
struct RawDemo {
  std::vector<double> t;      // s, strictly increasing
  Eigen::MatrixXd positions;  // samples x dims
  double noise_sigma = 0.0;   // metadata only

  int dims() const { return static_cast<int>(positions.cols()); }
  std::size_t size() const { return t.size(); }
  void validate() const;
};

enum class DemoProfile { kMinJerk, kDmpRollout };

struct AvoidanceInjection {
  Obstacle obstacle;
  AvoidanceParams params;
  std::optional<double> influence_radius;  // m
};

struct SyntheticDemoSpec {
  DemoProfile profile = DemoProfile::kMinJerk;
  Eigen::VectorXd start;
  Eigen::VectorXd goal;
  double duration = 1.0;
  double dt = 1e-3;
  double noise_sigma = 0.0;  // m, additive Gaussian on every coordinate
  double time_jitter = 0.0;  // uniform timestamp jitter, fraction of dt (< 0.5)
  std::uint64_t seed = 0;
  // dmp-rollout only: the model is fitted to the min-jerk profile with these
  // parameters and rolled out, optionally with an avoidance coupling.
  DmpParams dmp;
  std::optional<AvoidanceInjection> avoidance;
};

// Quintic minimum-jerk profile from start to goal, analytic v and a.
Trajectory min_jerk(const Eigen::VectorXd& start, const Eigen::VectorXd& goal,
                    double duration, double dt);

// Noise-free uniform trajectory the generator samples from.
Trajectory clean_profile(const SyntheticDemoSpec& spec);

// Deterministic for a given spec (including its seed).
RawDemo generate_synthetic_demo(const SyntheticDemoSpec& spec);

struct PreprocessConfig {
  std::optional<double> resample_dt;  // default: mean input spacing
  int hampel_window = 7;
  double hampel_nsigma = 3.0;
  int smooth_window = 9;
  int smooth_order = 3;

  void validate() const;
};

// Hampel identifier over a centered window (clipped at the ends): samples
// farther than nsigma * 1.4826 * MAD from the window median are replaced by
// that median.
Eigen::VectorXd hampel_filter(const Eigen::VectorXd& x, int window,
                              double nsigma);

struct SmoothedSeries {
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  Eigen::VectorXd a;
};

// Savitzky-Golay filter: a least-squares polynomial of the given order over
// `window` samples around each point, evaluated with its first two
// derivatives. Near the ends the window stays full length and the point sits
// off-centre, so polynomials up to `order` pass through unchanged
// everywhere. Needs window odd, order < window, at least window samples.
SmoothedSeries savitzky_golay(const Eigen::VectorXd& x, double dt, int window,
                              int order);

// Resample to uniform dt, reject outliers, then smooth and differentiate
// with savitzky_golay.
// Throws kInsufficientData for fewer than 10 samples.
Trajectory preprocess(const RawDemo& raw, const PreprocessConfig& config = {});

struct Pca2dProjection {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;   // 2 x d, orthonormal rows
  Eigen::VectorXd eigenvalues;  // all d, descending
  Trajectory projected;         // dims = 2

  Eigen::MatrixXd project(const Eigen::MatrixXd& points) const;
  Eigen::MatrixXd lift(const Eigen::MatrixXd& planar) const;
};

// Throws kDegenerateData when the positions have no variance.
Pca2dProjection pca_project(const Trajectory& traj);

// `t,x0,x1,...`
void write_raw_csv(const RawDemo& demo, std::ostream& out);
RawDemo read_raw_csv(std::istream& in);

}  // namespace primo

#endif  // PRIMO_DEMO_HPP_
