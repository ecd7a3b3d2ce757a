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

#include "primo/demo.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "primo/csv.hpp"
#include "primo/error.hpp"

namespace primo {
namespace {

int sample_count(double duration, double dt) {
  require(std::isfinite(duration) && duration > 0.0,
          "demo: duration must be > 0");
  require(std::isfinite(dt) && dt > 0.0, "demo: dt must be > 0");
  const double steps = std::round(duration / dt);
  require(steps >= 1.0 && steps < 1e8, "demo: duration/dt out of range");
  return static_cast<int>(steps) + 1;
}

double median(std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (n % 2 == 1) return upper;
  const double lower =
      *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

// Linear interpolation of the rows of `values` (sampled at `t`) at time q.
Eigen::RowVectorXd interpolate(const std::vector<double>& t,
                               const Eigen::MatrixXd& values, double q) {
  if (q <= t.front()) return values.row(0);
  if (q >= t.back()) return values.row(values.rows() - 1);
  const auto hi = static_cast<Eigen::Index>(
      std::upper_bound(t.begin(), t.end(), q) - t.begin());
  const Eigen::Index lo = hi - 1;
  const double s = (q - t[static_cast<std::size_t>(lo)]) /
                   (t[static_cast<std::size_t>(hi)] - t[static_cast<std::size_t>(lo)]);
  return (1.0 - s) * values.row(lo) + s * values.row(hi);
}

}  // namespace

void RawDemo::validate() const {
  require(positions.rows() == static_cast<Eigen::Index>(t.size()),
          "raw demo: timestamp/position count mismatch");
  require(positions.cols() >= 1 && positions.cols() <= 3,
          "raw demo: dims must be 1..3");
  require(positions.allFinite(), "raw demo: non-finite position");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(std::isfinite(t[i]), "raw demo: non-finite timestamp");
    if (i > 0) {
      require(t[i] > t[i - 1], "raw demo: timestamps must strictly increase");
    }
  }
}

Trajectory min_jerk(const Eigen::VectorXd& start, const Eigen::VectorXd& goal,
                    double duration, double dt) {
  require(start.size() == goal.size(), "min-jerk: start/goal size mismatch");
  require(start.allFinite() && goal.allFinite(), "min-jerk: non-finite endpoint");
  const int n = sample_count(duration, dt);
  const Eigen::RowVectorXd delta = (goal - start).transpose();
  Eigen::MatrixXd x(n, start.size()), v(n, start.size()), a(n, start.size());
  for (int i = 0; i < n; ++i) {
    const double s = std::min(1.0, i * dt / duration);
    const double s2 = s * s, s3 = s2 * s;
    const double p = s3 * (10.0 - 15.0 * s + 6.0 * s2);
    const double dp = 30.0 * s2 * (1.0 - 2.0 * s + s2) / duration;
    const double ddp = 60.0 * s * (1.0 - 3.0 * s + 2.0 * s2) / (duration * duration);
    x.row(i) = start.transpose() + p * delta;
    v.row(i) = dp * delta;
    a.row(i) = ddp * delta;
  }
  return Trajectory(dt, std::move(x), std::move(v), std::move(a));
}

Trajectory clean_profile(const SyntheticDemoSpec& spec) {
  Trajectory base = min_jerk(spec.start, spec.goal, spec.duration, spec.dt);
  if (spec.profile == DemoProfile::kMinJerk) {
    require(!spec.avoidance,
            "demo: avoidance injection needs the dmp-rollout profile");
    return base;
  }
  const DmpModel model = fit_weights(base, spec.dmp);
  std::vector<Coupling> couplings;
  if (spec.avoidance) {
    couplings.push_back(make_avoidance_coupling({spec.avoidance->obstacle},
                                                spec.avoidance->params,
                                                spec.avoidance->influence_radius));
  }
  return rollout(model,
                 RolloutSpec{model.x0, model.g, model.tau, spec.dt,
                             static_cast<int>(base.size())},
                 couplings);
}

RawDemo generate_synthetic_demo(const SyntheticDemoSpec& spec) {
  require(spec.noise_sigma >= 0.0 && std::isfinite(spec.noise_sigma),
          "demo: noise_sigma must be >= 0");
  require(spec.time_jitter >= 0.0 && spec.time_jitter < 0.5,
          "demo: time_jitter must be in [0, 0.5)");
  const Trajectory clean = clean_profile(spec);
  const auto n = clean.size();

  std::mt19937_64 rng(spec.seed);
  RawDemo raw;
  raw.noise_sigma = spec.noise_sigma;
  raw.t.resize(static_cast<std::size_t>(n));
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = static_cast<double>(i) * spec.dt;
  }
  if (spec.time_jitter > 0.0) {
    std::uniform_real_distribution<double> jitter(-spec.time_jitter,
                                                  spec.time_jitter);
    raw.positions.resize(n, clean.dims());
    for (Eigen::Index i = 0; i < n; ++i) {
      double t = grid[static_cast<std::size_t>(i)];
      if (i > 0 && i + 1 < n) t += jitter(rng) * spec.dt;
      raw.t[static_cast<std::size_t>(i)] = t;
      raw.positions.row(i) = interpolate(grid, clean.positions(), t);
    }
  } else {
    raw.t = grid;
    raw.positions = clean.positions();
  }
  if (spec.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index d = 0; d < raw.positions.cols(); ++d) {
        raw.positions(i, d) += noise(rng);
      }
    }
  }
  return raw;
}

void PreprocessConfig::validate() const {
  if (resample_dt) {
    require(std::isfinite(*resample_dt) && *resample_dt > 0.0,
            "preprocess: resample_dt must be > 0");
  }
  require(hampel_window >= 3 && hampel_window % 2 == 1,
          "preprocess: hampel_window must be odd and >= 3");
  require(std::isfinite(hampel_nsigma) && hampel_nsigma > 0.0,
          "preprocess: hampel_nsigma must be > 0");
  require(smooth_order >= 2 && smooth_order <= 6,
          "preprocess: smooth_order must be in [2, 6]");
  require(smooth_window > smooth_order && smooth_window % 2 == 1,
          "preprocess: smooth_window must be odd and > smooth_order");
}

Eigen::VectorXd hampel_filter(const Eigen::VectorXd& x, int window,
                              double nsigma) {
  constexpr double kMadScale = 1.4826;
  const Eigen::Index n = x.size();
  const Eigen::Index half = window / 2;
  Eigen::VectorXd out = x;
  std::vector<double> buf;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - half);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + half);
    buf.assign(x.data() + lo, x.data() + hi + 1);
    const double med = median(buf);
    for (auto& b : buf) b = std::abs(b - med);
    const double mad = median(buf);
    if (std::abs(x[i] - med) > nsigma * kMadScale * mad) out[i] = med;
  }
  return out;
}

SmoothedSeries savitzky_golay(const Eigen::VectorXd& x, double dt, int window,
                              int order) {
  require(dt > 0.0, "savitzky_golay: dt must be > 0");
  require(order >= 0 && window > order && window % 2 == 1,
          "savitzky_golay: window must be odd and > order");
  const Eigen::Index n = x.size();
  const Eigen::Index w = window;
  if (n < w) fail(ErrorCode::kInsufficientData, "savitzky_golay: series shorter than window");

  // One projection per position of the evaluation point inside the window:
  // rows 0..2 of pinv(V) give value, slope and curvature at that point.
  std::vector<Eigen::MatrixXd> rows(static_cast<std::size_t>(w));
  for (Eigen::Index at = 0; at < w; ++at) {
    Eigen::MatrixXd v(w, order + 1);
    for (Eigen::Index j = 0; j < w; ++j) {
      const double s = static_cast<double>(j - at) * dt;
      double p = 1.0;
      for (int k = 0; k <= order; ++k, p *= s) v(j, k) = p;
    }
    const Eigen::MatrixXd pinv = v.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(w, w));
    rows[static_cast<std::size_t>(at)] = pinv.topRows(std::min(order + 1, 3));
  }

  SmoothedSeries out{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd::Zero(n)};
  const Eigen::Index half = w / 2;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index lo = std::clamp<Eigen::Index>(i - half, 0, n - w);
    const Eigen::MatrixXd& r = rows[static_cast<std::size_t>(i - lo)];
    const Eigen::VectorXd c = r * x.segment(lo, w);
    out.x[i] = c[0];
    out.v[i] = c.size() > 1 ? c[1] : 0.0;
    out.a[i] = c.size() > 2 ? 2.0 * c[2] : 0.0;
  }
  return out;
}

Trajectory preprocess(const RawDemo& raw, const PreprocessConfig& config) {
  config.validate();
  if (raw.size() < 10) {
    fail(ErrorCode::kInsufficientData, "preprocess: need at least 10 samples");
  }
  raw.validate();

  const double t0 = raw.t.front();
  const double span = raw.t.back() - t0;
  const double dt = config.resample_dt.value_or(
      span / static_cast<double>(raw.size() - 1));
  const auto m = static_cast<Eigen::Index>(std::floor(span / dt + 1e-9)) + 1;
  if (m < 10) {
    fail(ErrorCode::kInsufficientData,
         "preprocess: fewer than 10 samples after resampling");
  }

  Eigen::MatrixXd x(m, raw.dims());
  for (Eigen::Index j = 0; j < m; ++j) {
    x.row(j) = interpolate(raw.t, raw.positions, t0 + static_cast<double>(j) * dt);
  }
  if (m < config.smooth_window) {
    fail(ErrorCode::kInsufficientData, "preprocess: fewer samples than smooth_window");
  }
  Eigen::MatrixXd v(m, raw.dims());
  Eigen::MatrixXd a(m, raw.dims());
  for (Eigen::Index d = 0; d < x.cols(); ++d) {
    const Eigen::VectorXd col = x.col(d);
    const SmoothedSeries s = savitzky_golay(
        hampel_filter(col, config.hampel_window, config.hampel_nsigma), dt,
        config.smooth_window, config.smooth_order);
    x.col(d) = s.x;
    v.col(d) = s.v;
    a.col(d) = s.a;
  }
  return Trajectory(dt, std::move(x), std::move(v), std::move(a));
}

Eigen::MatrixXd Pca2dProjection::project(const Eigen::MatrixXd& points) const {
  return (points.rowwise() - mean.transpose()) * components.transpose();
}

Eigen::MatrixXd Pca2dProjection::lift(const Eigen::MatrixXd& planar) const {
  return (planar * components).rowwise() + mean.transpose();
}

Pca2dProjection pca_project(const Trajectory& traj) {
  require(traj.dims() >= 2, "pca: needs at least 2 dimensions");
  const Eigen::MatrixXd& x = traj.positions();
  const Eigen::VectorXd mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(x.rows() - 1);
  if (!(cov.trace() > 0.0)) {
    fail(ErrorCode::kDegenerateData, "pca: positions have zero variance");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const int d = traj.dims();
  Eigen::VectorXd values(d);
  Eigen::MatrixXd components(2, d);
  for (int i = 0; i < d; ++i) values[i] = eig.eigenvalues()[d - 1 - i];
  for (int r = 0; r < 2; ++r) {
    Eigen::VectorXd c = eig.eigenvectors().col(d - 1 - r);
    Eigen::Index arg = 0;
    c.cwiseAbs().maxCoeff(&arg);
    if (c[arg] < 0.0) c = -c;
    components.row(r) = c.transpose();
  }
  Eigen::MatrixXd p = centered * components.transpose();
  Eigen::MatrixXd v = traj.velocities() * components.transpose();
  Eigen::MatrixXd a = traj.accelerations() * components.transpose();
  return Pca2dProjection{mean, components, values,
                         Trajectory(traj.dt(), std::move(p), std::move(v),
                                    std::move(a))};
}

void write_raw_csv(const RawDemo& demo, std::ostream& out) {
  demo.validate();
  std::vector<std::string> names{"t"};
  for (int d = 0; d < demo.dims(); ++d) names.push_back("x" + std::to_string(d));
  csv::write_header(out, names);
  std::vector<double> row(names.size());
  for (std::size_t i = 0; i < demo.size(); ++i) {
    row[0] = demo.t[i];
    for (int d = 0; d < demo.dims(); ++d) {
      row[static_cast<std::size_t>(d) + 1] =
          demo.positions(static_cast<Eigen::Index>(i), d);
    }
    csv::write_row(out, row);
  }
}

RawDemo read_raw_csv(std::istream& in) {
  const csv::Table table = csv::read(in);
  const auto& h = table.header;
  if (h.size() < 2 || h.size() > 4 || h[0] != "t") {
    fail(ErrorCode::kParse, "raw demo csv: expected header t,x0[,x1[,x2]]");
  }
  for (std::size_t d = 1; d < h.size(); ++d) {
    if (h[d] != "x" + std::to_string(d - 1)) {
      fail(ErrorCode::kParse, "raw demo csv: bad column '" + h[d] + "'");
    }
  }
  RawDemo demo;
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  demo.positions.resize(n, static_cast<Eigen::Index>(h.size() - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    demo.t.push_back(row[0]);
    for (std::size_t d = 1; d < row.size(); ++d) {
      demo.positions(i, static_cast<Eigen::Index>(d - 1)) = row[d];
    }
  }
  try {
    demo.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kParse, std::string("raw demo csv: ") + e.what());
  }
  return demo;
}

}  // namespace primo
