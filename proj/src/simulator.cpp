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

#include "primo/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "primo/dmp.hpp"
#include "primo/grasp_maintenance.hpp"

namespace primo {
namespace {

Eigen::Vector3d embed(const Eigen::VectorXd& v) {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  out.head(v.size()) = v;
  return out;
}

const DistanceCouplingSkill* first_distance_skill(const SkillLibrary& library) {
  for (const auto& s : library.relative) {
    if (const auto* d = std::get_if<DistanceCouplingSkill>(&s)) return d;
  }
  return nullptr;
}

struct Weights {
  std::vector<double> abs;
  std::vector<double> rel;
};

Weights weights_at(const Scene& scene, const SkillLibrary& library, double t) {
  const WeightEntry* active = nullptr;
  for (const auto& e : scene.schedule) {
    if (e.t_start <= t) active = &e;
  }
  if (!active) return {library.weights_abs, library.weights_rel};
  return {active->w_abs, active->w_rel};
}

struct SkillState {
  const AbsoluteSkill* skill;
  double tau;
  double phase_rate;
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  std::optional<Coupling> coupling;
};

}  // namespace

void Scene::validate() const {
  require(dims >= 1 && dims <= 3, "scene: dims must be 1..3");
  require(start.size() == dims && goal.size() == dims,
          "scene: start/goal must have `dims` entries");
  require(start.allFinite() && goal.allFinite(), "scene: non-finite start/goal");
  grasp.validate(symmetric_grasp);
  if (dims < 3) {
    for (const auto* r : {&grasp.r_left, &grasp.r_right}) {
      require(r->tail(3 - dims).isZero(0.0),
              "scene: grasp offsets must lie in the workspace plane");
    }
  }
  for (const auto& o : obstacles) {
    require(o.position.size() == dims && o.position.allFinite(),
            "scene: obstacle position must have `dims` finite entries");
    require(std::isfinite(o.radius) && o.radius >= 0.0,
            "scene: obstacle radius must be >= 0");
  }
  require(std::isfinite(dt) && dt > 0.0, "scene: dt must be > 0");
  require(std::isfinite(horizon) && horizon > 0.0, "scene: horizon must be > 0");
  if (tau) require(std::isfinite(*tau) && *tau > 0.0, "scene: tau must be > 0");
  if (influence_radius) {
    require(*influence_radius > 0.0, "scene: influence_radius must be > 0");
  }
  if (disturbance) {
    require(disturbance->duration >= 0.0 && std::isfinite(disturbance->speed),
            "scene: bad disturbance");
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    require(schedule[i].t_start > schedule[i - 1].t_start,
            "scene: weight schedule must be sorted by t_start");
  }
  require(obstacle_jitter >= 0.0, "scene: obstacle_jitter must be >= 0");
  require(goal_tolerance > 0.0 && grasp_tolerance > 0.0,
          "scene: tolerances must be > 0");
}

double desired_contact_distance(const Scene& scene, const SkillLibrary& library,
                                Side side) {
  if (const auto* skill = first_distance_skill(library)) {
    return skill->desired(side);
  }
  return scene.grasp.offset(side).norm();
}

Metrics compute_metrics(const Scene& scene, const SkillLibrary& library,
                        const Trajectory& object, const Trajectory& left,
                        const Trajectory& right) {
  Metrics m;
  const Eigen::Index n = object.size();
  m.goal_error = (object.position(n - 1) - scene.goal).norm();
  if (!scene.obstacles.empty()) {
    double clearance = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (const auto& o : scene.obstacles) {
        const double d = (object.position(i) - o.position).norm();
        clearance = std::min(clearance, d);
        if (d < o.radius) m.collided = true;
      }
    }
    m.min_clearance = clearance;
  }
  const double want_l = desired_contact_distance(scene, library, Side::kLeft);
  const double want_r = desired_contact_distance(scene, library, Side::kRight);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d o = embed(object.position(i));
    const double dl = (Eigen::Vector3d(left.position(i)) - o).norm();
    const double dr = (Eigen::Vector3d(right.position(i)) - o).norm();
    m.max_grasp_deviation = std::max(
        {m.max_grasp_deviation, std::abs(dl - want_l), std::abs(dr - want_r)});
  }
  m.stress = m.max_grasp_deviation;
  m.success = m.goal_error < scene.goal_tolerance && !m.collided &&
              m.max_grasp_deviation < scene.grasp_tolerance;
  return m;
}

RolloutLog run_scene(const Scene& scene, const SkillLibrary& library) {
  scene.validate();
  library.validate();
  for (const auto& e : scene.schedule) {
    require(e.w_abs.size() == library.absolute.size() &&
                e.w_rel.size() == library.relative.size(),
            "scene: schedule weights must match the library");
  }
  for (const auto& rel : library.relative) {
    require(std::holds_alternative<DistanceCouplingSkill>(rel),
            "simulate: force-based grasp skills need force measurements; the "
            "kinematic simulator only provides contact distances");
  }
  if (!library.relative.empty()) {
    require(scene.grasp.r_left.norm() > 0.0 && scene.grasp.r_right.norm() > 0.0,
            "simulate: distance grasp skill needs nonzero contact offsets");
  }

  const int d = scene.dims;
  const auto n = static_cast<Eigen::Index>(std::llround(scene.horizon / scene.dt)) + 1;
  require(n >= 2, "simulate: horizon shorter than one step");

  std::vector<SkillState> skills;
  for (const auto& s : library.absolute) {
    require(s.model.dims() == d, "simulate: skill '" + s.name +
                                     "' does not match the scene dimension");
    const double tau = scene.tau.value_or(s.model.tau);
    require(scene.dt <= 0.1 * tau / s.model.alpha,
            "simulate: dt exceeds the explicit-Euler stability bound "
            "0.1 * tau / alpha for skill '" + s.name + "'");
    SkillState st{&s, tau, s.model.alpha_k * scene.dt / tau, scene.start,
                  Eigen::VectorXd::Zero(d), std::nullopt};
    if (s.avoidance && scene.avoidance_enabled && !scene.obstacles.empty()) {
      st.coupling = make_avoidance_coupling(scene.obstacles, *s.avoidance,
                                            scene.influence_radius);
    }
    skills.push_back(std::move(st));
  }

  Eigen::MatrixXd ox(n, d), ov(n, d), oa(n, d);
  Eigen::MatrixXd lx(n, 3), lv(n, 3), rx(n, 3), rv(n, 3);
  Eigen::MatrixXd commands(n, 12);

  Eigen::VectorXd x_obj = scene.start;
  Eigen::Vector3d p_left = embed(scene.start) + scene.grasp.r_left;
  Eigen::Vector3d p_right = embed(scene.start) + scene.grasp.r_right;

  std::vector<Twist> abs_twists(skills.size());
  std::vector<Eigen::VectorXd> accels(skills.size());
  std::vector<CommandPair> rel_twists(library.relative.size());

  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * scene.dt;
    const Weights w = weights_at(scene, library, t);

    Eigen::VectorXd v_obj = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd a_obj = Eigen::VectorXd::Zero(d);
    for (std::size_t j = 0; j < skills.size(); ++j) {
      auto& s = skills[j];
      const double k = std::exp(-s.phase_rate * static_cast<double>(i));
      Eigen::VectorXd a =
          dmp_acceleration(s.skill->model, scene.goal, s.tau, s.x, s.v, k);
      if (s.coupling) a += (*s.coupling)(s.x, s.v, k);
      accels[j] = a;
      abs_twists[j] = Twist{embed(s.v), Eigen::Vector3d::Zero()};
      v_obj += w.abs[j] * s.v;
      a_obj += w.abs[j] * a;
    }

    const Eigen::Vector3d o3 = embed(x_obj);
    const Eigen::Vector3d axis_l = p_left - o3;
    const Eigen::Vector3d axis_r = p_right - o3;
    for (std::size_t k = 0; k < library.relative.size(); ++k) {
      const auto& skill = std::get<DistanceCouplingSkill>(library.relative[k]);
      rel_twists[k] = CommandPair{
          Twist{distance_correction(skill, Side::kLeft, axis_l.norm(), axis_l),
                Eigen::Vector3d::Zero()},
          Twist{distance_correction(skill, Side::kRight, axis_r.norm(), axis_r),
                Eigen::Vector3d::Zero()}};
    }

    const CommandPair cmd = merge(scene.grasp, abs_twists, w.abs, rel_twists, w.rel);
    Eigen::Vector3d vel_l = cmd.left.linear;
    Eigen::Vector3d vel_r = cmd.right.linear;
    if (scene.disturbance && t >= scene.disturbance->t_start &&
        t < scene.disturbance->t_start + scene.disturbance->duration) {
      const double speed = scene.disturbance->speed;
      if (axis_l.norm() > 0.0) vel_l -= speed * axis_l.normalized();
      if (axis_r.norm() > 0.0) vel_r -= speed * axis_r.normalized();
    }

    if (!x_obj.allFinite() || !v_obj.allFinite() || !a_obj.allFinite() ||
        !p_left.allFinite() || !p_right.allFinite() || !vel_l.allFinite() ||
        !vel_r.allFinite()) {
      throw DivergenceError(i, "simulate: non-finite state");
    }

    ox.row(i) = x_obj.transpose();
    ov.row(i) = v_obj.transpose();
    oa.row(i) = a_obj.transpose();
    lx.row(i) = p_left.transpose();
    lv.row(i) = vel_l.transpose();
    rx.row(i) = p_right.transpose();
    rv.row(i) = vel_r.transpose();
    commands.row(i) << cmd.left.stacked().transpose(), cmd.right.stacked().transpose();

    for (std::size_t j = 0; j < skills.size(); ++j) {
      skills[j].x += scene.dt * skills[j].v;
      skills[j].v += scene.dt * accels[j];
    }
    x_obj += scene.dt * v_obj;
    p_left += scene.dt * vel_l;
    p_right += scene.dt * vel_r;
  }

  Eigen::MatrixXd la = differentiate(lv, scene.dt);
  Eigen::MatrixXd ra = differentiate(rv, scene.dt);
  RolloutLog log{Trajectory(scene.dt, std::move(ox), std::move(ov), std::move(oa)),
                 Trajectory(scene.dt, std::move(lx), std::move(lv), std::move(la)),
                 Trajectory(scene.dt, std::move(rx), std::move(rv), std::move(ra)),
                 std::move(commands), Metrics{}};
  log.metrics = compute_metrics(scene, library, log.object, log.left, log.right);
  return log;
}

RolloutLog run_pick_and_raise(const Scene& scene, const SkillLibrary& library) {
  require(first_distance_skill(library) != nullptr,
          "pick-and-raise: library needs a distance-based grasp skill");
  return run_scene(scene, library);
}

RolloutLog run(const Scene& scene, const SkillLibrary& library) {
  return scene.task == SceneTask::kPickAndRaise
             ? run_pick_and_raise(scene, library)
             : run_scene(scene, library);
}

Scene randomized(const Scene& scene, std::uint64_t seed) {
  Scene out = scene;
  if (scene.obstacle_jitter <= 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scene.obstacle_jitter,
                                           scene.obstacle_jitter);
  for (auto& o : out.obstacles) {
    for (Eigen::Index k = 0; k < o.position.size(); ++k) o.position[k] += u(rng);
  }
  return out;
}

std::vector<BatchEntry> batch_run(std::span<const BatchJob> jobs, int threads) {
  for (const auto& job : jobs) require(job.library != nullptr, "batch: job without library");
  std::vector<BatchEntry> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const BatchJob& job = jobs[i];
      try {
        const Scene scene = job.seed ? randomized(job.scene, *job.seed) : job.scene;
        results[i].log = run(scene, *job.library);
      } catch (const Error& e) {
        results[i].error = e.code();
        results[i].message = e.what();
      }
    }
  };
  unsigned count = threads > 0 ? static_cast<unsigned>(threads)
                               : std::max(1u, std::thread::hardware_concurrency());
  count = std::min<unsigned>(count, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  return results;
}

std::vector<BatchEntry> batch_run(std::span<const Scene> scenes,
                                  const SkillLibrary& library,
                                  std::span<const std::uint64_t> seeds,
                                  int threads) {
  require(seeds.empty() || seeds.size() == scenes.size(),
          "batch: need one seed per scene");
  std::vector<BatchJob> jobs;
  jobs.reserve(scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    jobs.push_back({scenes[i], &library,
                    seeds.empty() ? std::nullopt : std::optional<std::uint64_t>(seeds[i])});
  }
  return batch_run(std::span<const BatchJob>(jobs), threads);
}

}  // namespace primo
