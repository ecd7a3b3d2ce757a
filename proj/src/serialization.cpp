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

#include "primo/serialization.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "primo/csv.hpp"
#include "primo/error.hpp"

namespace primo {
namespace {

namespace fs = std::filesystem;

Json vec(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json vec3(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

Eigen::VectorXd to_vec(const Json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::kParse, std::string(what) + ": expected array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      fail(ErrorCode::kParse, std::string(what) + ": expected numbers");
    }
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Eigen::Vector3d to_vec3(const Json& j, const char* what) {
  const Eigen::VectorXd v = to_vec(j, what);
  if (v.size() != 3) fail(ErrorCode::kParse, std::string(what) + ": expected 3 numbers");
  return v;
}

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    fail(ErrorCode::kParse, std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

// Run `body`, turning nlohmann errors into kParse and semantic validation
// failures on freshly parsed data into kParse as well.
template <typename F>
auto parsing(const char* what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

Json resolve(const Json& j, const fs::path& base_dir) {
  if (j.is_string()) return read_json_file(base_dir / j.get<std::string>());
  return j;
}

}  // namespace

Json dmp_to_json(const DmpModel& model) {
  Json weights = Json::array();
  for (Eigen::Index i = 0; i < model.weights.rows(); ++i) {
    weights.push_back(vec(model.weights.row(i).transpose()));
  }
  return Json{{"alpha", model.alpha},     {"beta", model.beta},
              {"tau", model.tau},         {"alpha_k", model.alpha_k},
              {"centers", vec(model.centers)}, {"widths", vec(model.widths)},
              {"weights", weights},       {"x0", vec(model.x0)},
              {"g", vec(model.g)},        {"dims", model.dims()}};
}

DmpModel dmp_from_json(const Json& j) {
  return parsing("dmp json", [&] {
    DmpModel m;
    m.alpha = number(j, "alpha");
    m.beta = number(j, "beta");
    m.tau = number(j, "tau");
    m.alpha_k = number(j, "alpha_k");
    m.centers = to_vec(j.at("centers"), "centers");
    m.widths = to_vec(j.at("widths"), "widths");
    m.x0 = to_vec(j.at("x0"), "x0");
    m.g = to_vec(j.at("g"), "g");
    const int dims = j.at("dims").get<int>();
    if (dims != m.x0.size()) fail(ErrorCode::kParse, "dmp json: dims disagrees with x0");
    const Json& w = j.at("weights");
    if (!w.is_array()) fail(ErrorCode::kParse, "dmp json: weights must be an array");
    m.weights.resize(static_cast<Eigen::Index>(w.size()), dims);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Eigen::VectorXd row = to_vec(w[i], "weights");
      if (row.size() != dims) {
        fail(ErrorCode::kParse, "dmp json: each weights entry needs `dims` values");
      }
      m.weights.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    try {
      m.validate();
    } catch (const Error& e) {
      fail(ErrorCode::kParse, std::string("dmp json: ") + e.what());
    }
    return m;
  });
}

Json avoidance_to_json(const AvoidanceParams& params) {
  return Json{{"gamma", params.gamma}, {"beta_oa", params.beta_oa}};
}

AvoidanceParams avoidance_from_json(const Json& j) {
  return parsing("avoidance json", [&] {
    AvoidanceParams p{number(j, "gamma"), number(j, "beta_oa")};
    try {
      p.validate();
    } catch (const Error& e) {
      fail(ErrorCode::kParse, std::string("avoidance json: ") + e.what());
    }
    return p;
  });
}

Json relative_skill_to_json(const RelativeSkill& skill) {
  if (const auto* d = std::get_if<DistanceCouplingSkill>(&skill)) {
    return Json{{"type", "distance"},
                {"gain", vec3(d->gain)},
                {"setpoint", Json::array({d->d_desired_left, d->d_desired_right})}};
  }
  const auto& f = std::get<ForceCouplingSkill>(skill);
  return Json{{"type", "force"}, {"gain", vec3(f.gain)}, {"setpoint", vec3(f.f_desired)}};
}

RelativeSkill relative_skill_from_json(const Json& j) {
  return parsing("relative skill json", [&]() -> RelativeSkill {
    const std::string type = j.at("type").get<std::string>();
    Eigen::Vector3d gain = Eigen::Vector3d::Ones();
    if (j.contains("gain")) {
      const Eigen::VectorXd g = to_vec(j.at("gain"), "gain");
      if (g.size() == 1) {
        gain.setConstant(g[0]);
      } else if (g.size() == 3) {
        gain = g;
      } else {
        fail(ErrorCode::kParse, "gain: expected 1 or 3 numbers");
      }
    }
    const Eigen::VectorXd sp = to_vec(j.at("setpoint"), "setpoint");
    if (type == "distance") {
      DistanceCouplingSkill s;
      s.gain = gain;
      if (sp.size() == 1) {
        s.d_desired_left = s.d_desired_right = sp[0];
      } else if (sp.size() == 2) {
        s.d_desired_left = sp[0];
        s.d_desired_right = sp[1];
      } else {
        fail(ErrorCode::kParse, "distance setpoint: expected [d] or [d_left, d_right]");
      }
      s.validate();
      return s;
    }
    if (type == "force") {
      if (sp.size() != 3) fail(ErrorCode::kParse, "force setpoint: expected 3 numbers");
      ForceCouplingSkill s;
      s.gain = gain;
      s.f_desired = sp;
      s.validate();
      return s;
    }
    fail(ErrorCode::kParse, "relative skill: unknown type '" + type + "'");
  });
}

PreprocessConfig preprocess_config_from_json(const Json& j) {
  return parsing("preprocess config", [&] {
    PreprocessConfig c;
    if (j.contains("resample_dt") && !j.at("resample_dt").is_null()) {
      c.resample_dt = j.at("resample_dt").get<double>();
    }
    if (j.contains("hampel_window")) c.hampel_window = j.at("hampel_window").get<int>();
    if (j.contains("hampel_nsigma")) c.hampel_nsigma = j.at("hampel_nsigma").get<double>();
    if (j.contains("smooth_window")) c.smooth_window = j.at("smooth_window").get<int>();
    if (j.contains("smooth_order")) c.smooth_order = j.at("smooth_order").get<int>();
    c.validate();
    return c;
  });
}

SkillLibrary library_from_json(const Json& j, const fs::path& base_dir) {
  return parsing("library json", [&] {
    SkillLibrary lib;
    if (j.contains("absolute")) {
      for (const auto& a : j.at("absolute")) {
        AbsoluteSkill s;
        s.name = a.value("name", "skill" + std::to_string(lib.absolute.size()));
        s.model = dmp_from_json(resolve(a.at("dmp"), base_dir));
        if (a.contains("avoidance") && !a.at("avoidance").is_null()) {
          s.avoidance = avoidance_from_json(resolve(a.at("avoidance"), base_dir));
        }
        lib.weights_abs.push_back(a.value("weight", 1.0));
        lib.absolute.push_back(std::move(s));
      }
    }
    if (j.contains("relative")) {
      for (const auto& r : j.at("relative")) {
        lib.relative.push_back(relative_skill_from_json(r));
        lib.weights_rel.push_back(r.value("weight", 1.0));
      }
    }
    lib.validate();
    return lib;
  });
}

Json library_to_json(const SkillLibrary& library) {
  Json abs = Json::array();
  for (std::size_t i = 0; i < library.absolute.size(); ++i) {
    const auto& s = library.absolute[i];
    abs.push_back(Json{{"name", s.name},
                       {"dmp", dmp_to_json(s.model)},
                       {"avoidance", s.avoidance ? avoidance_to_json(*s.avoidance)
                                                 : Json(nullptr)},
                       {"weight", library.weights_abs[i]}});
  }
  Json rel = Json::array();
  for (std::size_t i = 0; i < library.relative.size(); ++i) {
    Json r = relative_skill_to_json(library.relative[i]);
    r["weight"] = library.weights_rel[i];
    rel.push_back(std::move(r));
  }
  return Json{{"absolute", abs}, {"relative", rel}};
}

Scene scene_from_json(const Json& j) {
  return parsing("scene json", [&] {
    Scene s;
    const std::string task = j.value("task", "pick-and-place");
    if (task == "pick-and-place") {
      s.task = SceneTask::kPickAndPlace;
    } else if (task == "pick-and-raise") {
      s.task = SceneTask::kPickAndRaise;
    } else {
      fail(ErrorCode::kParse, "scene: unknown task '" + task + "'");
    }
    s.dims = j.at("dims").get<int>();
    s.start = to_vec(j.at("start"), "start");
    s.goal = to_vec(j.at("goal"), "goal");
    if (j.contains("grasp")) {
      s.grasp.r_left = to_vec3(j.at("grasp").at("r_left"), "r_left");
      s.grasp.r_right = to_vec3(j.at("grasp").at("r_right"), "r_right");
    }
    s.symmetric_grasp = j.value("symmetric_grasp", false);
    if (j.contains("obstacles")) {
      for (const auto& o : j.at("obstacles")) {
        s.obstacles.push_back({to_vec(o.at("position"), "obstacle position"),
                               o.value("radius", 0.0)});
      }
    }
    if (j.contains("weight_schedule")) {
      for (const auto& e : j.at("weight_schedule")) {
        WeightEntry w;
        w.t_start = e.value("t_start", 0.0);
        w.w_abs = e.value("w_abs", std::vector<double>{});
        w.w_rel = e.value("w_rel", std::vector<double>{});
        s.schedule.push_back(std::move(w));
      }
    }
    s.dt = j.value("dt", s.dt);
    s.horizon = j.value("horizon", s.horizon);
    if (j.contains("tau") && !j.at("tau").is_null()) s.tau = j.at("tau").get<double>();
    s.avoidance_enabled = j.value("avoidance_enabled", true);
    if (j.contains("influence_radius") && !j.at("influence_radius").is_null()) {
      s.influence_radius = j.at("influence_radius").get<double>();
    }
    if (j.contains("disturbance") && !j.at("disturbance").is_null()) {
      const Json& d = j.at("disturbance");
      if (d.value("type", "squeeze") != "squeeze") {
        fail(ErrorCode::kParse, "scene: only squeeze disturbances are supported");
      }
      s.disturbance = SqueezeDisturbance{number(d, "t_start"), number(d, "duration"),
                                         number(d, "speed")};
    }
    s.obstacle_jitter = j.value("obstacle_jitter", 0.0);
    if (j.contains("tolerances")) {
      s.goal_tolerance = j.at("tolerances").value("goal", s.goal_tolerance);
      s.grasp_tolerance = j.at("tolerances").value("grasp", s.grasp_tolerance);
    }
    try {
      s.validate();
    } catch (const Error& e) {
      fail(ErrorCode::kParse, e.what());
    }
    return s;
  });
}

Json scene_to_json(const Scene& s) {
  Json obstacles = Json::array();
  for (const auto& o : s.obstacles) {
    obstacles.push_back(Json{{"position", vec(o.position)}, {"radius", o.radius}});
  }
  Json schedule = Json::array();
  for (const auto& e : s.schedule) {
    schedule.push_back(Json{{"t_start", e.t_start}, {"w_abs", e.w_abs}, {"w_rel", e.w_rel}});
  }
  Json j{{"task", s.task == SceneTask::kPickAndRaise ? "pick-and-raise" : "pick-and-place"},
         {"dims", s.dims},
         {"start", vec(s.start)},
         {"goal", vec(s.goal)},
         {"grasp", Json{{"r_left", vec3(s.grasp.r_left)}, {"r_right", vec3(s.grasp.r_right)}}},
         {"symmetric_grasp", s.symmetric_grasp},
         {"obstacles", obstacles},
         {"weight_schedule", schedule},
         {"dt", s.dt},
         {"horizon", s.horizon},
         {"tau", s.tau ? Json(*s.tau) : Json(nullptr)},
         {"avoidance_enabled", s.avoidance_enabled},
         {"influence_radius", s.influence_radius ? Json(*s.influence_radius) : Json(nullptr)},
         {"obstacle_jitter", s.obstacle_jitter},
         {"tolerances", Json{{"goal", s.goal_tolerance}, {"grasp", s.grasp_tolerance}}}};
  if (s.disturbance) {
    j["disturbance"] = Json{{"type", "squeeze"},
                            {"t_start", s.disturbance->t_start},
                            {"duration", s.disturbance->duration},
                            {"speed", s.disturbance->speed}};
  } else {
    j["disturbance"] = nullptr;
  }
  return j;
}

SceneFile load_scene_file(const fs::path& path) {
  const Json j = read_json_file(path);
  SceneFile out{scene_from_json(j), std::nullopt};
  if (j.contains("library") && !j.at("library").is_null()) {
    out.library = library_from_json(resolve(j.at("library"), path.parent_path()),
                                    path.parent_path());
  }
  return out;
}

Json metrics_to_json(const Metrics& m) {
  return Json{{"goal_error", m.goal_error},
              {"min_clearance", m.min_clearance ? Json(*m.min_clearance) : Json(nullptr)},
              {"max_grasp_deviation", m.max_grasp_deviation},
              {"stress", m.stress},
              {"collided", m.collided},
              {"success", m.success}};
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorCode::kIo, "write failed: '" + path.string() + "'");
}

Trajectory read_trajectory_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return read_trajectory_csv(in);
}

void write_trajectory_file(const fs::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  write_csv(traj, out);
  if (!out) fail(ErrorCode::kIo, "write failed: '" + path.string() + "'");
}

void write_rollout_log(const RolloutLog& log, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create '" + dir.string() + "': " + ec.message());
  write_trajectory_file(dir / "object.csv", log.object);
  write_trajectory_file(dir / "left.csv", log.left);
  write_trajectory_file(dir / "right.csv", log.right);

  std::ofstream out(dir / "commands.csv", std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write commands.csv");
  csv::write_header(out, {"t", "left_vx", "left_vy", "left_vz", "left_wx", "left_wy",
                          "left_wz", "right_vx", "right_vy", "right_vz", "right_wx",
                          "right_wy", "right_wz"});
  std::vector<double> row(13);
  for (Eigen::Index i = 0; i < log.commands.rows(); ++i) {
    row[0] = log.object.dt() * static_cast<double>(i);
    for (int c = 0; c < 12; ++c) row[static_cast<std::size_t>(c) + 1] = log.commands(i, c);
    csv::write_row(out, row);
  }
  write_json_file(dir / "metrics.json", metrics_to_json(log.metrics));
}

}  // namespace primo
