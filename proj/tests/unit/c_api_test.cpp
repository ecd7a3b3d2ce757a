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


// Exercises the shared library through its C header only.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "primo/primo.h"

namespace {

namespace fs = std::filesystem;

const fs::path kData = PRIMO_DATA_DIR;

fs::path scratch(const char* name) {
  const fs::path p = fs::path(::testing::TempDir()) / (std::string("primo_capi_") + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

primo_trajectory* clean_demo(primo_profile profile, const double* obstacle, uint64_t seed) {
  const double from[2] = {0.0, 0.0};
  const double to[2] = {0.5, 0.0};
  primo_demo_spec spec;
  primo_demo_spec_init(&spec);
  spec.profile = profile;
  spec.start = from;
  spec.goal = to;
  spec.seed = seed;
  spec.obstacle = obstacle;
  spec.influence_radius = obstacle ? 0.2 : 0.0;
  primo_raw_demo* raw = nullptr;
  EXPECT_EQ(primo_demo_generate(&spec, &raw), PRIMO_OK) << primo_last_error();
  primo_trajectory* t = nullptr;
  EXPECT_EQ(primo_demo_preprocess(raw, R"({"smooth_window": 9})", &t), PRIMO_OK) << primo_last_error();
  primo_demo_free(raw);
  return t;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(primo_version(), "0.1.0");
  EXPECT_STREQ(primo_status_name(PRIMO_OK), "ok");
  EXPECT_STRNE(primo_status_name(PRIMO_ERR_DIVERGENCE), "unknown");
  EXPECT_STREQ(primo_status_name(static_cast<primo_status>(42)), "unknown");
}

TEST(CApi, NullArgumentsAreReported) {
  primo_raw_demo* raw = nullptr;
  EXPECT_EQ(primo_demo_generate(nullptr, &raw), PRIMO_ERR_INVALID_ARGUMENT);
  EXPECT_GT(std::strlen(primo_last_error()), 0u);
  EXPECT_EQ(raw, nullptr);
  primo_demo_free(nullptr);
  primo_trajectory_free(nullptr);
  primo_dmp_free(nullptr);
  primo_scene_free(nullptr);
  primo_log_free(nullptr);
}

TEST(CApi, ErrorsAreThreadLocal) {
  primo_raw_demo* raw = nullptr;
  ASSERT_EQ(primo_demo_read("/nonexistent/demo.csv", &raw), PRIMO_ERR_IO);
  const std::string mine = primo_last_error();
  std::string theirs = "unset";
  std::thread([&] {
    primo_scene* s = nullptr;
    primo_scene_load("/nonexistent/scene.json", &s);
    theirs = primo_last_error();
  }).join();
  EXPECT_EQ(primo_last_error(), mine);
  EXPECT_NE(theirs, mine);
}

TEST(CApi, FitAndRollout) {
  primo_trajectory* demo = clean_demo(PRIMO_PROFILE_MIN_JERK, nullptr, 1);
  primo_dmp* dmp = nullptr;
  ASSERT_EQ(primo_dmp_fit(demo, nullptr, &dmp), PRIMO_OK) << primo_last_error();
  primo_dmp_info info;
  ASSERT_EQ(primo_dmp_info_get(dmp, &info), PRIMO_OK);
  EXPECT_EQ(info.dims, 2);
  EXPECT_EQ(info.n_basis, 50);
  EXPECT_DOUBLE_EQ(info.beta, info.alpha / 4.0);

  primo_rollout_spec spec;
  primo_rollout_spec_init(&spec);
  spec.n_steps = static_cast<int>(primo_trajectory_size(demo));
  primo_trajectory* r = nullptr;
  ASSERT_EQ(primo_dmp_rollout(dmp, &spec, &r), PRIMO_OK) << primo_last_error();
  double rmse = 0.0, range = 0.0;
  ASSERT_EQ(primo_trajectory_rmse(demo, r, &rmse), PRIMO_OK);
  ASSERT_EQ(primo_trajectory_range(demo, &range), PRIMO_OK);
  EXPECT_LT(rmse, 0.02 * range);

  const double goal[2] = {-0.2, 0.3};
  spec.goal = goal;
  spec.n_steps = 10001;
  primo_trajectory* far = nullptr;
  ASSERT_EQ(primo_dmp_rollout(dmp, &spec, &far), PRIMO_OK);
  std::vector<double> xs(primo_trajectory_size(far) * 2);
  ASSERT_EQ(primo_trajectory_positions(far, xs.data()), PRIMO_OK);
  EXPECT_LT(std::hypot(xs[xs.size() - 2] - goal[0], xs.back() - goal[1]), 1e-3);

  char* json = nullptr;
  ASSERT_EQ(primo_dmp_to_json(dmp, &json), PRIMO_OK);
  EXPECT_NE(std::strstr(json, "\"weights\""), nullptr);
  primo_string_free(json);

  primo_trajectory_free(far);
  primo_trajectory_free(r);
  primo_dmp_free(dmp);
  primo_trajectory_free(demo);
}

TEST(CApi, DivergenceCarriesStep) {
  primo_trajectory* demo = clean_demo(PRIMO_PROFILE_MIN_JERK, nullptr, 1);
  primo_dmp* dmp = nullptr;
  ASSERT_EQ(primo_dmp_fit(demo, nullptr, &dmp), PRIMO_OK);
  primo_rollout_spec spec;
  primo_rollout_spec_init(&spec);
  spec.tau = 0.01;
  spec.dt = 1.0;
  spec.n_steps = 2000;
  primo_trajectory* r = nullptr;
  EXPECT_EQ(primo_dmp_rollout(dmp, &spec, &r), PRIMO_ERR_DIVERGENCE);
  EXPECT_EQ(r, nullptr);
  EXPECT_GT(primo_last_error_step(), 0);
  primo_rollout_spec_init(&spec);
  ASSERT_EQ(primo_dmp_rollout(dmp, &spec, &r), PRIMO_OK);
  primo_trajectory_free(r);
  primo_dmp_free(dmp);
  primo_trajectory_free(demo);
}

TEST(CApi, LearnAvoidanceFromCleanPair) {
  const double obstacle[2] = {0.25, 0.01};
  primo_trajectory* obs = clean_demo(PRIMO_PROFILE_DMP_ROLLOUT, obstacle, 1);
  primo_trajectory* base = clean_demo(PRIMO_PROFILE_DMP_ROLLOUT, nullptr, 2);
  primo_oa_options opts;
  primo_oa_options_init(&opts);
  opts.influence_radius = 0.2;
  primo_oa_fit fit;
  ASSERT_EQ(primo_oa_learn(obs, base, obstacle, &opts, &fit), PRIMO_OK) << primo_last_error();
  EXPECT_NEAR(fit.gamma, 1000.0, 20.0);
  EXPECT_NEAR(fit.beta_oa, 20.0 / M_PI, 0.13);
  EXPECT_GT(fit.evaluations, 0);

  opts.method = PRIMO_OA_LOG_LINEAR;
  ASSERT_EQ(primo_oa_learn(obs, base, obstacle, &opts, &fit), PRIMO_OK) << primo_last_error();
  EXPECT_GT(fit.samples_used, 10);
  EXPECT_EQ(fit.evaluations, 0);

  EXPECT_EQ(primo_oa_learn(base, base, obstacle, nullptr, &fit), PRIMO_ERR_INSUFFICIENT_DATA);
  opts.method = static_cast<primo_oa_method>(9);
  EXPECT_EQ(primo_oa_learn(obs, base, obstacle, &opts, &fit), PRIMO_ERR_INVALID_ARGUMENT);

  double rate = 0.0;
  ASSERT_EQ(primo_turning_rate(M_PI / 20, 1000.0, 20.0 / M_PI, &rate), PRIMO_OK);
  EXPECT_NEAR(rate, 1000.0 / (20.0 / M_PI * std::exp(1.0)), 1e-9);
  primo_trajectory_free(obs);
  primo_trajectory_free(base);
}

TEST(CApi, SimulateShippedScenes) {
  primo_scene* scene = nullptr;
  ASSERT_EQ(primo_scene_load((kData / "place_obstacle.json").c_str(), &scene), PRIMO_OK)
      << primo_last_error();
  primo_scene_info info;
  ASSERT_EQ(primo_scene_info_get(scene, &info), PRIMO_OK);
  EXPECT_EQ(info.dims, 2);
  EXPECT_EQ(info.n_obstacles, 1u);

  primo_rollout_log* log = nullptr;
  ASSERT_EQ(primo_simulate(scene, &log), PRIMO_OK) << primo_last_error();
  primo_metrics m;
  ASSERT_EQ(primo_log_metrics(log, &m), PRIMO_OK);
  EXPECT_TRUE(m.success);
  EXPECT_TRUE(m.has_min_clearance);
  EXPECT_GT(m.min_clearance, 0.05);
  EXPECT_EQ(primo_trajectory_dims(primo_log_object(log)), 2);

  const fs::path out = scratch("log");
  ASSERT_EQ(primo_log_write(log, out.c_str()), PRIMO_OK);
  EXPECT_TRUE(fs::exists(out / "metrics.json"));
  primo_log_free(log);

  ASSERT_EQ(primo_scene_set_avoidance(scene, 0), PRIMO_OK);
  ASSERT_EQ(primo_simulate(scene, &log), PRIMO_OK);
  ASSERT_EQ(primo_log_metrics(log, &m), PRIMO_OK);
  EXPECT_FALSE(m.success);
  EXPECT_TRUE(m.collided);
  primo_log_free(log);
  primo_scene_free(scene);
  fs::remove_all(out);
}

TEST(CApi, BatchMatchesSingleRuns) {
  primo_scene* a = nullptr;
  primo_scene* b = nullptr;
  ASSERT_EQ(primo_scene_load((kData / "raise.json").c_str(), &a), PRIMO_OK) << primo_last_error();
  ASSERT_EQ(primo_scene_load((kData / "raise.json").c_str(), &b), PRIMO_OK);
  ASSERT_EQ(primo_scene_disable_relative(b), PRIMO_OK);
  const primo_scene* scenes[2] = {a, b};
  primo_rollout_log* logs[2] = {nullptr, nullptr};
  primo_status st[2];
  ASSERT_EQ(primo_simulate_batch(scenes, 2, nullptr, 2, logs, st), PRIMO_OK);
  primo_metrics ma, mb;
  ASSERT_EQ(primo_log_metrics(logs[0], &ma), PRIMO_OK);
  ASSERT_EQ(primo_log_metrics(logs[1], &mb), PRIMO_OK);
  EXPECT_LT(ma.max_grasp_deviation, 1e-3);
  EXPECT_GT(mb.max_grasp_deviation, 5e-3);

  primo_rollout_log* single = nullptr;
  ASSERT_EQ(primo_simulate(a, &single), PRIMO_OK);
  primo_metrics ms;
  primo_log_metrics(single, &ms);
  EXPECT_EQ(ms.max_grasp_deviation, ma.max_grasp_deviation);
  EXPECT_EQ(ms.goal_error, ma.goal_error);
  primo_log_free(single);
  primo_log_free(logs[0]);
  primo_log_free(logs[1]);
  primo_scene_free(a);
  primo_scene_free(b);
}

TEST(CApi, FileRoundTrips) {
  const fs::path dir = scratch("files");
  primo_trajectory* demo = clean_demo(PRIMO_PROFILE_MIN_JERK, nullptr, 3);
  ASSERT_EQ(primo_trajectory_write(demo, (dir / "t.csv").c_str()), PRIMO_OK);
  primo_trajectory* back = nullptr;
  ASSERT_EQ(primo_trajectory_read((dir / "t.csv").c_str(), &back), PRIMO_OK);
  double rmse = 1.0;
  primo_trajectory_rmse(demo, back, &rmse);
  EXPECT_EQ(rmse, 0.0);

  primo_dmp* dmp = nullptr;
  ASSERT_EQ(primo_dmp_fit(demo, nullptr, &dmp), PRIMO_OK);
  ASSERT_EQ(primo_dmp_write(dmp, (dir / "m.json").c_str()), PRIMO_OK);
  primo_dmp* dmp2 = nullptr;
  ASSERT_EQ(primo_dmp_read((dir / "m.json").c_str(), &dmp2), PRIMO_OK);
  char* j1 = nullptr;
  char* j2 = nullptr;
  primo_dmp_to_json(dmp, &j1);
  primo_dmp_to_json(dmp2, &j2);
  EXPECT_STREQ(j1, j2);
  primo_string_free(j1);
  primo_string_free(j2);

  ASSERT_EQ(primo_oa_write(750.0, 5.5, (dir / "oa.json").c_str()), PRIMO_OK);
  double g = 0.0, b = 0.0;
  ASSERT_EQ(primo_oa_read((dir / "oa.json").c_str(), &g, &b), PRIMO_OK);
  EXPECT_EQ(g, 750.0);
  EXPECT_EQ(b, 5.5);

  std::FILE* f = std::fopen((dir / "bad.json").c_str(), "w");
  std::fputs("{", f);
  std::fclose(f);
  EXPECT_EQ(primo_oa_read((dir / "bad.json").c_str(), &g, &b), PRIMO_ERR_PARSE);

  primo_dmp_free(dmp);
  primo_dmp_free(dmp2);
  primo_trajectory_free(back);
  primo_trajectory_free(demo);
  fs::remove_all(dir);
}

}  // namespace
