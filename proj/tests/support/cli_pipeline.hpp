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


// Runs the primo binary end to end in a scratch directory.

#ifndef PRIMO_TESTS_CLI_PIPELINE_HPP_
#define PRIMO_TESTS_CLI_PIPELINE_HPP_

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>

namespace primo::testing {

namespace fs = std::filesystem;

inline int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(PRIMO_CLI) + " " + args + " >>'" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Relative path -> contents of every .csv/.json file below dir.
inline std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension();
    if (ext != ".csv" && ext != ".json") continue;
    out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

// gen-demo (noisy pair) -> preprocess -> learn dmp -> learn oa -> simulate
// -> batch, all in dir. Returns the first nonzero exit code, 0 on success.
inline int run_pipeline(const fs::path& dir, unsigned seed) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path log = dir / "cli.log";
  const std::string d = "'" + dir.string() + "/";
  const std::string data = std::string(PRIMO_DATA_DIR) + "/";
  const std::string s = std::to_string(seed);
  const std::string steps[] = {
      "gen-demo --profile dmp-rollout --from 0,0 --to 0.5,0 --noise 0.001 --jitter 0.1 --seed " + s +
          " --obstacle 0.25,0.01 --influence-radius 0.2 -o " + d + "obs_raw.csv'",
      "gen-demo --profile dmp-rollout --from 0,0 --to 0.5,0 --noise 0.001 --seed " + std::to_string(seed + 1) +
          " -o " + d + "base_raw.csv'",
      "preprocess -i " + d + "obs_raw.csv' -o " + d + "obs.csv' --smooth-window 101",
      "preprocess -i " + d + "base_raw.csv' -o " + d + "base.csv' --smooth-window 101",
      "learn dmp -d " + d + "base.csv' -o " + d + "dmp.json' --rollout-out " + d + "reproduction.csv'",
      "learn oa -d " + d + "obs.csv' -b " + d + "base.csv' --obstacle 0.25,0.01 --influence-radius 0.2 -o " +
          d + "avoidance.json' --series-out " + d + "series.csv'",
      "simulate -s " + data + "place_obstacle.json -o " + d + "rollout'",
      "batch -s " + data + "place_obstacle.json -s " + data + "raise_obstacle.json -n 3 --seed " + s +
          " -j 2 -o " + d + "batch'",
  };
  for (const auto& step : steps) {
    const int rc = run_cli(step, log);
    if (rc != 0) return rc;
  }
  return 0;
}

}  // namespace primo::testing

#endif  // PRIMO_TESTS_CLI_PIPELINE_HPP_
