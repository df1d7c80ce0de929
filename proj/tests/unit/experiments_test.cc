// Copyright 2026 The revrl Authors
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


#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "revrl/core/io.h"
#include "revrl/experiments/config.h"
#include "revrl/experiments/reproduce.h"
#include "revrl/experiments/runner.h"
#include "revrl/experiments/svg.h"

using namespace revrl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json cliff_json(double p, const std::string& wrapper, double beta) {
  json j = {{"name", "cliff-test"},
            {"env", {{"id", "cliff"}, {"p_wind", p}}},
            {"agent", {{"kind", "random"}}},
            {"episodes", 5000},
            {"seeds", {0}}};
  if (wrapper == "rac") {
    j["wrapper"] = {{"kind", "rac"}, {"beta", beta}};
    j["estimator"] = {{"mode", "exact"}};
  }
  return j;
}

EpisodeRow row(long length, double intrinsic, std::int64_t wall) {
  EpisodeRow r;
  r.metrics.length = length;
  r.metrics.intrinsic_return = intrinsic;
  r.wall_steps = wall;
  return r;
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("config defaults and round trip") {
  ExperimentConfig c = parse_config(cliff_json(0.2, "rac", 0.3));
  CHECK(c.env.id == "cliff");
  CHECK(c.wrapper.rac.beta == doctest::Approx(0.3));
  CHECK(c.estimator.window == 200);
  ExperimentConfig back = parse_config(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK_FALSE(back.estimator.phi_final_obs.has_value());

  json j = cliff_json(0.2, "rac", 0.3);
  j["estimator"]["phi_final_obs"] = false;
  ExperimentConfig f = parse_config(j);
  REQUIRE(f.estimator.phi_final_obs.has_value());
  CHECK_FALSE(*f.estimator.phi_final_obs);
  CHECK(to_json(parse_config(to_json(f))) == to_json(f));
}

TEST_CASE("invalid configs are rejected") {
  json j = cliff_json(0.0, "none", 0.0);
  j["env"]["id"] = "pong";
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = cliff_json(0.0, "none", 0.0);
  j["episodes"] = 0;
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = cliff_json(0.0, "none", 0.0);
  j["wrapper"] = {{"kind", "rae"}, {"beta", 0.5}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = cliff_json(0.0, "none", 0.0);
  j["agent"]["learnin_rate"] = 0.1;
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = cliff_json(0.0, "none", 0.0);
  j["seeds"] = json::array();
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), std::exception);
}

TEST_CASE("canned configs load and validate") {
  int n = 0;
  for (const auto& e : fs::directory_iterator(default_config_dir())) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_config(e.path().string()));
    ++n;
  }
  CHECK(n >= 8);
}

TEST_CASE("svg charts") {
  LineChart chart{"curve", "steps", "length", {{"a", {0, 1, 2}, {1, 3, 2}, {0, 2, 1}, {2, 4, 3}}}};
  std::string s = render_line_chart(chart);
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("curve") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);

  Heatmap h{"visits", 2, 2, {0, 1, 2, 3}, {"r0", "r1"}, {"c0", "c1"}, true};
  std::string m = render_heatmap(h);
  CHECK(m.rfind("<svg", 0) == 0);
  CHECK(m.find("visits") != std::string::npos);
}

TEST_CASE("intrinsic reward thirds are per step") {
  std::vector<EpisodeRow> rows = {row(10, -1.0, 10), row(10, -5.0, 20), row(10, -2.0, 30)};
  std::vector<double> t = intrinsic_thirds(rows);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == doctest::Approx(-0.1));
  CHECK(t[1] == doctest::Approx(-0.5));
  CHECK(t[2] == doctest::Approx(-0.2));
}

TEST_CASE("cliff reference cells") {
  RunResult safe = run(parse_config(cliff_json(0.0, "rac", 0.1)));
  CHECK(safe.score.mean == doctest::Approx(250.0).epsilon(0.1));
  CHECK(safe.irreversible_events == 0);

  RunResult windy = run(parse_config(cliff_json(0.4, "none", 0.0)));
  CHECK(windy.score.mean == doctest::Approx(10.5).epsilon(0.05));
}

TEST_CASE("a small run writes its artifacts") {
  fs::path dir = fresh_dir("revrl_experiments_test_run");
  json j = {{"name", "cartpole-rae-small"},
            {"env", {{"id", "cartpole"}, {"reward_free", true}}},
            {"agent", {{"kind", "ppo"}, {"rollout_steps", 256}, {"minibatch", 64}, {"epochs", 2}}},
            {"wrapper", {{"kind", "rae"}, {"beta", 0.7}, {"lambda", 1.0}}},
            {"estimator", {{"mode", "online"}, {"psi_every", 50}}},
            {"env_steps", 1024},
            {"seeds", {0, 1}},
            {"output_dir", dir.string()}};
  RunResult r = run(parse_config(j));
  REQUIRE(r.seeds.size() == 2);
  for (const char* f : {"config.json", "metrics.csv", "learning_curve.svg", "summary.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }
  ExperimentConfig stored = load_config((dir / "config.json").string());
  CHECK(stored.name == "cartpole-rae-small");
  std::vector<EpisodeRow> rows = read_episode_metrics_csv((dir / "metrics.csv").string());
  CHECK(rows.size() == r.seeds[0].episodes.size() + r.seeds[1].episodes.size());

  RunResult again = run(parse_config(j));
  CHECK(again.seeds[0].episodes.size() == r.seeds[0].episodes.size());
  CHECK(again.score.mean == r.score.mean);
  fs::remove_all(dir);
}

TEST_CASE("reproduce rejects unknown targets") {
  CHECK_THROWS_AS(reproduce("sokoban"), std::invalid_argument);
  CHECK(reproduce_targets().size() == 7);
}

TEST_CASE("theory suite passes at small scale") {
  Report r = theory_suite(5, 1e-9, 3);
  CHECK(r.pass());
  CHECK(r.text().find("PASS") != std::string::npos);
}
