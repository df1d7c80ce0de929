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

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "revrl/core/io.h"
#include "revrl/core/replay_buffer.h"
#include "revrl/core/rng.h"
#include "revrl/core/stats.h"
#include "revrl/core/trajectory.h"
#include "revrl/core/trajectory_log.h"

using namespace revrl;

namespace {

Trajectory make_traj(std::size_t n, std::int64_t index = 0) {
  Trajectory t;
  for (std::size_t i = 0; i < n; ++i) {
    t.steps.push_back({{static_cast<double>(i)}, 0, 1.0, i + 1 == n});
  }
  t.episode_index = index;
  return t;
}

std::vector<std::uint64_t> draws(Rng r, int n) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(r.next_u64());
  return out;
}

}  // namespace

TEST_CASE("rng fork is deterministic and label/seed sensitive") {
  Rng a(7), b(7), c(8);
  CHECK(draws(a.fork("env"), 16) == draws(b.fork("env"), 16));
  CHECK(draws(a.fork("env"), 16) != draws(a.fork("agent"), 16));
  CHECK(draws(a.fork("env"), 16) != draws(c.fork("env"), 16));
  CHECK(draws(a.fork(std::uint64_t{3}), 4) != draws(a.fork(std::uint64_t{4}), 4));
  CHECK_THROWS_AS(a.fork(""), std::invalid_argument);
}

TEST_CASE("rng fork does not consume the parent stream") {
  Rng a(11), b(11);
  (void)a.fork("x");
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng uniform and bernoulli moments") {
  Rng r(1);
  const int n = 200000;
  double sum = 0, sum2 = 0;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
    hits += r.bernoulli(0.3);
  }
  CHECK(std::abs(sum / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(sum2 / n - 1.0 / 3) < 0.005);
  CHECK(std::abs(hits / double(n) - 0.3) < 4 * std::sqrt(0.21 / n));
}

TEST_CASE("rng uniform_int covers range without bias") {
  Rng r(2);
  std::vector<int> counts(6, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++counts[r.uniform_int(6)];
  const double sigma = std::sqrt(n * (1.0 / 6) * (5.0 / 6));
  for (int c : counts) CHECK(std::abs(c - n / 6.0) < 4 * sigma);
}

TEST_CASE("rng normal and gamma moments") {
  Rng r(3);
  const int n = 100000;
  double s = 0, s2 = 0, g = 0, gs = 0;
  for (int i = 0; i < n; ++i) {
    double z = r.normal();
    s += z;
    s2 += z * z;
    double x = r.gamma(0.5);
    g += x;
    double y = r.gamma(3.0);
    gs += y;
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  CHECK(std::abs(g / n - 0.5) < 0.02);
  CHECK(std::abs(gs / n - 3.0) < 0.05);
}

TEST_CASE("rng categorical follows weights") {
  Rng r(4);
  std::vector<double> w = {1.0, 0.0, 3.0};
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 40000; ++i) ++counts[r.categorical(w)];
  CHECK(counts[1] == 0);
  CHECK(std::abs(counts[2] / 40000.0 - 0.75) < 0.015);
}

TEST_CASE("buffer push into empty buffer") {
  ReplayBuffer b(100);
  b.push(make_traj(20));
  CHECK(b.step_count() == 20);
  CHECK(b.size() == 1);
}

TEST_CASE("buffer evicts oldest whole trajectories") {
  ReplayBuffer b(100);
  b.push(make_traj(50, 0));
  b.push(make_traj(45, 1));
  REQUIRE(b.step_count() == 95);
  b.push(make_traj(20, 2));
  CHECK(b.step_count() <= 100);
  CHECK(b.step_count() == 65);
  CHECK(b[0].episode_index == 1);
  CHECK(b.evicted() == 1);
}

TEST_CASE("buffer rejects empty and oversized trajectories") {
  ReplayBuffer b(10);
  CHECK_THROWS(b.push(Trajectory{}));
  CHECK_THROWS(b.push(make_traj(11)));
}

TEST_CASE("buffer with capacity one million keeps a 300k-step run") {
  ReplayBuffer b(1000000);
  for (int i = 0; i < 1500; ++i) b.push(make_traj(200, i));
  CHECK(b.step_count() == 300000);
  CHECK(b.evicted() == 0);
}

TEST_CASE("property: buffer never exceeds capacity") {
  Rng r(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t cap = 10 + r.uniform_int(200);
    ReplayBuffer b(cap);
    std::uint64_t last_version = b.version();
    for (int k = 0; k < 100; ++k) {
      b.push(make_traj(1 + r.uniform_int(cap), k));
      REQUIRE(b.step_count() <= cap);
      REQUIRE(b.version() > last_version);
      last_version = b.version();
      std::size_t total = 0;
      for (const auto& t : b.trajectories()) total += t.size();
      REQUIRE(total == b.step_count());
      REQUIRE(b.trajectories().back().episode_index == k);
    }
  }
}

TEST_CASE("validate_trajectory") {
  Trajectory t = make_traj(3);
  CHECK_NOTHROW(validate_trajectory(t, 1));
  t.steps[0].done = true;
  CHECK_THROWS(validate_trajectory(t));
  t = make_traj(3);
  t.steps[1].obs = {1.0, 2.0};
  CHECK_THROWS(validate_trajectory(t));
  t = make_traj(3);
  t.steps[2].action = 4;
  CHECK_THROWS(validate_trajectory(t, 2));
  t = make_traj(2);
  t.steps[0].obs[0] = std::nan("");
  CHECK_THROWS(validate_trajectory(t));
  CHECK_THROWS(validate_trajectory(Trajectory{}));
}

TEST_CASE("trajectory observation indexing includes final observation") {
  Trajectory t = make_traj(2);
  CHECK(t.transition_count() == 1);
  t.final_obs = Observation{9.0};
  CHECK(t.observation_count() == 3);
  CHECK(t.transition_count() == 2);
  CHECK(t.observation(2)[0] == 9.0);
}

TEST_CASE("trajectory log is byte-identical for identical input") {
  Trajectory t = make_traj(3);
  t.steps[1].obs[0] = 0.1;
  t.final_obs = Observation{2.5};
  std::ostringstream a, b;
  TrajectoryLogWriter(a, 1).write(t);
  TrajectoryLogWriter(b, 1).write(t);
  CHECK(a.str() == b.str());
  CHECK(a.str() ==
        "episode,t,obs_0,action,reward,done\n"
        "0,0,0,0,1,0\n"
        "0,1,0.1,0,1,0\n"
        "0,2,2,0,1,1\n"
        "0,3,2.5,-1,0,1\n");
}

TEST_CASE("format_real round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125}) {
    CHECK(std::stod(format_real(v)) == v);
  }
}

TEST_CASE("csv table checks row width") {
  CsvTable t({"a", "b"});
  t.row({"1", "2"});
  CHECK_THROWS(t.row({"1"}));
  CHECK(t.str() == "a,b\n1,2\n");
}

TEST_CASE("summarize") {
  std::vector<double> v = {1, 2, 3, 4};
  Summary s = summarize(v);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(s.sem == doctest::Approx(std::sqrt(5.0 / 3.0) / 2));
}
