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
#include <map>
#include <sstream>

#include "doctest.h"
#include "revrl/core/replay_buffer.h"
#include "revrl/envs/tabular_mdp.h"
#include "revrl/nn/gradcheck.h"
#include "revrl/precedence/model.h"
#include "revrl/precedence/pairs.h"
#include "revrl/precedence/trainer.h"

using namespace revrl;

namespace {

Trajectory scalar_traj(int n, double base = 0.0) {
  Trajectory t;
  for (int i = 0; i < n; ++i) t.steps.push_back({{base + i}, 0, 0.0, i + 1 == n});
  return t;
}

Trajectory rollout(TabularEnv& env, Rng& rng) {
  Trajectory t;
  Observation obs = env.reset(rng);
  for (;;) {
    EnvStep st = env.step(0, rng);
    t.steps.push_back({obs, 0, st.reward, st.done});
    obs = st.obs;
    if (st.done) break;
  }
  t.final_obs = obs;
  return t;
}

ReplayBuffer chain_buffer(int n, int episodes) {
  TabularEnv env(one_way_chain(n), 1000);
  Rng rng(0);
  ReplayBuffer b(100000);
  for (int i = 0; i < episodes; ++i) b.push(rollout(env, rng));
  return b;
}

}  // namespace

TEST_CASE("admissible pair counts") {
  CHECK(admissible_pair_count(1, 5) == 0);
  CHECK(admissible_pair_count(2, 1) == 1);
  CHECK(admissible_pair_count(5, 2) == 7);
  CHECK(admissible_pair_count(5, 100) == 10);
}

TEST_CASE("length-2 trajectory gives one pair in either order") {
  Trajectory t = scalar_traj(2);
  Rng rng(1);
  int ones = 0;
  for (int i = 0; i < 2000; ++i) {
    PrecedencePair p = sample_pair(t, 3, rng, false);
    if (p.label == 1) {
      CHECK((*p.first)[0] == 0.0);
      CHECK((*p.second)[0] == 1.0);
      ++ones;
    } else {
      CHECK((*p.first)[0] == 1.0);
      CHECK((*p.second)[0] == 0.0);
    }
    CHECK(p.gap == 1);
  }
  // 2000 fair coin flips: sigma = sqrt(500).
  CHECK(std::abs(ones - 1000) < 4 * std::sqrt(500.0));
  CHECK_THROWS(sample_pair(scalar_traj(1), 2, rng, false));
}

TEST_CASE("window one always gives consecutive observations") {
  Trajectory t = scalar_traj(30);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    PrecedencePair p = sample_pair(t, 1, rng, false);
    CHECK(p.gap == 1);
    CHECK(std::abs((*p.first)[0] - (*p.second)[0]) == 1.0);
  }
}

TEST_CASE("label mean over 100k samples") {
  Trajectory t = scalar_traj(50);
  Rng rng(3);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += sample_pair(t, 10, rng).label;
  CHECK(std::abs(sum / n - 0.5) < 3 * 0.5 / std::sqrt(double(n)));
}

TEST_CASE("pairs are uniform over admissible index pairs") {
  Trajectory t = scalar_traj(5);
  Rng rng(4);
  std::map<std::pair<int, int>, int> counts;
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    PrecedencePair p = sample_pair(t, 2, rng, false);
    counts[{static_cast<int>(p.t), p.gap}]++;
  }
  CHECK(counts.size() == 7);
  const double sigma = std::sqrt(n * (1.0 / 7) * (6.0 / 7));
  for (auto& [k, c] : counts) CHECK(std::abs(c - n / 7.0) < 4 * sigma);
}

TEST_CASE("final observation joins the sequence when requested") {
  Trajectory t = scalar_traj(1);
  t.final_obs = Observation{7.0};
  Rng rng(5);
  PrecedencePair p = sample_pair(t, 1, rng, true);
  CHECK(p.gap == 1);
  CHECK_THROWS(sample_pair(t, 1, rng, false));
}

TEST_CASE("property: buffer pairs stay within one episode and window") {
  ReplayBuffer b(10000);
  Rng rng(6);
  for (int e = 0; e < 40; ++e) b.push(scalar_traj(2 + static_cast<int>(rng.uniform_int(30)), 1000.0 * e));
  PairSampler sampler(7, false);
  for (int round = 0; round < 20; ++round) {
    PairBatch batch = sampler.sample(b, 128, rng);
    for (int j = 0; j < 128; ++j) {
      const double a = batch.first(0, j), c = batch.second(0, j);
      REQUIRE(std::floor(a / 1000) == std::floor(c / 1000));
      const double gap = std::abs(a - c);
      REQUIRE(gap >= 1);
      REQUIRE(gap <= 7);
      REQUIRE((batch.labels[j] == 1) == (a < c));
    }
    if (round == 10) b.push(scalar_traj(20, 1000.0 * 99));
  }
}

TEST_CASE("pair sampling is reproducible from the stream") {
  ReplayBuffer b(1000);
  for (int e = 0; e < 5; ++e) b.push(scalar_traj(20, 100.0 * e));
  PairSampler s1(5), s2(5);
  Rng r1(9), r2(9);
  PairBatch a = s1.sample(b, 64, r1), c = s2.sample(b, 64, r2);
  CHECK(a.first == c.first);
  CHECK(a.second == c.second);
  CHECK(a.labels == c.labels);
}

TEST_CASE("zero head gives one half") {
  Rng rng(1);
  PrecedenceModel m(4, rng, {64, 64}, true);
  CHECK(m.psi({1, 2, 3, 4}, {-1, 0, 5, 2}) == 0.5);
  CHECK_THROWS_AS(m.psi({1, 2, 3}, {1, 2, 3, 4}), std::invalid_argument);
}

TEST_CASE("bce gradient matches finite differences") {
  Rng rng(2);
  PrecedenceModel m(5, rng, {8, 6});
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(5, 4), X2 = Eigen::MatrixXd::Random(5, 4);
  Eigen::VectorXd y(4);
  y << 1, 0, 0, 1;
  BceResult r = m.bce(X, X2, y);
  PrecedenceModel probe = m;
  auto loss = [&](const Eigen::VectorXd& p) {
    probe.set_params(p);
    return probe.bce(X, X2, y).loss;
  };
  std::vector<Eigen::Index> coords = sample_coords(m.parameter_count(), 200, rng);
  long skipped = 0;
  CHECK(finite_difference_error(loss, m.params(), r.grad, coords, 1e-5, &skipped) < 1e-4);
  CHECK(skipped < 10);
}

TEST_CASE("precedence checkpoint round trip") {
  Rng rng(3);
  PrecedenceModel m(3, rng, {5, 4});
  std::stringstream buf;
  save_precedence_model(buf, m);
  PrecedenceModel back = load_precedence_model(buf);
  CHECK(back.params() == m.params());
  CHECK(back.psi({1, 2, 3}, {3, 2, 1}) == m.psi({1, 2, 3}, {3, 2, 1}));
}

TEST_CASE("zero training steps leave the model unchanged") {
  Rng rng(4);
  PrecedenceModel m(10, rng);
  Eigen::VectorXd before = m.params();
  AdamState opt(m.parameter_count(), AdamConfig{0.01});
  ReplayBuffer b = chain_buffer(10, 3);
  CHECK(train_precedence(m, b, 10, 32, 0, opt, rng).empty());
  CHECK(m.params() == before);
}

TEST_CASE("one-way chain is learned") {
  Rng rng(5);
  PrecedenceModel m(10, rng);
  AdamState opt(m.parameter_count(), AdamConfig{0.01});
  ReplayBuffer b = chain_buffer(10, 20);
  std::vector<LossRecord> trace = train_precedence(m, b, 10, 128, 2000, opt, rng);
  REQUIRE(trace.size() == 2000);
  double tail = 0;
  for (std::size_t i = trace.size() - 50; i < trace.size(); ++i) tail += trace[i].loss;
  CHECK(tail / 50 < 0.1);
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10; ++j) {
      CHECK(m.psi(one_hot(i, 10), one_hot(j, 10)) > 0.95);
      CHECK(m.psi(one_hot(j, 10), one_hot(i, 10)) < 0.05);
    }
  }
}

TEST_CASE("flip-flop chain stays near one half") {
  TabularMdp flip(2, 1);
  flip.p(0, 0, 1) = 1.0;
  flip.p(1, 0, 0) = 1.0;
  flip.initial() = {0.5, 0.5};
  TabularEnv env(flip, 20);
  Rng rng(6);
  ReplayBuffer b(100000);
  for (int i = 0; i < 200; ++i) b.push(rollout(env, rng));
  PrecedenceModel m(2, rng);
  AdamState opt(m.parameter_count(), AdamConfig{0.01});
  train_precedence(m, b, 5, 128, 500, opt, rng);
  const double v = m.psi(one_hot(0, 2), one_hot(1, 2));
  CHECK(v >= 0.4);
  CHECK(v <= 0.6);
}

TEST_CASE("random labels converge to ln 2") {
  Rng rng(7);
  PrecedenceModel m(6, rng, {16, 16});
  AdamState opt(m.parameter_count(), AdamConfig{0.001});
  double tail = 0;
  const int steps = 3000;
  for (int i = 0; i < steps; ++i) {
    PairBatch batch;
    batch.first.resize(6, 128);
    batch.second.resize(6, 128);
    batch.labels.resize(128);
    for (int j = 0; j < 128; ++j) {
      for (int k = 0; k < 6; ++k) {
        batch.first(k, j) = rng.uniform(-1, 1);
        batch.second(k, j) = rng.uniform(-1, 1);
      }
      batch.labels[j] = rng.bernoulli(0.5);
    }
    LossRecord r = precedence_update(m, opt, batch);
    if (i >= steps - 200) tail += r.loss;
  }
  CHECK(std::abs(tail / 200 - std::log(2.0)) < 0.05);
}

TEST_CASE("trainer records a loss trace") {
  Rng rng(8);
  PrecedenceModel m(10, rng);
  PrecedenceTrainer tr(m, 10, 16, AdamConfig{0.01});
  ReplayBuffer b = chain_buffer(10, 2);
  tr.train(b, 5, rng);
  REQUIRE(tr.trace().size() == 5);
  CHECK(tr.trace().back().update == 5);
}
