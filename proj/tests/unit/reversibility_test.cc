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
#include <memory>
#include <sstream>

#include "doctest.h"
#include "revrl/core/replay_buffer.h"
#include "revrl/envs/tabular_mdp.h"
#include "revrl/nn/gradcheck.h"
#include "revrl/precedence/trainer.h"
#include "revrl/reversibility/model.h"
#include "revrl/reversibility/shaping.h"

using namespace revrl;

namespace {

Observation hot(int i, int n) {
  Observation o(static_cast<std::size_t>(n), 0.0);
  o[static_cast<std::size_t>(i)] = 1.0;
  return o;
}

// Chain of n states; action 0 advances, action 1 stays. Random actions.
ReplayBuffer advance_or_stay_buffer(int n, int episodes, Rng& rng) {
  ReplayBuffer b(1000000);
  for (int e = 0; e < episodes; ++e) {
    Trajectory t;
    int s = 0;
    while (s < n - 1 && t.size() < 200) {
      const int a = static_cast<int>(rng.uniform_int(2));
      t.steps.push_back({hot(s, n), a, 0.0, false});
      if (a == 0) ++s;
    }
    t.steps.back().done = true;
    t.final_obs = hot(s, n);
    b.push(std::move(t));
  }
  return b;
}

int hot_index(const Eigen::VectorXd& v) {
  Eigen::Index i;
  v.maxCoeff(&i);
  return static_cast<int>(i);
}

// Exact precedence for the advance-or-stay chain: later states never come first.
Eigen::VectorXd chain_psi(const Eigen::MatrixXd& first, const Eigen::MatrixXd& second) {
  Eigen::VectorXd out(first.cols());
  for (Eigen::Index j = 0; j < first.cols(); ++j) {
    const int a = hot_index(first.col(j)), b = hot_index(second.col(j));
    out[j] = a == b ? 0.5 : (a < b ? 1.0 : 0.0);
  }
  return out;
}

}  // namespace

TEST_CASE("rae reward") {
  CHECK(rae_reward(0.9, {0.8, 0.1}) == doctest::Approx(-0.09).epsilon(1e-12));
  CHECK(rae_reward(0.5, {0.8, 0.1}) == 0.0);
  CHECK(rae_reward(1.0, {1e-12, 1.0}) == doctest::Approx(-1.0));
  CHECK(rae_reward(0.8, {0.8, 0.1}) == 0.0);
  CHECK_THROWS_AS(rae_reward(1.5, {0.8, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(RaeConfig{1.0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(RaeConfig{0.5, -1.0}), std::invalid_argument);

  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const RaeConfig cfg{rng.uniform(0.01, 0.99), rng.uniform(0.0, 2.0)};
    const double a = rng.uniform(), b = rng.uniform();
    const double ra = rae_reward(a, cfg), rb = rae_reward(b, cfg);
    CHECK(ra <= 0.0);
    if (a <= cfg.beta) CHECK(ra == 0.0);
    if (a > cfg.beta && b > cfg.beta && a <= b) CHECK(std::abs(ra) <= std::abs(rb));
  }
}

TEST_CASE("rac filter examples") {
  RacResult r = rac_filter({0.5, 0.5}, {0.9, 0.1}, {0.2});
  CHECK(r.probs[0] == 1.0);
  CHECK(r.probs[1] == 0.0);
  CHECK_FALSE(r.fallback);

  r = rac_filter({0.3, 0.7}, {0.5, 0.6}, {0.2});
  CHECK(r.probs[0] == doctest::Approx(0.3));
  CHECK(r.probs[1] == doctest::Approx(0.7));

  r = rac_filter({0.5, 0.5}, {0.1, 0.15}, {0.2});
  CHECK(r.fallback);
  CHECK(r.probs[0] == 0.0);
  CHECK(r.probs[1] == 1.0);

  // Surviving actions with zero policy mass also trigger the fallback.
  r = rac_filter({1.0, 0.0}, {0.1, 0.9}, {0.2});
  CHECK(r.fallback);
  CHECK(r.probs[1] == 1.0);

  CHECK_THROWS_AS(rac_filter({0.5, 0.4}, {0.1, 0.1}, {0.2}), std::invalid_argument);
  CHECK_THROWS_AS(rac_filter({1.0}, {0.1, 0.1}, {0.2}), std::invalid_argument);
  CHECK_THROWS_AS(validate(RacConfig{1.0}), std::invalid_argument);
}

TEST_CASE("rac filter properties") {
  Rng rng(11);
  for (int it = 0; it < 2000; ++it) {
    const int n = 2 + static_cast<int>(rng.uniform_int(4));
    std::vector<double> p(n), phi(n);
    double sum = 0.0;
    for (double& v : p) sum += v = rng.gamma(1.0);
    for (double& v : p) v /= sum;
    for (double& v : phi) v = rng.uniform();
    const RacConfig cfg{rng.uniform(0.0, 0.99)};
    const RacResult r = rac_filter(p, phi, cfg);
    double out = 0.0;
    bool any = false;
    for (int a = 0; a < n; ++a) {
      out += r.probs[a];
      any |= phi[a] >= cfg.beta;
      if (!r.fallback && phi[a] < cfg.beta) CHECK(r.probs[a] == 0.0);
    }
    CHECK(out == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.fallback == !any);

    const RacResult id = rac_filter(p, phi, {0.0});
    for (int a = 0; a < n; ++a) CHECK(id.probs[a] == doctest::Approx(p[a]).epsilon(1e-12));
  }
}

TEST_CASE("phi model shapes") {
  Rng rng(1);
  ReversibilityModel m(5, 3, rng, {16}, true);
  const auto phi = m.phi({1, 2, 3, 4, 5});
  REQUIRE(phi.size() == 3);
  for (double v : phi) CHECK(v == 0.5);
  CHECK_THROWS_AS(m.phi({1, 2}), std::invalid_argument);

  ReversibilityModel r(5, 3, rng);
  for (int i = 0; i < 50; ++i) {
    Observation x(5);
    for (double& v : x) v = 10.0 * rng.normal();
    for (double v : r.phi(x)) CHECK((v > 0.0 && v < 1.0));
  }

  std::stringstream ss;
  save_reversibility_model(ss, r);
  const ReversibilityModel back = load_reversibility_model(ss);
  CHECK(back.params() == r.params());
}

TEST_CASE("mse gradient matches finite differences") {
  Rng rng(7);
  ReversibilityModel m(6, 4, rng, {12, 8});
  const Eigen::MatrixXd X = Eigen::MatrixXd::Random(6, 5);
  const std::vector<int> acts{0, 3, 1, 1, 2};
  const Eigen::VectorXd tgt = Eigen::VectorXd::Random(5).cwiseAbs();
  const Eigen::VectorXd theta = m.params();
  const Eigen::VectorXd g = m.mse(X, acts, tgt).grad;
  auto loss = [&](const Eigen::VectorXd& p) {
    ReversibilityModel c = m;
    c.mutable_params() = p;
    return c.mse(X, acts, tgt).loss;
  };
  std::vector<Eigen::Index> coords(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) coords[i] = i;
  CHECK(finite_difference_error(loss, theta, g, coords, 1e-5, nullptr) < 1e-4);
}

TEST_CASE("constant target") {
  Rng rng(2);
  ReplayBuffer buf = advance_or_stay_buffer(6, 50, rng);
  ReversibilityModel m(6, 2, rng);
  AdamState opt(m.params().size(), AdamConfig{0.01});
  const PsiFunction half = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd&) {
    return Eigen::VectorXd::Constant(a.cols(), 0.5);
  };
  train_reversibility(m, buf, half, 64, 500, opt, rng);
  double err = 0.0;
  for (int s = 0; s < 5; ++s) {  // the last state never starts a transition
    for (double v : m.phi(hot(s, 6))) err += (v - 0.5) * (v - 0.5);
  }
  CHECK(err / 10.0 < 1e-3);
}

TEST_CASE("advance versus self-loop") {
  Rng rng(4);
  ReplayBuffer buf = advance_or_stay_buffer(6, 200, rng);
  ReversibilityModel m(6, 2, rng);
  AdamState opt(m.params().size(), AdamConfig{0.01});
  const auto trace = train_reversibility(m, buf, chain_psi, 64, 1500, opt, rng);
  CHECK(trace.back().loss < 0.01);
  for (int s = 0; s < 5; ++s) {
    const auto phi = m.phi(hot(s, 6));
    CHECK(phi[0] < 0.1);
    CHECK(phi[1] > 0.4);
    CHECK(phi[1] < 0.6);
  }

  // Same data, learned precedence instead of the exact one.
  PrecedenceModel psi(6, rng, {32, 32});
  PrecedenceTrainer trainer(psi, 10, 128, AdamConfig{0.01}, true);
  trainer.train(buf, 1500, rng);
  ReversibilityModel learned(6, 2, rng);
  AdamState opt2(learned.params().size(), AdamConfig{0.01});
  train_reversibility(learned, buf, psi_of(psi), 64, 1500, opt2, rng);
  for (int s = 0; s < 5; ++s) {
    const auto phi = learned.phi(hot(s, 6));
    CHECK(phi[0] < 0.1);
    CHECK(phi[1] > 0.3);
  }
}

TEST_CASE("zero steps leave the model unchanged") {
  Rng rng(5);
  ReplayBuffer buf = advance_or_stay_buffer(4, 5, rng);
  ReversibilityModel m(4, 2, rng);
  const Eigen::VectorXd before = m.params();
  AdamState opt(m.params().size(), AdamConfig{});
  CHECK(train_reversibility(m, buf, chain_psi, 8, 0, opt, rng).empty());
  CHECK(m.params() == before);
}

TEST_CASE("transition sampler") {
  Rng rng(6);
  ReplayBuffer buf(100);
  Trajectory t;
  for (int i = 0; i < 3; ++i) t.steps.push_back({{double(i)}, i, 0.0, i == 2});
  t.final_obs = Observation{3.0};
  buf.push(t);
  std::vector<int> seen(4, 0);
  TransitionSampler with(true), without(false);
  const TransitionBatch b = with.sample(buf, 3000, rng);
  for (int j = 0; j < 3000; ++j) {
    CHECK(b.next(0, j) == b.x(0, j) + 1.0);
    CHECK(b.actions[j] == static_cast<int>(b.x(0, j)));
    ++seen[static_cast<int>(b.next(0, j))];
  }
  CHECK(seen[3] > 800);
  const TransitionBatch c = without.sample(buf, 500, rng);
  CHECK(c.next.maxCoeff() == 2.0);
}

TEST_CASE("rae wrapper") {
  Rng rng(8);
  // Identity embedder; logit = 10 (index(x') - index(x)) on one-hot inputs.
  DenseNet head({{8, 1, Activation::kIdentity}});
  head.mutable_params() << 0, -10, -20, -30, 0, 10, 20, 30, 0;
  auto psi = std::make_shared<PrecedenceModel>(DenseNet(4), head);

  auto env = wrap_env_rae(std::make_unique<TabularEnv>(one_way_chain(4), 100), psi,
                          RaeConfig{0.8, 0.1});
  CHECK_THROWS_AS(env->step(0, rng), std::logic_error);
  CHECK_THROWS_AS(wrap_env_rae(std::make_unique<TabularEnv>(three_cycle(), 10), psi, {}),
                  std::invalid_argument);

  auto chain = wrap_env_rae(std::make_unique<TabularEnv>(one_way_chain(4), 100), psi,
                            RaeConfig{0.8, 0.1});
  chain->reset(rng);
  const EnvStep s = chain->step(0, rng);
  const double expect = 1.0 / (1.0 + std::exp(-10.0));
  CHECK(s.intrinsic == doctest::Approx(-0.1 * expect).epsilon(1e-12));
  CHECK(s.reward == doctest::Approx(s.intrinsic));

  // Below the threshold the reward passes through untouched.
  head.mutable_params().setZero();
  auto flat = std::make_shared<PrecedenceModel>(DenseNet(4), head);
  auto quiet = wrap_env_rae(std::make_unique<TabularEnv>(one_way_chain(4), 100), flat,
                            RaeConfig{0.7, 1.0});
  quiet->reset(rng);
  for (int i = 0; i < 3; ++i) {
    const EnvStep q = quiet->step(0, rng);
    CHECK(q.reward == 0.0);
    CHECK(q.intrinsic == 0.0);
  }
  CHECK(quiet->name() == "tabular+rae");
}
