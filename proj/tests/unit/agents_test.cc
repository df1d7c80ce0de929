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
#include <filesystem>
#include <memory>

#include "doctest.h"
#include "revrl/agents/episode.h"
#include "revrl/agents/policy.h"
#include "revrl/agents/policy_value_net.h"
#include "revrl/agents/ppo.h"
#include "revrl/core/stats.h"
#include "revrl/envs/cartpole.h"
#include "revrl/envs/cliff.h"
#include "revrl/envs/turf.h"
#include "revrl/nn/gradcheck.h"

using namespace revrl;

namespace {

// One state, one step; action 0 pays 1.
class Bandit final : public Environment {
 public:
  Observation reset(Rng&) override { return {1.0}; }
  EnvStep step(int action, Rng&) override {
    EnvStep s;
    s.obs = {1.0};
    s.reward = action == 0 ? 1.0 : 0.0;
    s.done = true;
    return s;
  }
  int action_count() const override { return 2; }
  int observation_size() const override { return 1; }
  std::string name() const override { return "bandit"; }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<Bandit>(); }
};

PolicyValueNet uniform_net(int obs, int actions, Rng& rng) {
  PolicyValueNet net(obs, actions, rng, {8});
  Eigen::VectorXd p = net.params();
  const Eigen::Index nt = net.trunk().parameter_count();
  p.segment(nt, net.policy_head().parameter_count()).setZero();
  net.set_params(p);
  return net;
}

double action0_prob(const PolicyValueNet& net) { return net.probs({1.0})[0]; }

}  // namespace

TEST_CASE("masked softmax and entropy") {
  const Eigen::VectorXd z = Eigen::Vector3d(1.0, 2.0, 3.0);
  const Eigen::VectorXd p = masked_softmax(z, {});
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[2] / p[1] == doctest::Approx(std::exp(1.0)));
  const Eigen::VectorXd q = masked_softmax(z, {1, 0, 1});
  CHECK(q[1] == 0.0);
  CHECK(q[0] + q[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(masked_softmax(z, {0, 0, 0}), std::invalid_argument);
  CHECK(masked_softmax(Eigen::Vector2d(1000.0, -1000.0), {}).allFinite());
  CHECK(entropy(Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(std::log(2.0)));
  CHECK(entropy(Eigen::Vector2d(1.0, 0.0)) == 0.0);
}

TEST_CASE("policy value net shapes and checkpoint") {
  Rng rng(1);
  PolicyValueNet net(4, 2, rng);
  CHECK(net.action_count() == 2);
  CHECK(net.trunk().parameter_count() == 0);
  const auto p = net.probs({0.1, 0.2, 0.3, 0.4});
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(net.probs({1.0}), std::invalid_argument);

  PolicyValueNet shared(6, 3, rng, {16}, {32});
  std::stringstream ss;
  save_policy_value_net(ss, shared);
  const PolicyValueNet back = load_policy_value_net(ss);
  CHECK(back.params() == shared.params());
  CHECK(back.value({1, 2, 3, 4, 5, 6}) == shared.value({1, 2, 3, 4, 5, 6}));
}

TEST_CASE("ppo loss gradient matches finite differences") {
  Rng rng(2);
  for (bool shared_trunk : {false, true}) {
    PolicyValueNet net(5, 3, rng, {7}, shared_trunk ? std::vector<int>{6} : std::vector<int>{});
    PpoBatch b;
    const int n = 12;
    b.obs = Eigen::MatrixXd::Random(5, n);
    b.logp_old.resize(n);
    b.advantages = Eigen::VectorXd::Random(n);
    b.returns = Eigen::VectorXd::Random(n);
    for (int j = 0; j < n; ++j) {
      b.actions.push_back(j % 3);
      b.masks.push_back(j % 4 == 0 ? std::vector<unsigned char>{1, 1, 1}
                                   : std::vector<unsigned char>{});
      if (j % 4 == 0) b.masks.back()[(j / 4 + 1) % 3] = 0;
      if (b.masks.back().size() == 3 && !b.masks.back()[j % 3]) b.actions.back() = (j + 2) % 3;
      b.logp_old[j] = std::log(0.3 + 0.05 * (j % 3));
    }
    std::vector<Eigen::Index> idx(n);
    for (int j = 0; j < n; ++j) idx[j] = j;
    PpoConfig cfg;
    cfg.entropy_coef = 0.3;
    const PpoLoss l = ppo_loss(net, b, idx, cfg);
    auto f = [&](const Eigen::VectorXd& th) {
      PolicyValueNet c = net;
      c.set_params(th);
      return ppo_loss(c, b, idx, cfg).loss;
    };
    const Eigen::VectorXd theta = net.params();
    std::vector<Eigen::Index> coords(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) coords[i] = i;
    CHECK(finite_difference_error(f, theta, l.grad, coords, 1e-5, nullptr) < 1e-4);
  }
}

TEST_CASE("policy sample") {
  Rng rng(3);
  const PolicyValueNet net = uniform_net(1, 2, rng);
  int zeros = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) zeros += policy_sample(net, {1.0}, rng).action == 0;
  CHECK(std::abs(zeros / double(n) - 0.5) < 3.0 * std::sqrt(0.25 / n));

  const RacFilter rac{{0.2}, [](const Observation&) { return std::vector<double>{0.9, 0.1}; }};
  for (int i = 0; i < 1000; ++i) {
    const ActionChoice c = policy_sample(net, {1.0}, rng, &rac);
    CHECK(c.action == 0);
    CHECK(c.probs[0] == 1.0);
    CHECK(c.mask == std::vector<unsigned char>{1, 0});
  }

  PolicyValueNet skew(3, 4, rng, {8});
  const RacFilter open{{0.0}, [](const Observation&) { return std::vector<double>{0.0, 0.3, 0.9, 0.1}; }};
  const Observation x{0.3, -1.0, 2.0};
  const ActionChoice a = policy_sample(skew, x, rng, &open);
  const auto plain = skew.probs(x);
  for (int k = 0; k < 4; ++k) CHECK(a.probs[k] == doctest::Approx(plain[k]).epsilon(1e-12));

  const RacFilter closed{{0.5}, [](const Observation&) { return std::vector<double>{0.1, 0.3}; }};
  const ActionChoice fb = policy_sample(net, {1.0}, rng, &closed);
  CHECK(fb.fallback);
  CHECK(fb.action == 1);
  CHECK(fb.mask == std::vector<unsigned char>{0, 1});
}

TEST_CASE("ppo learns a bandit") {
  Rng rng(4);
  Bandit env;
  PolicyValueNet net(1, 2, rng, {16});
  PpoConfig cfg;
  cfg.rollout_steps = 32;
  cfg.minibatch = 32;
  cfg.learning_rate = 0.01;
  AdamState opt(net.parameter_count(), AdamConfig{cfg.learning_rate});
  CHECK(action0_prob(net) < 0.6);
  for (int u = 0; u < 200; ++u) {
    const auto eps = collect_rollout(env, net, cfg.rollout_steps, rng);
    const PpoDiagnostics d = ppo_update(net, build_ppo_batch(net, eps, cfg), cfg, opt, rng);
    CHECK(d.entropy_before > 0.0);
  }
  CHECK(action0_prob(net) > 0.9);
  CHECK(net.value({1.0}) == doctest::Approx(action0_prob(net)).epsilon(0.1));
}

TEST_CASE("dominant entropy term raises entropy") {
  Rng rng(5);
  Bandit env;
  PolicyValueNet net(1, 2, rng, {16});
  // Start from a confident policy.
  Eigen::VectorXd p = net.params();
  p.tail(0).setZero();
  const Eigen::Index pb = net.policy_head().bias_offset(net.policy_head().layer_count() - 1);
  p[pb] = 2.0;
  net.set_params(p);
  PpoConfig cfg;
  cfg.entropy_coef = 10.0;
  cfg.rollout_steps = 64;
  cfg.learning_rate = 0.01;
  AdamState opt(net.parameter_count(), AdamConfig{});
  const auto eps = collect_rollout(env, net, cfg.rollout_steps, rng);
  const PpoDiagnostics d = ppo_update(net, build_ppo_batch(net, eps, cfg), cfg, opt, rng);
  CHECK(d.entropy_after >= d.entropy_before);
}

TEST_CASE("zero advantages leave the policy to the entropy term") {
  Rng rng(6);
  PolicyValueNet net(3, 3, rng, {8});
  PpoBatch b;
  b.obs = Eigen::MatrixXd::Random(3, 20);
  b.advantages = Eigen::VectorXd::Zero(20);
  b.returns = Eigen::VectorXd::Random(20);
  b.logp_old = Eigen::VectorXd::Constant(20, std::log(1.0 / 3.0));
  for (int j = 0; j < 20; ++j) {
    b.actions.push_back(j % 3);
    b.masks.emplace_back();
  }
  PpoConfig cfg;
  cfg.normalize_advantages = false;
  cfg.entropy_coef = 0.0;
  cfg.minibatch = 5;
  AdamState opt(net.parameter_count(), AdamConfig{});
  const Eigen::MatrixXd before = net.logits(b.obs);
  const Eigen::VectorXd vbefore = net.values(b.obs);
  ppo_update(net, b, cfg, opt, rng);
  CHECK((net.logits(b.obs) - before).cwiseAbs().maxCoeff() == 0.0);
  CHECK((net.values(b.obs) - vbefore).cwiseAbs().maxCoeff() > 0.0);

  cfg.entropy_coef = 0.5;
  AdamState opt2(net.parameter_count(), AdamConfig{});
  const PpoDiagnostics d = ppo_update(net, b, cfg, opt2, rng);
  CHECK((net.logits(b.obs) - before).cwiseAbs().maxCoeff() > 0.0);
  CHECK(d.entropy_after > d.entropy_before);
}

TEST_CASE("ppo config validation") {
  PpoConfig cfg;
  cfg.clip_epsilon = 0.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = {};
  cfg.entropy_coef = -1.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("random cartpole episodes") {
  Rng rng(7);
  Cartpole env;
  UniformPolicy pi(2);
  std::vector<double> len;
  for (int i = 0; i < 1000; ++i) len.push_back(double(run_episode(env, pi, rng).metrics.length));
  const Summary s = summarize(len);
  MESSAGE("random cartpole mean length " << s.mean);
  CHECK(s.mean > 17.0);
  CHECK(s.mean < 25.0);
}

TEST_CASE("random cliff and stay-safe cliff") {
  Rng rng(8);
  CliffWalk env;
  UniformPolicy pi(4);
  std::vector<double> score;
  for (int i = 0; i < 5000; ++i) score.push_back(run_episode(env, pi, rng).metrics.extrinsic_return);
  const double m = mean(score);
  MESSAGE("random cliff mean score " << m);
  CHECK(std::abs(m - 57.5) <= 0.05 * 57.5);

  Eigen::MatrixXd up = Eigen::MatrixXd::Zero(48, 4);
  up.col(static_cast<int>(GridAction::kUp)).setOnes();
  const EpisodeResult r = run_episode(env, TabularPolicy(up), rng);
  CHECK(r.metrics.extrinsic_return == 250.0);
  CHECK(r.metrics.irreversible_events == 0);
  CHECK(r.traj.final_obs.has_value());
}

TEST_CASE("rac with ground-truth phi avoids every irreversible event") {
  Rng rng(9);
  Turf env;
  const PhiFunction truth = [&env](const Observation&) {
    std::vector<double> phi(4);
    for (int a = 0; a < 4; ++a) {
      const Cell c = grid_move(env.grid().agent, GridAction(a), env.map().rows, env.map().cols);
      phi[a] = env.grid().cells[c.row * env.map().cols + c.col] == TurfCell::kGrass ? 0.0 : 1.0;
    }
    return phi;
  };
  const RacFilter rac{{0.5}, truth};
  UniformPolicy pi(4);
  EpisodeOptions o;
  o.rac = &rac;
  long events = 0, plain = 0;
  for (int i = 0; i < 200; ++i) {
    events += run_episode(env, pi, rng, o).metrics.irreversible_events;
    plain += run_episode(env, pi, rng).metrics.irreversible_events;
  }
  CHECK(events == 0);
  CHECK(plain > 0);

  CliffWalk cliff;
  const PhiFunction edge = [&cliff](const Observation&) {
    std::vector<double> phi(4);
    for (int a = 0; a < 4; ++a) {
      const Cell c = grid_move(cliff.state().pos, GridAction(a), 6, 8);
      phi[a] = cliff_is_cliff(cliff.params(), c) ? 0.0 : 1.0;
    }
    return phi;
  };
  const RacFilter rc{{0.1}, edge};
  o.rac = &rc;
  for (int i = 0; i < 100; ++i) {
    const EpisodeResult r = run_episode(cliff, pi, rng, o);
    CHECK(r.metrics.irreversible_events == 0);
    CHECK(r.metrics.extrinsic_return == 250.0);
  }
}

TEST_CASE("episode options and metrics csv") {
  Rng rng(10);
  Cartpole env;
  UniformPolicy pi(2);
  EpisodeOptions o;
  o.max_steps = 3;
  o.keep_choices = true;
  const EpisodeResult r = run_episode(env, pi, rng, o);
  CHECK(r.metrics.length <= 3);
  CHECK(r.logp.size() == r.traj.size());
  CHECK(r.traj.steps.back().done);
  CHECK_THROWS_AS(run_episode(env, UniformPolicy(3), rng), std::invalid_argument);

  std::vector<EpisodeRow> rows{{0, 0, r.metrics, r.metrics.length},
                               {0, 1, {5, 1.5, -0.25, 2, 0, false}, 12}};
  const auto path = std::filesystem::temp_directory_path() / "revrl_metrics_test.csv";
  write_episode_metrics_csv(path.string(), rows);
  const auto back = read_episode_metrics_csv(path.string());
  REQUIRE(back.size() == 2);
  CHECK(back[1].metrics.intrinsic_return == -0.25);
  CHECK(back[1].metrics.irreversible_events == 2);
  CHECK(back[1].wall_steps == 12);
  std::filesystem::remove(path);
}
