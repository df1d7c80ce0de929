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

#ifndef REVRL_AGENTS_PPO_H_
#define REVRL_AGENTS_PPO_H_

#include <vector>

#include <Eigen/Dense>

#include "revrl/agents/episode.h"
#include "revrl/agents/policy_value_net.h"
#include "revrl/nn/adam.h"

namespace revrl {

struct PpoConfig {
  double clip_epsilon = 0.2;
  double entropy_coef = 0.05;
  double value_coef = 0.5;
  double gamma = 0.99;
  double gae_lambda = 0.95;  // 1: Monte Carlo returns
  long rollout_steps = 2048;  // minimum environment steps per update
  int epochs = 4;
  int minibatch = 256;
  double learning_rate = 3e-4;
  double max_grad_norm = 0.5;  // <= 0 disables clipping
  bool normalize_advantages = true;
};

void validate(const PpoConfig& cfg);

struct PpoBatch {
  Eigen::MatrixXd obs;  // obs_size x N
  std::vector<int> actions;
  Eigen::VectorXd logp_old;
  std::vector<std::vector<unsigned char>> masks;  // empty entry: all allowed
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;
  Eigen::Index size() const { return obs.cols(); }
};

// Discounted Monte Carlo returns (bootstrapped from the value of the final
// observation on time-limit truncation) minus the value baseline. Episodes
// must have been recorded with keep_choices.
PpoBatch build_ppo_batch(const PolicyValueNet& net, const std::vector<EpisodeResult>& episodes,
                         const PpoConfig& cfg);

struct PpoLoss {
  double loss = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  Eigen::VectorXd grad;
};

// Clipped surrogate + value_coef * MSE - entropy_coef * entropy over the
// given sample indices, with the gradient in PolicyValueNet::params order.
PpoLoss ppo_loss(const PolicyValueNet& net, const PpoBatch& batch,
                 const std::vector<Eigen::Index>& idx, const PpoConfig& cfg);

struct PpoDiagnostics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy_before = 0.0;
  double entropy_after = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  double grad_norm = 0.0;
  int minibatches = 0;
};

double mean_entropy(const PolicyValueNet& net, const PpoBatch& batch);

// Sets opt's learning rate from cfg.
PpoDiagnostics ppo_update(PolicyValueNet& net, PpoBatch batch, const PpoConfig& cfg,
                          AdamState& opt, Rng& rng);

// Whole episodes under the current policy until at least min_steps steps.
std::vector<EpisodeResult> collect_rollout(Environment& env, const PolicyValueNet& net,
                                           long min_steps, Rng& rng,
                                           const RacFilter* rac = nullptr);

}  // namespace revrl

#endif  // REVRL_AGENTS_PPO_H_
