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

#include "revrl/agents/ppo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "revrl/precedence/model.h"

namespace revrl {

void validate(const PpoConfig& cfg) {
  if (!(cfg.clip_epsilon > 0.0)) throw std::invalid_argument("ppo: clip_epsilon must be > 0");
  if (!(cfg.entropy_coef >= 0.0)) throw std::invalid_argument("ppo: entropy_coef must be >= 0");
  if (!(cfg.value_coef >= 0.0)) throw std::invalid_argument("ppo: value_coef must be >= 0");
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) throw std::invalid_argument("ppo: gamma in [0,1]");
  if (!(cfg.gae_lambda >= 0.0 && cfg.gae_lambda <= 1.0)) {
    throw std::invalid_argument("ppo: gae_lambda in [0,1]");
  }
  if (cfg.rollout_steps < 1 || cfg.epochs < 1 || cfg.minibatch < 1) {
    throw std::invalid_argument("ppo: rollout_steps, epochs and minibatch must be positive");
  }
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("ppo: learning_rate must be > 0");
}

PpoBatch build_ppo_batch(const PolicyValueNet& net, const std::vector<EpisodeResult>& episodes,
                         const PpoConfig& cfg) {
  Eigen::Index n = 0;
  for (const EpisodeResult& e : episodes) {
    if (e.logp.size() != e.traj.size() || e.masks.size() != e.traj.size()) {
      throw std::invalid_argument("build_ppo_batch: episode recorded without choices");
    }
    n += static_cast<Eigen::Index>(e.traj.size());
  }
  if (n == 0) throw std::invalid_argument("build_ppo_batch: empty rollout");
  PpoBatch b;
  b.obs.resize(net.obs_size(), n);
  b.actions.resize(static_cast<std::size_t>(n));
  b.logp_old.resize(n);
  b.masks.resize(static_cast<std::size_t>(n));
  b.returns.resize(n);
  b.advantages.resize(n);
  Eigen::Index k = 0;
  for (const EpisodeResult& e : episodes) {
    const std::size_t len = e.traj.size();
    for (std::size_t t = 0; t < len; ++t) {
      b.obs.col(k + static_cast<Eigen::Index>(t)) = to_vector(e.traj.steps[t].obs);
    }
    const Eigen::VectorXd v = net.values(b.obs.middleCols(k, static_cast<Eigen::Index>(len)));
    double next_v = e.metrics.truncated ? net.value(*e.traj.final_obs) : 0.0;
    double gae = 0.0;
    for (std::size_t t = len; t-- > 0;) {
      const Eigen::Index i = static_cast<Eigen::Index>(t);
      const double delta = e.traj.steps[t].reward + cfg.gamma * next_v - v[i];
      gae = delta + cfg.gamma * cfg.gae_lambda * gae;
      b.advantages[k + i] = gae;
      b.returns[k + i] = gae + v[i];
      next_v = v[i];
    }
    for (std::size_t t = 0; t < len; ++t, ++k) {
      b.actions[k] = e.traj.steps[t].action;
      b.logp_old[k] = e.logp[t];
      b.masks[k] = e.masks[t];
    }
  }
  return b;
}

PpoLoss ppo_loss(const PolicyValueNet& net, const PpoBatch& batch,
                 const std::vector<Eigen::Index>& idx, const PpoConfig& cfg) {
  const Eigen::Index B = static_cast<Eigen::Index>(idx.size());
  if (B == 0) throw std::invalid_argument("ppo_loss: empty minibatch");
  Eigen::MatrixXd X(batch.obs.rows(), B);
  for (Eigen::Index j = 0; j < B; ++j) X.col(j) = batch.obs.col(idx[j]);
  const PolicyValueNet::Cache c = net.forward(X);
  const Eigen::MatrixXd& logits = c.policy.output;
  const Eigen::Index A = logits.rows();

  PpoLoss r;
  Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(A, B);
  Eigen::RowVectorXd dv(B);
  const double inv = 1.0 / static_cast<double>(B);
  for (Eigen::Index j = 0; j < B; ++j) {
    const Eigen::Index i = idx[j];
    const auto& mask = batch.masks[static_cast<std::size_t>(i)];
    const int a = batch.actions[static_cast<std::size_t>(i)];
    const Eigen::VectorXd p = masked_softmax(logits.col(j), mask);
    const double logp = std::log(p[a]);
    const double ratio = std::exp(logp - batch.logp_old[i]);
    const double adv = batch.advantages[i];
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon);
    const double s1 = ratio * adv, s2 = clipped * adv;
    r.policy_loss -= std::min(s1, s2) * inv;
    if (std::abs(ratio - 1.0) > cfg.clip_epsilon) r.clip_fraction += inv;
    r.approx_kl += (batch.logp_old[i] - logp) * inv;
    const double h = entropy(p);
    r.entropy += h * inv;

    // d/dlogp of min(s1, s2) is ratio * adv when the unclipped term is active.
    const double dlogp = s1 <= s2 ? -ratio * adv * inv : 0.0;
    for (Eigen::Index k = 0; k < A; ++k) {
      if (p[k] <= 0.0) continue;
      const double dl = (k == a ? 1.0 : 0.0) - p[k];
      const double dh = -p[k] * (std::log(p[k]) + h);
      dz(k, j) = dlogp * dl - cfg.entropy_coef * inv * dh;
    }
    const double err = c.value.output(0, j) - batch.returns[i];
    r.value_loss += err * err * inv;
    dv[j] = cfg.value_coef * 2.0 * err * inv;
  }
  r.loss = r.policy_loss + cfg.value_coef * r.value_loss - cfg.entropy_coef * r.entropy;
  if (!std::isfinite(r.loss)) throw std::runtime_error("ppo: non-finite loss");
  r.grad = net.backward(c, dz, dv);
  return r;
}

double mean_entropy(const PolicyValueNet& net, const PpoBatch& batch) {
  const Eigen::MatrixXd logits = net.logits(batch.obs);
  double h = 0.0;
  for (Eigen::Index j = 0; j < batch.size(); ++j) {
    h += entropy(masked_softmax(logits.col(j), batch.masks[static_cast<std::size_t>(j)]));
  }
  return h / static_cast<double>(batch.size());
}

PpoDiagnostics ppo_update(PolicyValueNet& net, PpoBatch batch, const PpoConfig& cfg,
                          AdamState& opt, Rng& rng) {
  validate(cfg);
  const Eigen::Index n = batch.size();
  if (n == 0) throw std::invalid_argument("ppo_update: empty batch");
  if (opt.m.size() != net.parameter_count()) {
    throw std::invalid_argument("ppo_update: optimizer does not match the network");
  }
  if (cfg.normalize_advantages && n > 1) {
    const double mu = batch.advantages.mean();
    const double sd = std::sqrt((batch.advantages.array() - mu).square().sum() / (n - 1));
    batch.advantages = (batch.advantages.array() - mu) / (sd + 1e-8);
  }
  opt.config.learning_rate = cfg.learning_rate;
  PpoDiagnostics d;
  d.entropy_before = mean_entropy(net, batch);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Eigen::VectorXd theta = net.params();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += cfg.minibatch) {
      const Eigen::Index end = std::min<Eigen::Index>(n, start + cfg.minibatch);
      std::vector<Eigen::Index> idx(order.begin() + start, order.begin() + end);
      PpoLoss l = ppo_loss(net, batch, idx, cfg);
      if (cfg.max_grad_norm > 0.0) {
        d.grad_norm = clip_grad_norm(l.grad, cfg.max_grad_norm);
      } else {
        d.grad_norm = l.grad.norm();
      }
      adam_step(opt, theta, l.grad);
      net.set_params(theta);
      d.policy_loss = l.policy_loss;
      d.value_loss = l.value_loss;
      d.clip_fraction = l.clip_fraction;
      d.approx_kl = l.approx_kl;
      ++d.minibatches;
    }
  }
  d.entropy_after = mean_entropy(net, batch);
  return d;
}

std::vector<EpisodeResult> collect_rollout(Environment& env, const PolicyValueNet& net,
                                           long min_steps, Rng& rng, const RacFilter* rac) {
  NetworkPolicy policy(net);
  EpisodeOptions opts;
  opts.rac = rac;
  opts.keep_choices = true;
  std::vector<EpisodeResult> out;
  long steps = 0;
  while (steps < min_steps) {
    out.push_back(run_episode(env, policy, rng, opts));
    steps += out.back().metrics.length;
  }
  return out;
}

}  // namespace revrl
