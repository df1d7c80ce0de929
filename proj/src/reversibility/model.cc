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

#include "revrl/reversibility/model.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "revrl/nn/checkpoint.h"

namespace revrl {

ReversibilityModel::ReversibilityModel(int obs_size, int n_actions, Rng& rng,
                                       std::vector<int> hidden, bool zero_head) {
  std::vector<int> sizes{obs_size};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(n_actions);
  std::vector<Activation> acts(hidden.size(), Activation::kRelu);
  acts.push_back(Activation::kSigmoid);
  net_ = DenseNet::create(sizes, acts, rng);
  if (zero_head) {
    const std::size_t last = net_.layer_count() - 1;
    net_.mutable_params().tail(net_.parameter_count() - net_.weight_offset(last)).setZero();
  }
}

ReversibilityModel::ReversibilityModel(DenseNet net) : net_(std::move(net)) {
  if (net_.layer_count() == 0 || net_.layers().back().act != Activation::kSigmoid) {
    throw std::invalid_argument("ReversibilityModel: net must end in a sigmoid layer");
  }
}

std::vector<double> ReversibilityModel::phi(const Observation& x) const {
  if (static_cast<int>(x.size()) != obs_size()) {
    throw std::invalid_argument("phi: observation length does not match the network");
  }
  const Eigen::VectorXd out = net_.predict_one(to_vector(x));
  return {out.data(), out.data() + out.size()};
}

Eigen::MatrixXd ReversibilityModel::phi_batch(const Eigen::MatrixXd& X) const {
  return net_.predict(X);
}

MseResult ReversibilityModel::mse(const Eigen::MatrixXd& X, const std::vector<int>& actions,
                                  const Eigen::VectorXd& targets) const {
  const Eigen::Index B = X.cols();
  if (static_cast<Eigen::Index>(actions.size()) != B || targets.size() != B || B == 0) {
    throw std::invalid_argument("mse: batch shapes");
  }
  const ForwardCache c = net_.forward(X);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(c.output.rows(), B);
  MseResult r;
  for (Eigen::Index j = 0; j < B; ++j) {
    const int a = actions[static_cast<std::size_t>(j)];
    if (a < 0 || a >= action_count()) throw std::invalid_argument("mse: action out of range");
    const double d = c.output(a, j) - targets[j];
    r.loss += 0.5 * d * d;
    g(a, j) = d / static_cast<double>(B);
  }
  r.loss /= static_cast<double>(B);
  if (!std::isfinite(r.loss)) throw std::runtime_error("reversibility: non-finite loss");
  r.grad = net_.backward(c, g).grad;
  return r;
}

void save_reversibility_model(std::ostream& out, const ReversibilityModel& m) {
  save_dense_net(out, m.net());
}

ReversibilityModel load_reversibility_model(std::istream& in) {
  return ReversibilityModel(load_dense_net(in));
}

TransitionBatch TransitionSampler::sample(const ReplayBuffer& buffer, int batch_size, Rng& rng) {
  if (batch_size < 1) throw std::invalid_argument("TransitionSampler: batch size");
  auto count = [this](const Trajectory& t) -> std::uint64_t {
    return use_final_obs_ ? t.transition_count() : (t.size() > 0 ? t.size() - 1 : 0);
  };
  if (cached_buffer_ != &buffer || cached_version_ != buffer.version()) {
    prefix_.resize(buffer.size());
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < buffer.size(); ++i) prefix_[i] = acc += count(buffer[i]);
    cached_buffer_ = &buffer;
    cached_version_ = buffer.version();
  }
  if (prefix_.empty() || prefix_.back() == 0) {
    throw std::invalid_argument("TransitionSampler: no transitions in buffer");
  }
  const int dim = static_cast<int>(buffer[0].steps.front().obs.size());
  TransitionBatch b;
  b.x.resize(dim, batch_size);
  b.next.resize(dim, batch_size);
  b.actions.resize(static_cast<std::size_t>(batch_size));
  for (int j = 0; j < batch_size; ++j) {
    const std::uint64_t k = rng.uniform_int(prefix_.back());
    const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), k);
    const std::size_t ti = static_cast<std::size_t>(it - prefix_.begin());
    const std::uint64_t before = ti == 0 ? 0 : prefix_[ti - 1];
    const Trajectory& t = buffer[ti];
    const std::size_t step = static_cast<std::size_t>(k - before);
    b.x.col(j) = to_vector(t.observation(step));
    b.next.col(j) = to_vector(t.observation(step + 1));
    b.actions[static_cast<std::size_t>(j)] = t.steps[step].action;
  }
  return b;
}

PsiFunction psi_of(const PrecedenceModel& model) {
  return [&model](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return model.psi_batch(a, b);
  };
}

RegressionRecord reversibility_update(ReversibilityModel& model, AdamState& opt,
                                      const TransitionBatch& batch, const PsiFunction& psi) {
  const Eigen::VectorXd target = psi(batch.next, batch.x);
  const MseResult r = model.mse(batch.x, batch.actions, target);
  adam_step(opt, model.mutable_params(), r.grad);
  return {opt.step, r.loss};
}

std::vector<RegressionRecord> train_reversibility(ReversibilityModel& model,
                                                  const ReplayBuffer& buffer,
                                                  const PsiFunction& psi, int batch_size,
                                                  int steps, AdamState& opt, Rng& rng,
                                                  bool use_final_obs) {
  if (steps < 0) throw std::invalid_argument("train_reversibility: negative step count");
  std::vector<RegressionRecord> trace;
  TransitionSampler sampler(use_final_obs);
  for (int i = 0; i < steps; ++i) {
    trace.push_back(reversibility_update(model, opt, sampler.sample(buffer, batch_size, rng), psi));
  }
  return trace;
}

}  // namespace revrl
