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

#include "revrl/agents/policy_value_net.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "revrl/nn/checkpoint.h"
#include "revrl/precedence/model.h"

namespace revrl {

namespace {

DenseNet mlp(int in, const std::vector<int>& hidden, int out, Activation act, Activation last,
             Rng& rng, double last_scale) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  if (out > 0) sizes.push_back(out);
  if (sizes.size() == 1) return DenseNet(in);
  std::vector<Activation> acts(sizes.size() - 1, act);
  if (out > 0) acts.back() = last;
  return DenseNet::create(sizes, acts, rng, last_scale);
}

}  // namespace

PolicyValueNet::PolicyValueNet(int obs_size, int n_actions, Rng& rng,
                               std::vector<int> head_hidden, std::vector<int> trunk_hidden,
                               Activation act) {
  if (obs_size < 1 || n_actions < 1) throw std::invalid_argument("PolicyValueNet: sizes");
  trunk_ = mlp(obs_size, trunk_hidden, 0, act, act, rng, 1.0);
  const int feat = trunk_.output_size();
  // Small initial logits keep the starting policy close to uniform.
  policy_ = mlp(feat, head_hidden, n_actions, act, Activation::kIdentity, rng, 0.01);
  value_ = mlp(feat, head_hidden, 1, act, Activation::kIdentity, rng, 1.0);
}

PolicyValueNet::PolicyValueNet(DenseNet trunk, DenseNet policy, DenseNet value)
    : trunk_(std::move(trunk)), policy_(std::move(policy)), value_(std::move(value)) {
  if (policy_.input_size() != trunk_.output_size() || value_.input_size() != trunk_.output_size() ||
      value_.output_size() != 1) {
    throw std::invalid_argument("PolicyValueNet: incompatible parts");
  }
}

Eigen::MatrixXd PolicyValueNet::logits(const Eigen::MatrixXd& X) const {
  return policy_.predict(trunk_.predict(X));
}

Eigen::VectorXd PolicyValueNet::values(const Eigen::MatrixXd& X) const {
  return value_.predict(trunk_.predict(X)).row(0).transpose();
}

std::vector<double> PolicyValueNet::probs(const Observation& x) const {
  if (static_cast<int>(x.size()) != obs_size()) {
    throw std::invalid_argument("PolicyValueNet: observation length");
  }
  const Eigen::VectorXd p = masked_softmax(logits(to_vector(x)), {});
  return {p.data(), p.data() + p.size()};
}

double PolicyValueNet::value(const Observation& x) const {
  if (static_cast<int>(x.size()) != obs_size()) {
    throw std::invalid_argument("PolicyValueNet: observation length");
  }
  return values(to_vector(x))[0];
}

PolicyValueNet::Cache PolicyValueNet::forward(const Eigen::MatrixXd& X) const {
  Cache c;
  c.trunk = trunk_.forward(X);
  c.policy = policy_.forward(c.trunk.output);
  c.value = value_.forward(c.trunk.output);
  return c;
}

Eigen::VectorXd PolicyValueNet::backward(const Cache& c, const Eigen::MatrixXd& logit_grad,
                                         const Eigen::RowVectorXd& value_grad) const {
  const bool trunk_has_params = trunk_.parameter_count() > 0;
  const BackwardResult p = policy_.backward(c.policy, logit_grad, trunk_has_params);
  const BackwardResult v = value_.backward(c.value, value_grad, trunk_has_params);
  Eigen::VectorXd g(parameter_count());
  const Eigen::Index nt = trunk_.parameter_count(), np = policy_.parameter_count();
  if (trunk_has_params) {
    g.head(nt) = trunk_.backward(c.trunk, p.input_grad + v.input_grad).grad;
  }
  g.segment(nt, np) = p.grad;
  g.tail(value_.parameter_count()) = v.grad;
  return g;
}

Eigen::Index PolicyValueNet::parameter_count() const {
  return trunk_.parameter_count() + policy_.parameter_count() + value_.parameter_count();
}

Eigen::VectorXd PolicyValueNet::params() const {
  Eigen::VectorXd p(parameter_count());
  p << trunk_.params(), policy_.params(), value_.params();
  return p;
}

void PolicyValueNet::set_params(const Eigen::VectorXd& p) {
  if (p.size() != parameter_count()) throw std::invalid_argument("set_params: size");
  const Eigen::Index nt = trunk_.parameter_count(), np = policy_.parameter_count();
  trunk_.mutable_params() = p.head(nt);
  policy_.mutable_params() = p.segment(nt, np);
  value_.mutable_params() = p.tail(value_.parameter_count());
}

Eigen::VectorXd masked_softmax(const Eigen::VectorXd& logits,
                               const std::vector<unsigned char>& mask) {
  const bool all = mask.empty();
  if (!all && mask.size() != static_cast<std::size_t>(logits.size())) {
    throw std::invalid_argument("masked_softmax: mask size");
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    if (all || mask[i]) mx = std::max(mx, logits[i]);
  }
  if (!std::isfinite(mx)) throw std::invalid_argument("masked_softmax: nothing allowed");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(logits.size());
  double z = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    if (all || mask[i]) z += p[i] = std::exp(logits[i] - mx);
  }
  return p / z;
}

double entropy(const Eigen::VectorXd& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

void save_policy_value_net(std::ostream& out, const PolicyValueNet& net) {
  save_dense_net(out, net.trunk());
  save_dense_net(out, net.policy_head());
  save_dense_net(out, net.value_head());
}

PolicyValueNet load_policy_value_net(std::istream& in) {
  DenseNet t = load_dense_net(in);
  DenseNet p = load_dense_net(in);
  DenseNet v = load_dense_net(in);
  return PolicyValueNet(std::move(t), std::move(p), std::move(v));
}

}  // namespace revrl
