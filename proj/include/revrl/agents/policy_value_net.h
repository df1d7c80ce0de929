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

#ifndef REVRL_AGENTS_POLICY_VALUE_NET_H_
#define REVRL_AGENTS_POLICY_VALUE_NET_H_

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "revrl/core/rng.h"
#include "revrl/core/trajectory.h"
#include "revrl/nn/dense_net.h"

namespace revrl {

// Shared trunk (identity by default) feeding a policy head (logits) and a
// value head (scalar).
class PolicyValueNet {
 public:
  PolicyValueNet() = default;
  PolicyValueNet(int obs_size, int n_actions, Rng& rng, std::vector<int> head_hidden = {64, 64},
                 std::vector<int> trunk_hidden = {}, Activation act = Activation::kTanh);
  PolicyValueNet(DenseNet trunk, DenseNet policy, DenseNet value);

  int obs_size() const { return trunk_.input_size(); }
  int action_count() const { return policy_.output_size(); }

  const DenseNet& trunk() const { return trunk_; }
  const DenseNet& policy_head() const { return policy_; }
  const DenseNet& value_head() const { return value_; }

  Eigen::MatrixXd logits(const Eigen::MatrixXd& X) const;  // actions x batch
  Eigen::VectorXd values(const Eigen::MatrixXd& X) const;
  std::vector<double> probs(const Observation& x) const;
  double value(const Observation& x) const;

  struct Cache {
    ForwardCache trunk, policy, value;
  };
  Cache forward(const Eigen::MatrixXd& X) const;
  // Flat gradient [trunk, policy, value] given output gradients.
  Eigen::VectorXd backward(const Cache& c, const Eigen::MatrixXd& logit_grad,
                           const Eigen::RowVectorXd& value_grad) const;

  Eigen::Index parameter_count() const;
  Eigen::VectorXd params() const;
  void set_params(const Eigen::VectorXd& p);

 private:
  DenseNet trunk_, policy_, value_;
};

// Softmax over the entries where mask is nonzero (all entries if mask is empty).
Eigen::VectorXd masked_softmax(const Eigen::VectorXd& logits, const std::vector<unsigned char>& mask);
double entropy(const Eigen::VectorXd& probs);

void save_policy_value_net(std::ostream& out, const PolicyValueNet& net);
PolicyValueNet load_policy_value_net(std::istream& in);

}  // namespace revrl

#endif  // REVRL_AGENTS_POLICY_VALUE_NET_H_
