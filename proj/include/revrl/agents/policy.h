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

#ifndef REVRL_AGENTS_POLICY_H_
#define REVRL_AGENTS_POLICY_H_

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "revrl/agents/policy_value_net.h"
#include "revrl/core/rng.h"
#include "revrl/core/trajectory.h"
#include "revrl/reversibility/model.h"
#include "revrl/reversibility/shaping.h"

namespace revrl {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::vector<double> probs(const Observation& x) const = 0;
  virtual int action_count() const = 0;
};

class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(int n_actions);
  std::vector<double> probs(const Observation&) const override { return p_; }
  int action_count() const override { return static_cast<int>(p_.size()); }

 private:
  std::vector<double> p_;
};

// Rows indexed by the hot entry of a one-hot observation.
class TabularPolicy final : public Policy {
 public:
  explicit TabularPolicy(Eigen::MatrixXd table);
  std::vector<double> probs(const Observation& x) const override;
  int action_count() const override { return static_cast<int>(table_.cols()); }

 private:
  Eigen::MatrixXd table_;
};

class NetworkPolicy final : public Policy {
 public:
  explicit NetworkPolicy(const PolicyValueNet& net) : net_(&net) {}
  std::vector<double> probs(const Observation& x) const override { return net_->probs(x); }
  int action_count() const override { return net_->action_count(); }
  const PolicyValueNet& net() const { return *net_; }

 private:
  const PolicyValueNet* net_;
};

using PhiFunction = std::function<std::vector<double>(const Observation&)>;
PhiFunction phi_of(std::shared_ptr<const ReversibilityModel> model);

struct RacFilter {
  RacConfig cfg;
  PhiFunction phi;
};

struct ActionChoice {
  int action = 0;
  std::vector<double> probs;        // distribution actually sampled from
  std::vector<unsigned char> mask;  // actions the filter allowed
  bool fallback = false;
};

ActionChoice choose_action(const Policy& policy, const Observation& x, Rng& rng,
                           const RacFilter* rac = nullptr);
ActionChoice policy_sample(const PolicyValueNet& net, const Observation& x, Rng& rng,
                           const RacFilter* rac = nullptr);

}  // namespace revrl

#endif  // REVRL_AGENTS_POLICY_H_
