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

#ifndef REVRL_REVERSIBILITY_MODEL_H_
#define REVRL_REVERSIBILITY_MODEL_H_

#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "revrl/core/replay_buffer.h"
#include "revrl/core/rng.h"
#include "revrl/core/trajectory.h"
#include "revrl/nn/adam.h"
#include "revrl/nn/dense_net.h"
#include "revrl/precedence/model.h"

namespace revrl {

struct MseResult {
  double loss = 0.0;  // (1/2) mean squared error
  Eigen::VectorXd grad;
};

// Maps an observation to one reversibility score per action; each output
// goes through a sigmoid.
class ReversibilityModel {
 public:
  ReversibilityModel() = default;
  ReversibilityModel(int obs_size, int n_actions, Rng& rng, std::vector<int> hidden = {64},
                     bool zero_head = false);
  explicit ReversibilityModel(DenseNet net);

  int obs_size() const { return net_.input_size(); }
  int action_count() const { return net_.output_size(); }
  const DenseNet& net() const { return net_; }

  std::vector<double> phi(const Observation& x) const;
  Eigen::MatrixXd phi_batch(const Eigen::MatrixXd& X) const;  // actions x batch

  // Gradient of (1/2) mean_j (phi(x_j)[a_j] - target_j)^2.
  MseResult mse(const Eigen::MatrixXd& X, const std::vector<int>& actions,
                const Eigen::VectorXd& targets) const;

  Eigen::VectorXd& mutable_params() { return net_.mutable_params(); }
  const Eigen::VectorXd& params() const { return net_.params(); }

 private:
  DenseNet net_;
};

void save_reversibility_model(std::ostream& out, const ReversibilityModel& m);
ReversibilityModel load_reversibility_model(std::istream& in);

struct TransitionBatch {
  Eigen::MatrixXd x;
  Eigen::MatrixXd next;
  std::vector<int> actions;
};

// Uniform over all (x_t, a_t, x_{t+1}) triples stored in a buffer.
class TransitionSampler {
 public:
  explicit TransitionSampler(bool use_final_obs = true) : use_final_obs_(use_final_obs) {}
  TransitionBatch sample(const ReplayBuffer& buffer, int batch_size, Rng& rng);

 private:
  bool use_final_obs_;
  const ReplayBuffer* cached_buffer_ = nullptr;
  std::uint64_t cached_version_ = ~std::uint64_t{0};
  std::vector<std::uint64_t> prefix_;
};

// Regression target for a batch: psi(next, x) column-wise.
using PsiFunction =
    std::function<Eigen::VectorXd(const Eigen::MatrixXd& first, const Eigen::MatrixXd& second)>;

PsiFunction psi_of(const PrecedenceModel& model);

struct RegressionRecord {
  std::int64_t update = 0;
  double loss = 0.0;
};

RegressionRecord reversibility_update(ReversibilityModel& model, AdamState& opt,
                                      const TransitionBatch& batch, const PsiFunction& psi);

// Fits phi(x)[a] to psi(x', x) on transitions sampled from the buffer. The
// target orders the next observation first, so it estimates the chance of
// getting back to x from x'.
std::vector<RegressionRecord> train_reversibility(ReversibilityModel& model,
                                                  const ReplayBuffer& buffer,
                                                  const PsiFunction& psi, int batch_size,
                                                  int steps, AdamState& opt, Rng& rng,
                                                  bool use_final_obs = true);

}  // namespace revrl

#endif  // REVRL_REVERSIBILITY_MODEL_H_
