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

#ifndef REVRL_NN_ADAM_H_
#define REVRL_NN_ADAM_H_

#include <cstdint>

#include <Eigen/Dense>

namespace revrl {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;  // L2 term added to the gradient
};

struct AdamState {
  AdamConfig config;
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t step = 0;

  AdamState() = default;
  AdamState(Eigen::Index n, AdamConfig cfg);
};

// Bias-corrected Adam update applied in place. Throws std::runtime_error on
// a non-finite gradient and std::invalid_argument on a shape mismatch.
void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grads);

// Rescales grads so their L2 norm is at most max_norm; returns the norm
// before clipping.
double clip_grad_norm(Eigen::VectorXd& grads, double max_norm);

}  // namespace revrl

#endif  // REVRL_NN_ADAM_H_
