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

#include "revrl/nn/adam.h"

#include <cmath>
#include <stdexcept>

namespace revrl {

AdamState::AdamState(Eigen::Index n, AdamConfig cfg)
    : config(cfg), m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {
  if (!(cfg.learning_rate > 0) || cfg.beta1 < 0 || cfg.beta1 >= 1 ||
      cfg.beta2 < 0 || cfg.beta2 >= 1 || !(cfg.epsilon > 0) ||
      cfg.weight_decay < 0) {
    throw std::invalid_argument("AdamState: invalid hyperparameters");
  }
}

void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grads) {
  if (params.size() != state.m.size() || grads.size() != state.m.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  if (!grads.allFinite()) {
    throw std::runtime_error("adam_step: non-finite gradient");
  }
  const AdamConfig& c = state.config;
  ++state.step;
  Eigen::VectorXd g = grads;
  if (c.weight_decay > 0) g += c.weight_decay * params;
  state.m = c.beta1 * state.m + (1.0 - c.beta1) * g;
  state.v = c.beta2 * state.v + (1.0 - c.beta2) * g.cwiseAbs2();
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  params.array() -= c.learning_rate * (state.m.array() / bc1) /
                    ((state.v.array() / bc2).sqrt() + c.epsilon);
}

double clip_grad_norm(Eigen::VectorXd& grads, double max_norm) {
  const double norm = grads.norm();
  if (max_norm > 0 && norm > max_norm) grads *= max_norm / norm;
  return norm;
}

}  // namespace revrl
