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

#ifndef REVRL_PRECEDENCE_TRAINER_H_
#define REVRL_PRECEDENCE_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "revrl/core/replay_buffer.h"
#include "revrl/core/rng.h"
#include "revrl/nn/adam.h"
#include "revrl/precedence/model.h"
#include "revrl/precedence/pairs.h"

namespace revrl {

struct LossRecord {
  std::int64_t update = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

// One Adam step on a fixed batch.
LossRecord precedence_update(PrecedenceModel& model, AdamState& opt, const PairBatch& batch);

// Runs `steps` minibatch updates, with pairs drawn by PairSampler.
std::vector<LossRecord> train_precedence(PrecedenceModel& model, const ReplayBuffer& buffer,
                                         int window, int batch_size, int steps, AdamState& opt,
                                         Rng& rng, bool use_final_obs = true);

// Keeps the optimizer, sampler and loss trace across calls, for interleaving
// with data collection.
class PrecedenceTrainer {
 public:
  PrecedenceTrainer(PrecedenceModel& model, int window, int batch_size, AdamConfig adam,
                    bool use_final_obs = true);

  LossRecord step(const ReplayBuffer& buffer, Rng& rng);
  void train(const ReplayBuffer& buffer, int steps, Rng& rng);

  const std::vector<LossRecord>& trace() const { return trace_; }
  void write_trace_csv(const std::string& path) const;
  PrecedenceModel& model() { return model_; }

 private:
  PrecedenceModel& model_;
  AdamState opt_;
  PairSampler sampler_;
  int batch_size_;
  std::vector<LossRecord> trace_;
};

void write_loss_trace_csv(const std::string& path, const std::vector<LossRecord>& trace);

}  // namespace revrl

#endif  // REVRL_PRECEDENCE_TRAINER_H_
