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

#include "revrl/precedence/trainer.h"

#include <stdexcept>

#include "revrl/core/io.h"

namespace revrl {

LossRecord precedence_update(PrecedenceModel& model, AdamState& opt, const PairBatch& batch) {
  const BceResult r = model.bce(batch.first, batch.second, batch.labels);
  Eigen::VectorXd p = model.params();
  adam_step(opt, p, r.grad);
  model.set_params(p);
  LossRecord rec;
  rec.update = opt.step;
  rec.loss = r.loss;
  rec.accuracy = r.accuracy;
  return rec;
}

std::vector<LossRecord> train_precedence(PrecedenceModel& model, const ReplayBuffer& buffer,
                                         int window, int batch_size, int steps, AdamState& opt,
                                         Rng& rng, bool use_final_obs) {
  if (steps < 0) throw std::invalid_argument("train_precedence: negative step count");
  std::vector<LossRecord> trace;
  if (steps == 0) return trace;
  PairSampler sampler(window, use_final_obs);
  trace.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    trace.push_back(precedence_update(model, opt, sampler.sample(buffer, batch_size, rng)));
  }
  return trace;
}

PrecedenceTrainer::PrecedenceTrainer(PrecedenceModel& model, int window, int batch_size,
                                     AdamConfig adam, bool use_final_obs)
    : model_(model),
      opt_(model.parameter_count(), adam),
      sampler_(window, use_final_obs),
      batch_size_(batch_size) {}

LossRecord PrecedenceTrainer::step(const ReplayBuffer& buffer, Rng& rng) {
  trace_.push_back(precedence_update(model_, opt_, sampler_.sample(buffer, batch_size_, rng)));
  return trace_.back();
}

void PrecedenceTrainer::train(const ReplayBuffer& buffer, int steps, Rng& rng) {
  for (int i = 0; i < steps; ++i) step(buffer, rng);
}

void PrecedenceTrainer::write_trace_csv(const std::string& path) const {
  write_loss_trace_csv(path, trace_);
}

void write_loss_trace_csv(const std::string& path, const std::vector<LossRecord>& trace) {
  CsvTable t({"update_index", "bce_loss", "label_accuracy"});
  for (const LossRecord& r : trace) {
    t.row({std::to_string(r.update), format_real(r.loss), format_real(r.accuracy)});
  }
  t.write(path);
}

}  // namespace revrl
