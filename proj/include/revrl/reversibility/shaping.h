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

#ifndef REVRL_REVERSIBILITY_SHAPING_H_
#define REVRL_REVERSIBILITY_SHAPING_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "revrl/envs/environment.h"
#include "revrl/precedence/model.h"

namespace revrl {

struct RaeConfig {
  double beta = 0.8;
  double lambda = 0.1;
};

struct RacConfig {
  double beta = 0.2;
};

void validate(const RaeConfig& cfg);
void validate(const RacConfig& cfg);

// -lambda * psi when psi > beta, else 0.
double rae_reward(double psi_value, const RaeConfig& cfg);

struct RacResult {
  std::vector<double> probs;
  bool fallback = false;  // every action was rejected
};

// Zeroes actions with phi < beta and renormalizes. If nothing survives, all
// mass goes to the argmax-phi action.
RacResult rac_filter(const std::vector<double>& policy_probs, const std::vector<double>& phi,
                     const RacConfig& cfg);

// Adds rae_reward(psi(x_t, x_{t+1})) to each step reward. The precedence
// model is shared so that online training shows up immediately.
class RaeEnv : public Environment {
 public:
  RaeEnv(std::unique_ptr<Environment> inner, std::shared_ptr<const PrecedenceModel> psi,
         RaeConfig cfg);

  Observation reset(Rng& rng) override;
  EnvStep step(int action, Rng& rng) override;

  int action_count() const override { return inner_->action_count(); }
  int observation_size() const override { return inner_->observation_size(); }
  std::string name() const override { return inner_->name() + "+rae"; }
  std::unique_ptr<Environment> clone() const override;

  const Environment& inner() const { return *inner_; }

 private:
  std::unique_ptr<Environment> inner_;
  std::shared_ptr<const PrecedenceModel> psi_;
  RaeConfig cfg_;
  Observation last_;
};

std::unique_ptr<Environment> wrap_env_rae(std::unique_ptr<Environment> env,
                                          std::shared_ptr<const PrecedenceModel> psi,
                                          const RaeConfig& cfg);

struct SweepRow {
  double beta = 0.0;
  std::uint64_t seed = 0;
  double score = 0.0;
  long irreversible_events = 0;
};

void write_threshold_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace revrl

#endif  // REVRL_REVERSIBILITY_SHAPING_H_
