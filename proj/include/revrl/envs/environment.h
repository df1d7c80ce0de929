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

#ifndef REVRL_ENVS_ENVIRONMENT_H_
#define REVRL_ENVS_ENVIRONMENT_H_

#include <memory>
#include <string>

#include "revrl/core/rng.h"
#include "revrl/core/trajectory.h"

namespace revrl {

struct EnvStep {
  Observation obs;
  double reward = 0.0;     // total reward seen by the learner
  double intrinsic = 0.0;  // part of `reward` added by a shaping wrapper
  bool done = false;
  bool truncated = false;  // done because of the time limit only
  int irreversible_events = 0;
};

// Episodic environment with a discrete action space.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual Observation reset(Rng& rng) = 0;
  // Stochastic environments draw from `rng`; deterministic ones ignore it.
  virtual EnvStep step(int action, Rng& rng) = 0;

  virtual int action_count() const = 0;
  virtual int observation_size() const = 0;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<Environment> clone() const = 0;
};

}  // namespace revrl

#endif  // REVRL_ENVS_ENVIRONMENT_H_
