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

#ifndef REVRL_CORE_TRAJECTORY_H_
#define REVRL_CORE_TRAJECTORY_H_

#include <cstdint>
#include <optional>
#include <vector>

namespace revrl {

// Environment-specific feature vector. Length is fixed per environment.
using Observation = std::vector<double>;

struct Step {
  Observation obs;   // observation the action was taken in
  int action = 0;
  double reward = 0.0;
  bool done = false;  // true only on the last step of an episode
};

// One episode of experience.
//
// steps[t].obs is x_t. The observation reached after the last action is kept
// separately in final_obs; when present it extends the observation sequence
// to x_0 .. x_T.
struct Trajectory {
  std::vector<Step> steps;
  std::optional<Observation> final_obs;
  std::uint64_t seed = 0;
  std::int64_t episode_index = 0;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }

  std::size_t observation_count() const {
    return steps.size() + (final_obs ? 1 : 0);
  }
  const Observation& observation(std::size_t i) const {
    return i < steps.size() ? steps[i].obs : *final_obs;
  }
  // Number of (x_t, a_t, x_{t+1}) triples available.
  std::size_t transition_count() const {
    const std::size_t n = observation_count();
    return n == 0 ? 0 : n - 1;
  }
};

// Throws std::invalid_argument when the trajectory breaks an invariant:
// empty, done set before the last step, inconsistent observation length,
// non-finite values, or an action outside [0, action_count) when
// action_count > 0.
void validate_trajectory(const Trajectory& traj, int action_count = 0);

}  // namespace revrl

#endif  // REVRL_CORE_TRAJECTORY_H_
