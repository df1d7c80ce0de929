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

#include "revrl/core/trajectory.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace revrl {

namespace {

void check_obs(const Observation& obs, std::size_t expected, std::size_t t) {
  if (obs.size() != expected) {
    throw std::invalid_argument("trajectory: observation length changes at t=" +
                                std::to_string(t));
  }
  for (double v : obs) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("trajectory: non-finite observation at t=" +
                                  std::to_string(t));
    }
  }
}

}  // namespace

void validate_trajectory(const Trajectory& traj, int action_count) {
  if (traj.empty()) throw std::invalid_argument("trajectory: empty");
  const std::size_t dim = traj.steps.front().obs.size();
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const Step& s = traj.steps[t];
    check_obs(s.obs, dim, t);
    if (s.action < 0 || (action_count > 0 && s.action >= action_count)) {
      throw std::invalid_argument("trajectory: action out of range at t=" +
                                  std::to_string(t));
    }
    if (!std::isfinite(s.reward)) {
      throw std::invalid_argument("trajectory: non-finite reward at t=" +
                                  std::to_string(t));
    }
    if (s.done && t + 1 != traj.steps.size()) {
      throw std::invalid_argument("trajectory: done before the last step");
    }
  }
  if (traj.final_obs) check_obs(*traj.final_obs, dim, traj.steps.size());
}

}  // namespace revrl
