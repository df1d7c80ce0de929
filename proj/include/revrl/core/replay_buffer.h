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

#ifndef REVRL_CORE_REPLAY_BUFFER_H_
#define REVRL_CORE_REPLAY_BUFFER_H_

#include <cstdint>
#include <deque>

#include "revrl/core/trajectory.h"

namespace revrl {

// Bounded FIFO of whole trajectories, capacity counted in steps.
//
// Eviction removes the oldest trajectories until the stored step count fits,
// so no stored episode is ever truncated. A trajectory longer than the
// capacity itself is rejected.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity_steps);

  void push(Trajectory traj);
  void clear();

  std::size_t capacity() const { return capacity_; }
  std::size_t step_count() const { return steps_; }
  std::size_t size() const { return trajectories_.size(); }
  bool empty() const { return trajectories_.empty(); }
  const Trajectory& operator[](std::size_t i) const { return trajectories_[i]; }
  const std::deque<Trajectory>& trajectories() const { return trajectories_; }

  // Bumped on every mutation; samplers use it to invalidate cached weights.
  std::uint64_t version() const { return version_; }
  std::size_t evicted() const { return evicted_; }

 private:
  std::size_t capacity_;
  std::size_t steps_ = 0;
  std::size_t evicted_ = 0;
  std::uint64_t version_ = 0;
  std::deque<Trajectory> trajectories_;
};

}  // namespace revrl

#endif  // REVRL_CORE_REPLAY_BUFFER_H_
