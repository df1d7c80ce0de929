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

#include "revrl/core/replay_buffer.h"

#include <stdexcept>

namespace revrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity_steps)
    : capacity_(capacity_steps) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity 0");
}

void ReplayBuffer::push(Trajectory traj) {
  if (traj.empty()) throw std::invalid_argument("ReplayBuffer: empty trajectory");
  if (traj.size() > capacity_) {
    throw std::invalid_argument("ReplayBuffer: trajectory exceeds capacity");
  }
  steps_ += traj.size();
  trajectories_.push_back(std::move(traj));
  while (steps_ > capacity_) {
    steps_ -= trajectories_.front().size();
    trajectories_.pop_front();
    ++evicted_;
  }
  ++version_;
}

void ReplayBuffer::clear() {
  trajectories_.clear();
  steps_ = 0;
  ++version_;
}

}  // namespace revrl
