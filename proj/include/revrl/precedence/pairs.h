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

#ifndef REVRL_PRECEDENCE_PAIRS_H_
#define REVRL_PRECEDENCE_PAIRS_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "revrl/core/replay_buffer.h"
#include "revrl/core/rng.h"
#include "revrl/core/trajectory.h"

namespace revrl {

struct PrecedencePair {
  const Observation* first = nullptr;
  const Observation* second = nullptr;
  int label = 0;  // 1 iff first is earlier in the trajectory
  int gap = 0;
  std::size_t t = 0;  // index of the earlier observation
};

// Number of index pairs t < t' < length with t' - t <= w.
std::uint64_t admissible_pair_count(std::size_t length, int w);

// Uniform over admissible (t, t'), then swapped with probability 1/2. With
// use_final_obs the terminal observation counts as the last index.
PrecedencePair sample_pair(const Trajectory& traj, int w, Rng& rng, bool use_final_obs = true);

struct PairBatch {
  Eigen::MatrixXd first;
  Eigen::MatrixXd second;
  Eigen::VectorXd labels;
};

// Samples pairs uniformly over all admissible pairs in a buffer: a
// trajectory is drawn in proportion to its pair count, then a pair inside
// it. Trajectory weights are cached and rebuilt when the buffer changes.
class PairSampler {
 public:
  PairSampler(int window, bool use_final_obs = true);

  PairBatch sample(const ReplayBuffer& buffer, int batch_size, Rng& rng);
  int window() const { return window_; }
  bool use_final_obs() const { return use_final_obs_; }

 private:
  void refresh(const ReplayBuffer& buffer);

  int window_;
  bool use_final_obs_;
  const ReplayBuffer* cached_buffer_ = nullptr;
  std::uint64_t cached_version_ = ~std::uint64_t{0};
  std::vector<std::uint64_t> prefix_;  // cumulative pair counts
};

}  // namespace revrl

#endif  // REVRL_PRECEDENCE_PAIRS_H_
