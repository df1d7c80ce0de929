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

#ifndef REVRL_CORE_TRAJECTORY_LOG_H_
#define REVRL_CORE_TRAJECTORY_LOG_H_

#include <ostream>
#include <span>

#include "revrl/core/trajectory.h"

namespace revrl {

// Delimited text log, one record per step:
//   episode,t,obs_0,...,obs_{d-1},action,reward,done
// Reals are printed with 17 significant digits so a log round-trips exactly.
// A trajectory carrying final_obs gets one extra record with action -1 and
// reward 0 holding that observation.
class TrajectoryLogWriter {
 public:
  TrajectoryLogWriter(std::ostream& out, std::size_t obs_size);
  void write(const Trajectory& traj);

 private:
  std::ostream& out_;
  std::size_t obs_size_;
};

}  // namespace revrl

#endif  // REVRL_CORE_TRAJECTORY_LOG_H_
