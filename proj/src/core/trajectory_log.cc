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

#include "revrl/core/trajectory_log.h"

#include <stdexcept>
#include <string>

#include "revrl/core/io.h"

namespace revrl {

TrajectoryLogWriter::TrajectoryLogWriter(std::ostream& out,
                                         std::size_t obs_size)
    : out_(out), obs_size_(obs_size) {
  out_ << "episode,t";
  for (std::size_t i = 0; i < obs_size_; ++i) out_ << ",obs_" << i;
  out_ << ",action,reward,done\n";
}

void TrajectoryLogWriter::write(const Trajectory& traj) {
  auto row = [&](std::size_t t, const Observation& obs, int action,
                 double reward, bool done) {
    if (obs.size() != obs_size_) {
      throw std::invalid_argument("TrajectoryLogWriter: observation size");
    }
    out_ << traj.episode_index << ',' << t;
    for (double v : obs) out_ << ',' << format_real(v);
    out_ << ',' << action << ',' << format_real(reward) << ','
         << (done ? 1 : 0) << '\n';
  };
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const Step& s = traj.steps[t];
    row(t, s.obs, s.action, s.reward, s.done);
  }
  if (traj.final_obs) row(traj.steps.size(), *traj.final_obs, -1, 0.0, true);
}

}  // namespace revrl
