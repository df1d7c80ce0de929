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

#ifndef REVRL_AGENTS_EPISODE_H_
#define REVRL_AGENTS_EPISODE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "revrl/agents/policy.h"
#include "revrl/envs/environment.h"

namespace revrl {

struct EpisodeMetrics {
  long length = 0;
  double extrinsic_return = 0.0;
  double intrinsic_return = 0.0;
  long irreversible_events = 0;
  long rac_fallbacks = 0;
  bool truncated = false;
};

struct EpisodeResult {
  Trajectory traj;  // final_obs is always set
  EpisodeMetrics metrics;
  // Per step, filled when EpisodeOptions::keep_choices is set.
  std::vector<std::vector<unsigned char>> masks;
  std::vector<double> logp;
};

struct EpisodeOptions {
  const RacFilter* rac = nullptr;
  bool keep_choices = false;
  long max_steps = -1;  // extra cap on top of the environment's own limit
};

// Resets `env` and runs one full episode.
EpisodeResult run_episode(Environment& env, const Policy& policy, Rng& rng,
                          const EpisodeOptions& opts = {});

struct EpisodeRow {
  std::uint64_t run_seed = 0;
  std::int64_t episode = 0;
  EpisodeMetrics metrics;
  std::int64_t wall_steps = 0;  // cumulative environment steps at episode end
};

void write_episode_metrics_csv(const std::string& path, const std::vector<EpisodeRow>& rows);
std::vector<EpisodeRow> read_episode_metrics_csv(const std::string& path);

}  // namespace revrl

#endif  // REVRL_AGENTS_EPISODE_H_
