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

#include "revrl/agents/episode.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "revrl/core/io.h"

namespace revrl {

EpisodeResult run_episode(Environment& env, const Policy& policy, Rng& rng,
                          const EpisodeOptions& opts) {
  if (policy.action_count() != env.action_count()) {
    throw std::invalid_argument("run_episode: policy and environment disagree on actions");
  }
  EpisodeResult r;
  Observation obs = env.reset(rng);
  r.traj.seed = rng.seed();
  for (;;) {
    ActionChoice c = choose_action(policy, obs, rng, opts.rac);
    EnvStep st = env.step(c.action, rng);
    const bool capped = opts.max_steps > 0 && r.metrics.length + 1 >= opts.max_steps;
    const bool done = st.done || capped;
    r.traj.steps.push_back({std::move(obs), c.action, st.reward, done});
    EpisodeMetrics& m = r.metrics;
    ++m.length;
    m.extrinsic_return += st.reward - st.intrinsic;
    m.intrinsic_return += st.intrinsic;
    m.irreversible_events += st.irreversible_events;
    m.rac_fallbacks += c.fallback;
    if (opts.keep_choices) {
      r.logp.push_back(std::log(c.probs[static_cast<std::size_t>(c.action)]));
      r.masks.push_back(std::move(c.mask));
    }
    obs = std::move(st.obs);
    if (done) {
      m.truncated = st.truncated || (capped && !st.done);
      break;
    }
  }
  r.traj.final_obs = std::move(obs);
  return r;
}

namespace {
const std::vector<std::string> kHeader{"run_seed",         "episode",          "length",
                                       "extrinsic_return", "intrinsic_return", "irreversible_events",
                                       "wall_steps"};
}

void write_episode_metrics_csv(const std::string& path, const std::vector<EpisodeRow>& rows) {
  CsvTable t(kHeader);
  for (const EpisodeRow& r : rows) {
    t.row({std::to_string(r.run_seed), std::to_string(r.episode),
           std::to_string(r.metrics.length), format_real(r.metrics.extrinsic_return),
           format_real(r.metrics.intrinsic_return), std::to_string(r.metrics.irreversible_events),
           std::to_string(r.wall_steps)});
  }
  t.write(path);
}

std::vector<EpisodeRow> read_episode_metrics_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty metrics file");
  std::vector<EpisodeRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f[7];
    for (auto& x : f) {
      if (!std::getline(ls, x, ',')) throw std::runtime_error(path + ": short metrics row");
    }
    EpisodeRow r;
    r.run_seed = std::stoull(f[0]);
    r.episode = std::stoll(f[1]);
    r.metrics.length = std::stol(f[2]);
    r.metrics.extrinsic_return = std::stod(f[3]);
    r.metrics.intrinsic_return = std::stod(f[4]);
    r.metrics.irreversible_events = std::stol(f[5]);
    r.wall_steps = std::stoll(f[6]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace revrl
