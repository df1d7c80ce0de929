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

#ifndef REVRL_ENVS_CLIFF_H_
#define REVRL_ENVS_CLIFF_H_

#include "revrl/envs/environment.h"
#include "revrl/envs/grid.h"
#include "revrl/envs/tabular_mdp.h"

namespace revrl {

// Windy cliff walk: rows x cols grid whose bottom row is the cliff. The agent
// starts in the top-left corner. After each move the wind pushes it one cell
// down with probability p_wind. +1 per step survived, at most max_steps.
struct CliffParams {
  int rows = 6;
  int cols = 8;
  int max_steps = 250;
  double p_wind = 0.0;
};

struct CliffState {
  Cell pos;
  int t = 0;
  bool alive = true;
};

struct CliffTransition {
  CliffState state;
  double reward = 0.0;
  bool done = false;
  bool fell = false;
};

inline bool cliff_is_cliff(const CliffParams& p, Cell c) {
  return c.row == p.rows - 1;
}

CliffState cliff_initial(const CliffParams& p);
CliffTransition cliff_step(const CliffParams& p, const CliffState& s,
                           GridAction action, Rng& rng);
Observation cliff_observation(const CliffParams& p, const CliffState& s);

// Position dynamics without the horizon; cliff cells are absorbing.
TabularMdp cliff_to_mdp(const CliffParams& p);

class CliffWalk final : public Environment {
 public:
  explicit CliffWalk(CliffParams params = {});

  Observation reset(Rng& rng) override;
  EnvStep step(int action, Rng& rng) override;
  int action_count() const override { return kGridActionCount; }
  int observation_size() const override { return params_.rows * params_.cols; }
  std::string name() const override { return "cliff"; }
  std::unique_ptr<Environment> clone() const override;

  const CliffState& state() const { return state_; }
  const CliffParams& params() const { return params_; }

 private:
  CliffParams params_;
  CliffState state_;
  bool done_ = true;
};

}  // namespace revrl

#endif  // REVRL_ENVS_CLIFF_H_
