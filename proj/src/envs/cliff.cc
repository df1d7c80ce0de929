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

#include "revrl/envs/cliff.h"

#include <stdexcept>

namespace revrl {

CliffState cliff_initial(const CliffParams& /*p*/) { return CliffState{}; }

CliffTransition cliff_step(const CliffParams& p, const CliffState& s,
                           GridAction action, Rng& rng) {
  if (!s.alive || s.t >= p.max_steps) {
    throw std::logic_error("cliff_step: episode already over");
  }
  CliffTransition out;
  out.state = s;
  Cell c = grid_move(s.pos, action, p.rows, p.cols);
  if (p.p_wind > 0.0 && rng.bernoulli(p.p_wind)) {
    c = grid_move(c, GridAction::kDown, p.rows, p.cols);
  }
  out.state.pos = c;
  ++out.state.t;
  if (cliff_is_cliff(p, c)) {
    out.state.alive = false;
    out.fell = true;
    out.done = true;
  } else {
    out.reward = 1.0;
    out.done = out.state.t >= p.max_steps;
  }
  return out;
}

Observation cliff_observation(const CliffParams& p, const CliffState& s) {
  Observation obs(p.rows * p.cols, 0.0);
  obs[s.pos.row * p.cols + s.pos.col] = 1.0;
  return obs;
}

TabularMdp cliff_to_mdp(const CliffParams& p) {
  const int n = p.rows * p.cols;
  TabularMdp m(n, kGridActionCount);
  for (int s = 0; s < n; ++s) {
    const Cell c{s / p.cols, s % p.cols};
    for (int a = 0; a < kGridActionCount; ++a) {
      if (cliff_is_cliff(p, c)) {
        m.p(s, a, s) = 1.0;
        continue;
      }
      const Cell moved = grid_move(c, static_cast<GridAction>(a), p.rows, p.cols);
      const Cell blown = grid_move(moved, GridAction::kDown, p.rows, p.cols);
      m.p(s, a, moved.row * p.cols + moved.col) += 1.0 - p.p_wind;
      m.p(s, a, blown.row * p.cols + blown.col) += p.p_wind;
    }
  }
  m.initial().assign(static_cast<std::size_t>(n), 0.0);
  m.initial()[0] = 1.0;
  return m;
}

CliffWalk::CliffWalk(CliffParams params) : params_(params) {
  if (params_.rows < 2 || params_.cols < 1 || params_.max_steps <= 0) {
    throw std::invalid_argument("CliffWalk: bad grid or horizon");
  }
  if (params_.p_wind < 0.0 || params_.p_wind > 1.0) {
    throw std::invalid_argument("CliffWalk: p_wind outside [0, 1]");
  }
}

std::unique_ptr<Environment> CliffWalk::clone() const {
  return std::make_unique<CliffWalk>(*this);
}

Observation CliffWalk::reset(Rng& /*rng*/) {
  state_ = cliff_initial(params_);
  done_ = false;
  return cliff_observation(params_, state_);
}

EnvStep CliffWalk::step(int action, Rng& rng) {
  if (done_) throw std::logic_error("CliffWalk::step after episode end");
  if (action < 0 || action >= kGridActionCount) {
    throw std::invalid_argument("CliffWalk::step: action out of range");
  }
  const CliffTransition tr =
      cliff_step(params_, state_, static_cast<GridAction>(action), rng);
  state_ = tr.state;
  done_ = tr.done;
  EnvStep out;
  out.obs = cliff_observation(params_, state_);
  out.reward = tr.reward;
  out.done = tr.done;
  out.truncated = tr.done && !tr.fell;
  out.irreversible_events = tr.fell ? 1 : 0;
  return out;
}

}  // namespace revrl
