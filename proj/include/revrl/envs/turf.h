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

#ifndef REVRL_ENVS_TURF_H_
#define REVRL_ENVS_TURF_H_

#include <istream>
#include <string>
#include <vector>

#include "revrl/envs/environment.h"
#include "revrl/envs/grid.h"
#include "revrl/envs/tabular_mdp.h"

namespace revrl {

enum class TurfCell : unsigned char { kPath, kGrass, kSpoiled, kGoal };

// Static layout parsed from the text map format: one row per line, one
// character per cell, P path, G grass, T target, A agent start (on path).
struct TurfMap {
  int rows = 0;
  int cols = 0;
  std::vector<TurfCell> cells;  // row-major
  Cell start;
  Cell goal;

  TurfCell at(Cell c) const { return cells[c.row * cols + c.col]; }
  int grass_count() const;
};

TurfMap parse_turf_map(std::istream& in);
TurfMap parse_turf_map(const std::string& text);
TurfMap load_turf_map(const std::string& path);
// The 10x10 layout shipped in assets/turf_map.txt, compiled in.
const TurfMap& default_turf_map();

struct TurfGrid {
  std::vector<TurfCell> cells;  // current cell types, row-major
  Cell agent;
  int t = 0;
  int spoiled = 0;
};

struct TurfTransition {
  TurfGrid grid;
  double reward = 0.0;
  bool done = false;
  bool reached_goal = false;
  bool spoiled_cell = false;
};

inline constexpr int kTurfMaxSteps = 120;

TurfGrid turf_initial(const TurfMap& map);
TurfTransition turf_step(const TurfMap& map, const TurfGrid& grid,
                         GridAction action, int max_steps = kTurfMaxSteps);

// Channels agent, grass, spoiled; each rows*cols, one-hot per cell.
Observation turf_observation(const TurfMap& map, const TurfGrid& grid);

class Turf final : public Environment {
 public:
  explicit Turf(TurfMap map = default_turf_map(),
                int max_steps = kTurfMaxSteps);

  Observation reset(Rng& rng) override;
  EnvStep step(int action, Rng& rng) override;
  int action_count() const override { return kGridActionCount; }
  int observation_size() const override { return 3 * map_.rows * map_.cols; }
  std::string name() const override { return "turf"; }
  std::unique_ptr<Environment> clone() const override;

  const TurfMap& map() const { return map_; }
  const TurfGrid& grid() const { return grid_; }

 private:
  TurfMap map_;
  int max_steps_;
  TurfGrid grid_;
  bool done_ = true;
};

// Full Turf dynamics (agent cell + spoiled set) as a tabular MDP over the
// states reachable from the start; the goal is absorbing and the time limit
// is dropped. Only practical for maps with a handful of grass cells.
struct TurfMdp {
  TabularMdp mdp;
  std::vector<TurfGrid> states;  // index -> grid
};
TurfMdp turf_to_mdp(const TurfMap& map, std::size_t max_states = 200000);

}  // namespace revrl

#endif  // REVRL_ENVS_TURF_H_
