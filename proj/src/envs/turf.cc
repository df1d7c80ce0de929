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

#include "revrl/envs/turf.h"

#include <array>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace revrl {

namespace {

// Mirrors assets/turf_map.txt.
constexpr const char* kDefaultMap =
    "GGGGAPPPGG\n"
    "GGGGGGGPGG\n"
    "GGGGGGGPGG\n"
    "GGGGGGGPGG\n"
    "GGGGGGGPGG\n"
    "GGGGGGGPGG\n"
    "GGGGGGGPGG\n"
    "GGGGGGGPGG\n"
    "GGGGGGGPGG\n"
    "GGGGTPPPGG\n";

}  // namespace

int TurfMap::grass_count() const {
  int n = 0;
  for (TurfCell c : cells) n += c == TurfCell::kGrass;
  return n;
}

TurfMap parse_turf_map(std::istream& in) {
  TurfMap map;
  int starts = 0;
  int goals = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (map.cols == 0) map.cols = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != map.cols) {
      throw std::invalid_argument("turf map: ragged row " +
                                  std::to_string(map.rows));
    }
    for (int c = 0; c < map.cols; ++c) {
      switch (line[c]) {
        case 'P': map.cells.push_back(TurfCell::kPath); break;
        case 'G': map.cells.push_back(TurfCell::kGrass); break;
        case 'T':
          map.cells.push_back(TurfCell::kGoal);
          map.goal = {map.rows, c};
          ++goals;
          break;
        case 'A':
          map.cells.push_back(TurfCell::kPath);
          map.start = {map.rows, c};
          ++starts;
          break;
        default:
          throw std::invalid_argument(std::string("turf map: bad cell '") +
                                      line[c] + "'");
      }
    }
    ++map.rows;
  }
  if (starts != 1 || goals != 1) {
    throw std::invalid_argument("turf map: need exactly one A and one T");
  }
  return map;
}

TurfMap parse_turf_map(const std::string& text) {
  std::istringstream in(text);
  return parse_turf_map(in);
}

TurfMap load_turf_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("turf map: cannot open " + path);
  return parse_turf_map(in);
}

const TurfMap& default_turf_map() {
  static const TurfMap map = parse_turf_map(std::string(kDefaultMap));
  return map;
}

TurfGrid turf_initial(const TurfMap& map) {
  TurfGrid g;
  g.cells = map.cells;
  g.agent = map.start;
  return g;
}

TurfTransition turf_step(const TurfMap& map, const TurfGrid& grid,
                         GridAction action, int max_steps) {
  TurfTransition out;
  out.grid = grid;
  TurfGrid& g = out.grid;
  g.agent = grid_move(grid.agent, action, map.rows, map.cols);
  ++g.t;
  TurfCell& cell = g.cells[g.agent.row * map.cols + g.agent.col];
  if (cell == TurfCell::kGrass) {
    cell = TurfCell::kSpoiled;
    ++g.spoiled;
    out.spoiled_cell = true;
  }
  if (cell == TurfCell::kGoal) {
    out.reward = 1.0;
    out.reached_goal = true;
    out.done = true;
  }
  if (g.t >= max_steps) out.done = true;
  return out;
}

Observation turf_observation(const TurfMap& map, const TurfGrid& grid) {
  const int n = map.rows * map.cols;
  Observation obs(3 * n, 0.0);
  obs[grid.agent.row * map.cols + grid.agent.col] = 1.0;
  for (int i = 0; i < n; ++i) {
    if (grid.cells[i] == TurfCell::kGrass) obs[n + i] = 1.0;
    if (grid.cells[i] == TurfCell::kSpoiled) obs[2 * n + i] = 1.0;
  }
  return obs;
}

Turf::Turf(TurfMap map, int max_steps)
    : map_(std::move(map)), max_steps_(max_steps) {
  if (map_.rows == 0) throw std::invalid_argument("Turf: empty map");
}

std::unique_ptr<Environment> Turf::clone() const {
  return std::make_unique<Turf>(*this);
}

Observation Turf::reset(Rng& /*rng*/) {
  grid_ = turf_initial(map_);
  done_ = false;
  return turf_observation(map_, grid_);
}

EnvStep Turf::step(int action, Rng& /*rng*/) {
  if (done_) throw std::logic_error("Turf::step after episode end");
  if (action < 0 || action >= kGridActionCount) {
    throw std::invalid_argument("Turf::step: action out of range");
  }
  TurfTransition tr =
      turf_step(map_, grid_, static_cast<GridAction>(action), max_steps_);
  grid_ = std::move(tr.grid);
  done_ = tr.done;
  EnvStep out;
  out.obs = turf_observation(map_, grid_);
  out.reward = tr.reward;
  out.done = tr.done;
  out.truncated = tr.done && !tr.reached_goal;
  out.irreversible_events = tr.spoiled_cell ? 1 : 0;
  return out;
}

TurfMdp turf_to_mdp(const TurfMap& map, std::size_t max_states) {
  auto key = [&](const TurfGrid& g) {
    std::string k;
    k.reserve(g.cells.size() + 2);
    k.push_back(static_cast<char>(g.agent.row));
    k.push_back(static_cast<char>(g.agent.col));
    for (TurfCell c : g.cells) k.push_back(static_cast<char>(c));
    return k;
  };
  TurfMdp out;
  std::map<std::string, int> ids;
  std::vector<std::array<int, kGridActionCount>> next;
  std::queue<int> frontier;
  auto intern = [&](TurfGrid g) {
    g.t = 0;
    const std::string k = key(g);
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    if (out.states.size() >= max_states) {
      throw std::runtime_error("turf_to_mdp: state space too large");
    }
    const int id = static_cast<int>(out.states.size());
    ids.emplace(k, id);
    out.states.push_back(std::move(g));
    next.emplace_back();
    frontier.push(id);
    return id;
  };
  intern(turf_initial(map));
  while (!frontier.empty()) {
    const int id = frontier.front();
    frontier.pop();
    for (int a = 0; a < kGridActionCount; ++a) {
      const TurfGrid& g = out.states[id];
      if (g.agent == map.goal) {
        next[id][a] = id;
        continue;
      }
      TurfTransition tr =
          turf_step(map, g, static_cast<GridAction>(a), 1 << 30);
      next[id][a] = intern(std::move(tr.grid));
    }
  }
  const int n = static_cast<int>(out.states.size());
  out.mdp = TabularMdp(n, kGridActionCount);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < kGridActionCount; ++a) out.mdp.p(s, a, next[s][a]) = 1.0;
  }
  out.mdp.initial().assign(n, 0.0);
  out.mdp.initial()[0] = 1.0;
  return out;
}

}  // namespace revrl
