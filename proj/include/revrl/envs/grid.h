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

#ifndef REVRL_ENVS_GRID_H_
#define REVRL_ENVS_GRID_H_

namespace revrl {

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

enum class GridAction : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
inline constexpr int kGridActionCount = 4;

// Moves one cell; moves that would leave the grid keep the agent in place.
inline Cell grid_move(Cell c, GridAction a, int rows, int cols) {
  switch (a) {
    case GridAction::kUp: if (c.row > 0) --c.row; break;
    case GridAction::kDown: if (c.row + 1 < rows) ++c.row; break;
    case GridAction::kLeft: if (c.col > 0) --c.col; break;
    case GridAction::kRight: if (c.col + 1 < cols) ++c.col; break;
  }
  return c;
}

}  // namespace revrl

#endif  // REVRL_ENVS_GRID_H_
