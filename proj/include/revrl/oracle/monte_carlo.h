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

#ifndef REVRL_ORACLE_MONTE_CARLO_H_
#define REVRL_ORACLE_MONTE_CARLO_H_

#include <cstdint>

#include "revrl/core/rng.h"
#include "revrl/envs/tabular_mdp.h"
#include "revrl/oracle/chain.h"

namespace revrl {

struct McPsiEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  // delta method for the ratio of means
  double mean_forward = 0.0;
  double mean_backward = 0.0;
  std::int64_t trajectories = 0;
};

// Samples trajectories of T states (s_0 .. s_{T-1}) by drawing actions from
// pi and successors from the MDP, counts ordered index pairs (t < t') with
// s_t = s, s_t' = s2 and the reverse, and returns the ratio of the totals.
McPsiEstimate monte_carlo_psi_T(const TabularMdp& mdp, const PolicyTable& pi, int s, int s2,
                                int T, std::int64_t n_trajectories, Rng& rng);

}  // namespace revrl

#endif  // REVRL_ORACLE_MONTE_CARLO_H_
