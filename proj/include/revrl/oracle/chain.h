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

#ifndef REVRL_ORACLE_CHAIN_H_
#define REVRL_ORACLE_CHAIN_H_

#include <vector>

#include <Eigen/Dense>

#include "revrl/core/rng.h"
#include "revrl/envs/tabular_mdp.h"

namespace revrl {

// pi(a|s) as a states x actions matrix.
using PolicyTable = Eigen::MatrixXd;

// Throws std::invalid_argument if the table has the wrong shape, a negative
// entry, or a row missing sum 1 by more than tol.
void validate_policy(const TabularMdp& mdp, const PolicyTable& pi,
                     double tol = 1e-12);
PolicyTable uniform_policy(const TabularMdp& mdp);
// (1 - eps) * Dirichlet(1) row + eps * uniform, so min entry >= eps / |A|.
PolicyTable epsilon_mixed_policy(const TabularMdp& mdp, double eps, Rng& rng);
double policy_min_prob(const PolicyTable& pi);

// P_pi(s, s') = sum_a pi(a|s) P(s'|s,a).
Eigen::MatrixXd induced_chain(const TabularMdp& mdp, const PolicyTable& pi);
Eigen::VectorXd initial_distribution(const TabularMdp& mdp);

enum class StateClass { kTransient, kRecurrent };

struct ChainAnalysis {
  Eigen::MatrixXd P;
  Eigen::VectorXd mu0;
  // reach(s, s'): s' reachable from s in one or more steps.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> reach;
  std::vector<StateClass> cls;
  std::vector<int> recurrent_class;  // -1 for transient states
  std::vector<bool> visited;         // positive probability under mu0
  int n() const { return static_cast<int>(P.rows()); }
  bool transient(int s) const { return cls[s] == StateClass::kTransient; }
};

ChainAnalysis analyze_chain(const Eigen::MatrixXd& P, const Eigen::VectorXd& mu0);

// Probability of ever reaching `target` (time 0 included) from each state.
// States that cannot reach the target are fixed to 0 before the solve.
Eigen::VectorXd hitting_probabilities(const Eigen::MatrixXd& P, int target);

}  // namespace revrl

#endif  // REVRL_ORACLE_CHAIN_H_
