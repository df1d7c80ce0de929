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

#ifndef REVRL_ORACLE_PHI_H_
#define REVRL_ORACLE_PHI_H_

#include <Eigen/Dense>

#include "revrl/envs/tabular_mdp.h"
#include "revrl/oracle/chain.h"
#include "revrl/oracle/psi.h"

namespace revrl {

// Probability of revisiting s after taking a in s and following pi.
double exact_phi_pi(const TabularMdp& mdp, const PolicyTable& pi, int s, int a);

// Maximum over policies of the probability of being back in s within K
// steps of (s, a).
double exact_phi_K(const TabularMdp& mdp, int s, int a, int K);
// All actions at once; row s, column a.
Eigen::MatrixXd exact_phi_K_table(const TabularMdp& mdp, int K);

// Same quantity without a step limit. Value iteration to tol, then the
// greedy policy is evaluated exactly and the larger value kept.
double exact_phi(const TabularMdp& mdp, int s, int a, double tol = 1e-10);
Eigen::MatrixXd exact_phi_table(const TabularMdp& mdp, double tol = 1e-10);

struct PhiVariants {
  double discounted = 0.0;      // sum_k gamma^k P(first return at step k)
  double fixed_timestep = 0.0;  // max_{1 <= k <= K} P(s_{t+k} = s)
};

PhiVariants exact_phi_variants(const TabularMdp& mdp, const PolicyTable& pi, int s, int a,
                               double gamma, int K);

struct EmpiricalReversibility {
  double value = 0.0;
  int skipped = 0;  // successor states whose pair with s is undefined
};

// E_{s' ~ P(s, a)} psi(s', s) against a precomputed limit table.
EmpiricalReversibility empirical_reversibility(const TabularMdp& mdp, const PsiTable& psi,
                                               int s, int a);
EmpiricalReversibility empirical_reversibility(const TabularMdp& mdp, const PolicyTable& pi,
                                               int s, int a);

}  // namespace revrl

#endif  // REVRL_ORACLE_PHI_H_
