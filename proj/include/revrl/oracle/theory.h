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

#ifndef REVRL_ORACLE_THEORY_H_
#define REVRL_ORACLE_THEORY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "revrl/envs/tabular_mdp.h"
#include "revrl/oracle/chain.h"
#include "revrl/oracle/psi.h"

namespace revrl {

struct TheoryCheck {
  std::string name;  // e.g. "empirical>=phi_pi/2", "prop1_K3", "antisymmetry"
  int s = -1;
  int other = -1;  // action, or second state for pair checks
  int third = -1;  // third state for transitivity checks
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
};

struct TheoryReport {
  std::string instance_hash;
  int states = 0;
  int actions = 0;
  double rho = 0.0;
  double tol = 0.0;
  std::vector<TheoryCheck> checks;
  std::vector<std::string> notes;

  bool all_pass() const;
  std::size_t failures() const;
  // Failing checks only unless verbose.
  std::string text(bool verbose = false) const;
};

std::string mdp_hash(const TabularMdp& mdp, const PolicyTable& pi);

// Checks, for every visited state s and action a, the two lower bounds on
// the empirical reversibility (against phi_pi and against rho^K phi_K for
// K = 1..5), antisymmetry of psi on every defined pair, transitivity of the
// psi = 1 relation and its extension through chains of psi >= 1/2 links,
// and the sanity relations phi_K <= phi_{K+1} <= phi and phi_pi <= phi.
TheoryReport verify_theory(const TabularMdp& mdp, const PolicyTable& pi, double tol = 1e-9);

struct TransitivityViolation {
  int s1, s2, s3;
  double psi12, psi23, psi13;
};

// Finds s1, s2, s3 with psi(s1, s2) >= 1/2 and psi(s2, s3) >= 1/2 but
// psi(s1, s3) < 1/2 - margin.
std::optional<TransitivityViolation> find_half_transitivity_violation(
    const PsiTable& psi, double margin = 1e-12);

// The three-cycle with each step leaving the cycle for an absorbing state
// with probability q; the cycle states become transient and the violation
// above survives the infinite-horizon limit.
TabularMdp leaky_three_cycle(double q);

}  // namespace revrl

#endif  // REVRL_ORACLE_THEORY_H_
