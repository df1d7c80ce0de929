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

#ifndef REVRL_ENVS_TABULAR_MDP_H_
#define REVRL_ENVS_TABULAR_MDP_H_

#include <vector>

#include "revrl/envs/environment.h"

namespace revrl {

// Finite MDP: P(s' | s, a) stored densely as [s][a][s'].
class TabularMdp {
 public:
  TabularMdp() = default;
  TabularMdp(int n_states, int n_actions);

  int states() const { return n_states_; }
  int actions() const { return n_actions_; }

  double p(int s, int a, int s2) const { return p_[index(s, a, s2)]; }
  double& p(int s, int a, int s2) { return p_[index(s, a, s2)]; }
  const double* row(int s, int a) const { return &p_[index(s, a, 0)]; }

  const std::vector<double>& initial() const { return mu0_; }
  std::vector<double>& initial() { return mu0_; }

  // Throws std::invalid_argument when any row or the initial distribution
  // has a negative entry or misses sum 1 by more than `tol`.
  void validate(double tol = 1e-12) const;

 private:
  std::size_t index(int s, int a, int s2) const {
    return (static_cast<std::size_t>(s) * n_actions_ + a) * n_states_ + s2;
  }

  int n_states_ = 0;
  int n_actions_ = 0;
  std::vector<double> p_;
  std::vector<double> mu0_;
};

int mdp_step(const TabularMdp& mdp, int s, int a, Rng& rng);
int mdp_initial_state(const TabularMdp& mdp, Rng& rng);

// Random MDP with Dirichlet(alpha) rows and a Dirichlet initial distribution.
TabularMdp random_dirichlet_mdp(int n_states, int n_actions, double alpha,
                                Rng& rng);

// Deterministic chain 0 -> 1 -> ... -> n-1 for every action, last state
// absorbing, start in 0.
TabularMdp one_way_chain(int n);
// Deterministic cycle 0 -> 1 -> 2 -> 0 for every action, uniform start.
TabularMdp three_cycle();

// Episodic wrapper: one-hot state observations, ends when an absorbing
// state (P(s|s,a)=1 for all a) is entered or after max_steps.
class TabularEnv final : public Environment {
 public:
  TabularEnv(TabularMdp mdp, int max_steps);

  Observation reset(Rng& rng) override;
  EnvStep step(int action, Rng& rng) override;
  int action_count() const override { return mdp_.actions(); }
  int observation_size() const override { return mdp_.states(); }
  std::string name() const override { return "tabular"; }
  std::unique_ptr<Environment> clone() const override;

  int state() const { return s_; }
  const TabularMdp& mdp() const { return mdp_; }

 private:
  TabularMdp mdp_;
  int max_steps_;
  std::vector<bool> absorbing_;
  int s_ = 0;
  int t_ = 0;
  bool done_ = true;
};

Observation one_hot(int index, int size);

}  // namespace revrl

#endif  // REVRL_ENVS_TABULAR_MDP_H_
