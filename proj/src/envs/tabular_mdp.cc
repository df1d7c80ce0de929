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

#include "revrl/envs/tabular_mdp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace revrl {

TabularMdp::TabularMdp(int n_states, int n_actions)
    : n_states_(n_states),
      n_actions_(n_actions),
      p_(static_cast<std::size_t>(n_states) * n_actions * n_states, 0.0),
      mu0_(n_states, 0.0) {
  if (n_states <= 0 || n_actions <= 0) {
    throw std::invalid_argument("TabularMdp: sizes must be positive");
  }
}

void TabularMdp::validate(double tol) const {
  auto check = [&](const double* row, const std::string& what) {
    double sum = 0.0;
    for (int j = 0; j < n_states_; ++j) {
      if (!(row[j] >= 0.0)) {
        throw std::invalid_argument(what + ": negative or NaN entry");
      }
      sum += row[j];
    }
    if (std::abs(sum - 1.0) > tol) {
      throw std::invalid_argument(what + ": sums to " + std::to_string(sum));
    }
  };
  if (static_cast<int>(mu0_.size()) != n_states_) {
    throw std::invalid_argument("TabularMdp: initial distribution size");
  }
  check(mu0_.data(), "initial distribution");
  for (int s = 0; s < n_states_; ++s) {
    for (int a = 0; a < n_actions_; ++a) {
      check(row(s, a),
            "P[" + std::to_string(s) + "," + std::to_string(a) + ",:]");
    }
  }
}

int mdp_step(const TabularMdp& mdp, int s, int a, Rng& rng) {
  if (s < 0 || s >= mdp.states() || a < 0 || a >= mdp.actions()) {
    throw std::invalid_argument("mdp_step: index out of range");
  }
  return static_cast<int>(
      rng.categorical(std::span<const double>(mdp.row(s, a), mdp.states())));
}

int mdp_initial_state(const TabularMdp& mdp, Rng& rng) {
  return static_cast<int>(rng.categorical(mdp.initial()));
}

namespace {

void dirichlet(double alpha, Rng& rng, double* out, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = rng.gamma(alpha);
    sum += out[i];
  }
  for (int i = 0; i < n; ++i) out[i] /= sum;
}

}  // namespace

TabularMdp random_dirichlet_mdp(int n_states, int n_actions, double alpha,
                                Rng& rng) {
  TabularMdp mdp(n_states, n_actions);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      dirichlet(alpha, rng, &mdp.p(s, a, 0), n_states);
    }
  }
  dirichlet(alpha, rng, mdp.initial().data(), n_states);
  return mdp;
}

TabularMdp one_way_chain(int n) {
  TabularMdp mdp(n, 1);
  for (int s = 0; s < n; ++s) mdp.p(s, 0, std::min(s + 1, n - 1)) = 1.0;
  mdp.initial()[0] = 1.0;
  return mdp;
}

TabularMdp three_cycle() {
  TabularMdp mdp(3, 1);
  for (int s = 0; s < 3; ++s) mdp.p(s, 0, (s + 1) % 3) = 1.0;
  mdp.initial() = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  return mdp;
}

Observation one_hot(int index, int size) {
  Observation v(size, 0.0);
  v[index] = 1.0;
  return v;
}

TabularEnv::TabularEnv(TabularMdp mdp, int max_steps)
    : mdp_(std::move(mdp)), max_steps_(max_steps) {
  mdp_.validate();
  absorbing_.resize(mdp_.states());
  for (int s = 0; s < mdp_.states(); ++s) {
    bool absorbing = true;
    for (int a = 0; a < mdp_.actions(); ++a) absorbing &= mdp_.p(s, a, s) == 1.0;
    absorbing_[s] = absorbing;
  }
}

std::unique_ptr<Environment> TabularEnv::clone() const {
  return std::make_unique<TabularEnv>(*this);
}

Observation TabularEnv::reset(Rng& rng) {
  s_ = mdp_initial_state(mdp_, rng);
  t_ = 0;
  done_ = false;
  return one_hot(s_, mdp_.states());
}

EnvStep TabularEnv::step(int action, Rng& rng) {
  if (done_) throw std::logic_error("TabularEnv::step after episode end");
  s_ = mdp_step(mdp_, s_, action, rng);
  ++t_;
  EnvStep out;
  out.obs = one_hot(s_, mdp_.states());
  const bool absorbed = absorbing_[s_];
  out.done = absorbed || t_ >= max_steps_;
  out.truncated = out.done && !absorbed;
  done_ = out.done;
  return out;
}

}  // namespace revrl
