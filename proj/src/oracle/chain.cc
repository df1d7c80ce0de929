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

#include "revrl/oracle/chain.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace revrl {

void validate_policy(const TabularMdp& mdp, const PolicyTable& pi, double tol) {
  if (pi.rows() != mdp.states() || pi.cols() != mdp.actions()) {
    throw std::invalid_argument("policy table shape does not match the MDP");
  }
  for (Eigen::Index s = 0; s < pi.rows(); ++s) {
    if ((pi.row(s).array() < 0).any()) {
      throw std::invalid_argument("policy has a negative entry in state " + std::to_string(s));
    }
    if (std::abs(pi.row(s).sum() - 1.0) > tol) {
      throw std::invalid_argument("policy row " + std::to_string(s) + " does not sum to 1");
    }
  }
}

PolicyTable uniform_policy(const TabularMdp& mdp) {
  return PolicyTable::Constant(mdp.states(), mdp.actions(), 1.0 / mdp.actions());
}

PolicyTable epsilon_mixed_policy(const TabularMdp& mdp, double eps, Rng& rng) {
  if (eps < 0 || eps > 1) throw std::invalid_argument("epsilon outside [0, 1]");
  PolicyTable pi(mdp.states(), mdp.actions());
  for (int s = 0; s < mdp.states(); ++s) {
    double total = 0;
    for (int a = 0; a < mdp.actions(); ++a) total += pi(s, a) = rng.gamma(1.0);
    for (int a = 0; a < mdp.actions(); ++a) {
      pi(s, a) = (1 - eps) * pi(s, a) / total + eps / mdp.actions();
    }
  }
  return pi;
}

double policy_min_prob(const PolicyTable& pi) { return pi.minCoeff(); }

Eigen::MatrixXd induced_chain(const TabularMdp& mdp, const PolicyTable& pi) {
  validate_policy(mdp, pi, 1e-9);
  const int n = mdp.states();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < mdp.actions(); ++a) {
      if (pi(s, a) == 0) continue;
      for (int s2 = 0; s2 < n; ++s2) P(s, s2) += pi(s, a) * mdp.p(s, a, s2);
    }
  }
  return P;
}

Eigen::VectorXd initial_distribution(const TabularMdp& mdp) {
  Eigen::VectorXd mu(mdp.states());
  for (int s = 0; s < mdp.states(); ++s) mu[s] = mdp.initial()[s];
  return mu;
}

ChainAnalysis analyze_chain(const Eigen::MatrixXd& P, const Eigen::VectorXd& mu0) {
  const int n = static_cast<int>(P.rows());
  if (P.cols() != n || mu0.size() != n) throw std::invalid_argument("analyze_chain: shapes");
  ChainAnalysis c;
  c.P = P;
  c.mu0 = mu0;
  c.reach = (P.array() > 0).matrix();
  // Warshall closure.
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!c.reach(i, k)) continue;
      for (int j = 0; j < n; ++j) c.reach(i, j) = c.reach(i, j) || c.reach(k, j);
    }
  }
  c.cls.assign(n, StateClass::kRecurrent);
  c.recurrent_class.assign(n, -1);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (c.reach(s, t) && !c.reach(t, s)) {
        c.cls[s] = StateClass::kTransient;
        break;
      }
    }
  }
  int next_class = 0;
  for (int s = 0; s < n; ++s) {
    if (c.cls[s] != StateClass::kRecurrent || c.recurrent_class[s] >= 0) continue;
    for (int t = 0; t < n; ++t) {
      if (t == s || (c.reach(s, t) && c.reach(t, s))) c.recurrent_class[t] = next_class;
    }
    ++next_class;
  }
  c.visited.assign(n, false);
  for (int s = 0; s < n; ++s) {
    if (mu0[s] <= 0) continue;
    c.visited[s] = true;
    for (int t = 0; t < n; ++t) {
      if (c.reach(s, t)) c.visited[t] = true;
    }
  }
  return c;
}

Eigen::VectorXd hitting_probabilities(const Eigen::MatrixXd& P, int target) {
  const int n = static_cast<int>(P.rows());
  if (target < 0 || target >= n) throw std::invalid_argument("hitting: target out of range");
  // Backward reachability to the target.
  std::vector<bool> can(n, false);
  can[target] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < n; ++x) {
      if (can[x]) continue;
      for (int y = 0; y < n; ++y) {
        if (can[y] && P(x, y) > 0) {
          can[x] = changed = true;
          break;
        }
      }
    }
  }
  std::vector<int> u;
  for (int x = 0; x < n; ++x) {
    if (can[x] && x != target) u.push_back(x);
  }
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  h[target] = 1.0;
  if (u.empty()) return h;
  const int m = static_cast<int>(u.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    b[i] = P(u[i], target);
    for (int j = 0; j < m; ++j) A(i, j) -= P(u[i], u[j]);
  }
  Eigen::VectorXd x = A.fullPivLu().solve(b);
  if (!x.allFinite()) throw std::runtime_error("hitting: singular system");
  for (int i = 0; i < m; ++i) h[u[i]] = std::clamp(x[i], 0.0, 1.0);
  return h;
}

}  // namespace revrl
