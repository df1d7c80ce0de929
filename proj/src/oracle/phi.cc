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

#include "revrl/oracle/phi.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace revrl {

namespace {

void check_indices(const TabularMdp& mdp, int s, int a) {
  if (s < 0 || s >= mdp.states() || a < 0 || a >= mdp.actions()) {
    throw std::invalid_argument("state or action index out of range");
  }
}

// V_k(x) for one target over all x: V_0 = 1[x = s], and
// V_k(x) = 1 if x = s else max_a sum_y P(y|x,a) V_{k-1}(y).
Eigen::VectorXd bellman_reach(const TabularMdp& mdp, int s, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(mdp.states());
  for (int x = 0; x < mdp.states(); ++x) {
    if (x == s) {
      out[x] = 1.0;
      continue;
    }
    double best = 0.0;
    for (int b = 0; b < mdp.actions(); ++b) {
      const double* row = mdp.row(x, b);
      double q = 0.0;
      for (int y = 0; y < mdp.states(); ++y) q += row[y] * v[y];
      best = std::max(best, q);
    }
    out[x] = best;
  }
  return out;
}

double expect_row(const TabularMdp& mdp, int s, int a, const Eigen::VectorXd& v) {
  const double* row = mdp.row(s, a);
  double q = 0.0;
  for (int y = 0; y < mdp.states(); ++y) q += row[y] * v[y];
  return q;
}

Eigen::VectorXd max_return_values(const TabularMdp& mdp, int s, double tol) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mdp.states());
  v[s] = 1.0;
  constexpr int kMaxIter = 1000000;
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd next = bellman_reach(mdp, s, v);
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (change < tol) break;
  }
  // Exact value of the greedy policy is a lower bound at least as tight.
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(mdp.states(), mdp.states());
  for (int x = 0; x < mdp.states(); ++x) {
    int best_a = 0;
    double best = -1.0;
    for (int b = 0; b < mdp.actions(); ++b) {
      const double q = expect_row(mdp, x, b, v);
      if (q > best + 1e-15) {
        best = q;
        best_a = b;
      }
    }
    for (int y = 0; y < mdp.states(); ++y) P(x, y) = mdp.p(x, best_a, y);
  }
  const Eigen::VectorXd h = hitting_probabilities(P, s);
  return v.cwiseMax(h);
}

}  // namespace

double exact_phi_pi(const TabularMdp& mdp, const PolicyTable& pi, int s, int a) {
  check_indices(mdp, s, a);
  const Eigen::VectorXd h = hitting_probabilities(induced_chain(mdp, pi), s);
  return std::min(1.0, expect_row(mdp, s, a, h));
}

Eigen::MatrixXd exact_phi_K_table(const TabularMdp& mdp, int K) {
  if (K < 1) throw std::invalid_argument("exact_phi_K: K must be >= 1");
  Eigen::MatrixXd out(mdp.states(), mdp.actions());
  for (int s = 0; s < mdp.states(); ++s) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mdp.states());
    v[s] = 1.0;
    for (int k = 1; k < K; ++k) v = bellman_reach(mdp, s, v);
    for (int a = 0; a < mdp.actions(); ++a) out(s, a) = expect_row(mdp, s, a, v);
  }
  return out;
}

double exact_phi_K(const TabularMdp& mdp, int s, int a, int K) {
  check_indices(mdp, s, a);
  return exact_phi_K_table(mdp, K)(s, a);
}

Eigen::MatrixXd exact_phi_table(const TabularMdp& mdp, double tol) {
  Eigen::MatrixXd out(mdp.states(), mdp.actions());
  for (int s = 0; s < mdp.states(); ++s) {
    const Eigen::VectorXd v = max_return_values(mdp, s, tol);
    for (int a = 0; a < mdp.actions(); ++a) out(s, a) = std::min(1.0, expect_row(mdp, s, a, v));
  }
  return out;
}

double exact_phi(const TabularMdp& mdp, int s, int a, double tol) {
  check_indices(mdp, s, a);
  return std::min(1.0, expect_row(mdp, s, a, max_return_values(mdp, s, tol)));
}

PhiVariants exact_phi_variants(const TabularMdp& mdp, const PolicyTable& pi, int s, int a,
                               double gamma, int K) {
  check_indices(mdp, s, a);
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("gamma must be in (0, 1)");
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  const Eigen::MatrixXd P = induced_chain(mdp, pi);
  const int n = mdp.states();
  PhiVariants out;

  // x(y) = P(y, s) + gamma sum_{y' != s} P(y, y') x(y') is the discounted
  // first-return mass from y one step later.
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - gamma * P;
  A.col(s) = Eigen::VectorXd::Unit(n, s);
  Eigen::VectorXd b = P.col(s);
  b[s] = 0.0;
  Eigen::VectorXd x = A.fullPivLu().solve(b);
  x[s] = 0.0;
  const double* row = mdp.row(s, a);
  double tail = 0.0;
  for (int y = 0; y < n; ++y) {
    if (y != s) tail += row[y] * x[y];
  }
  out.discounted = gamma * (row[s] + gamma * tail);

  Eigen::RowVectorXd d(n);
  for (int y = 0; y < n; ++y) d[y] = row[y];
  double best = d[s];
  for (int k = 2; k <= K; ++k) {
    d = d * P;
    best = std::max(best, d[s]);
  }
  out.fixed_timestep = best;
  return out;
}

EmpiricalReversibility empirical_reversibility(const TabularMdp& mdp, const PsiTable& psi,
                                               int s, int a) {
  check_indices(mdp, s, a);
  EmpiricalReversibility out;
  const double* row = mdp.row(s, a);
  for (int s2 = 0; s2 < mdp.states(); ++s2) {
    if (row[s2] <= 0) continue;
    if (!psi.is_defined(s2, s)) {
      ++out.skipped;
      continue;
    }
    out.value += row[s2] * psi.value(s2, s);
  }
  return out;
}

EmpiricalReversibility empirical_reversibility(const TabularMdp& mdp, const PolicyTable& pi,
                                               int s, int a) {
  EmpiricalReversibility r = empirical_reversibility(mdp, exact_psi_limit(mdp, pi), s, a);
  if (r.skipped > 0) {
    std::cerr << "warning: empirical_reversibility(" << s << ", " << a << ") skipped "
              << r.skipped << " undefined successor pair(s)\n";
  }
  return r;
}

}  // namespace revrl
