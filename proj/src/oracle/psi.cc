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

#include "revrl/oracle/psi.h"

#include <cmath>
#include <sstream>
#include <vector>

namespace revrl {

UndefinedPairError::UndefinedPairError(int s_, int s2_)
    : std::domain_error("precedence undefined for pair (" + std::to_string(s_) + ", " +
                        std::to_string(s2_) + "): states never co-occur"),
      s(s_),
      s2(s2_) {}

double PsiTable::at(int s, int s2) const {
  if (s < 0 || s >= n() || s2 < 0 || s2 >= n()) throw std::out_of_range("PsiTable: index");
  if (!defined(s, s2)) throw UndefinedPairError(s, s2);
  return value(s, s2);
}

std::optional<double> PsiTable::get(int s, int s2) const {
  if (s < 0 || s >= n() || s2 < 0 || s2 >= n()) throw std::out_of_range("PsiTable: index");
  if (!defined(s, s2)) return std::nullopt;
  return value(s, s2);
}

Eigen::MatrixXd precedence_counts(const Eigen::MatrixXd& P, const Eigen::VectorXd& mu0,
                                  std::int64_t T, std::int64_t w) {
  const Eigen::Index n = P.rows();
  if (T < 1) throw std::invalid_argument("precedence_counts: T must be >= 1");
  if (w == 0) return Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  if (w < 0 || w >= T - 1) {
    // C_{T+1} = C_T + N_T, N_{T+1} = (N_T + diag(d_T)) P, N_1 = diag(d_0) P.
    Eigen::VectorXd d = mu0;
    Eigen::MatrixXd N = d.asDiagonal() * P;
    for (std::int64_t t = 1; t < T; ++t) {
      C += N;
      d = (d.transpose() * P).transpose();
      Eigen::MatrixXd next = N * P;
      next.noalias() += d.asDiagonal() * P;
      N = std::move(next);
    }
    return C;
  }
  // S_m = sum_{k=1..m} P^k for m <= w; C = sum_t diag(d_t) S_min(w, T-1-t).
  std::vector<Eigen::MatrixXd> S(static_cast<std::size_t>(w) + 1);
  S[0] = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd Pk = Eigen::MatrixXd::Identity(n, n);
  for (std::int64_t m = 1; m <= w; ++m) {
    Pk = Pk * P;
    S[m] = S[m - 1] + Pk;
  }
  Eigen::VectorXd d = mu0;
  for (std::int64_t t = 0; t + 1 < T; ++t) {
    const std::int64_t m = std::min(w, T - 1 - t);
    C.noalias() += d.asDiagonal() * S[m];
    d = (d.transpose() * P).transpose();
  }
  return C;
}

PsiTable psi_from_counts(const Eigen::MatrixXd& C) {
  const Eigen::Index n = C.rows();
  PsiTable t;
  t.value = Eigen::MatrixXd::Zero(n, n);
  t.defined.setConstant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double den = C(i, j) + C(j, i);
      if (den > 0) {
        t.defined(i, j) = true;
        t.value(i, j) = i == j ? 0.5 : C(i, j) / den;
      }
    }
  }
  return t;
}

PsiTable exact_psi_T_table(const TabularMdp& mdp, const PolicyTable& pi, std::int64_t T,
                           std::int64_t w) {
  return psi_from_counts(precedence_counts(induced_chain(mdp, pi), initial_distribution(mdp), T, w));
}

double exact_psi_T(const TabularMdp& mdp, const PolicyTable& pi, int s, int s2,
                   std::int64_t T) {
  return exact_psi_T_table(mdp, pi, T).at(s, s2);
}

double exact_psi_windowed(const TabularMdp& mdp, const PolicyTable& pi, int s, int s2,
                          std::int64_t T, std::int64_t w) {
  if (w < 1) throw std::invalid_argument("exact_psi_windowed: w must be >= 1");
  return exact_psi_T_table(mdp, pi, T, w).at(s, s2);
}

PsiDoubling exact_psi(const TabularMdp& mdp, const PolicyTable& pi, int s, int s2,
                      double tol, std::int64_t max_T) {
  const Eigen::MatrixXd P = induced_chain(mdp, pi);
  Eigen::VectorXd d = initial_distribution(mdp);
  const Eigen::Index n = P.rows();
  if (s < 0 || s >= n || s2 < 0 || s2 >= n) throw std::invalid_argument("exact_psi: index");
  // Same recursion as precedence_counts, sampled at powers of two.
  Eigen::MatrixXd N = d.asDiagonal() * P;
  double fwd = 0, bwd = 0;
  std::optional<double> prev;
  PsiDoubling out;
  std::int64_t next_check = 2;
  for (std::int64_t T = 1; T < max_T; ++T) {
    fwd += N(s, s2);
    bwd += N(s2, s);
    d = (d.transpose() * P).transpose();
    Eigen::MatrixXd next = N * P;
    next.noalias() += d.asDiagonal() * P;
    N = std::move(next);
    if (T + 1 != next_check) continue;
    next_check *= 2;
    if (fwd + bwd <= 0) continue;
    const double cur = s == s2 ? 0.5 : fwd / (fwd + bwd);
    if (prev) {
      out.last_change = std::abs(cur - *prev);
      // Pairs can first co-occur only within n steps; do not stop before.
      if (out.last_change < tol && T + 1 > 2 * (n + 1)) {
        out.value = cur;
        out.T = T + 1;
        return out;
      }
    }
    prev = cur;
  }
  if (!prev) throw UndefinedPairError(s, s2);
  std::ostringstream msg;
  msg << "exact_psi: no convergence for (" << s << ", " << s2 << ") up to T = " << max_T
      << ", last change " << out.last_change << ", last value " << *prev;
  throw ConvergenceError(msg.str());
}

PsiTable exact_psi_limit(const ChainAnalysis& c) {
  const int n = c.n();
  PsiTable t;
  t.value = Eigen::MatrixXd::Zero(n, n);
  t.defined.setConstant(n, n, false);

  std::vector<int> tr;
  std::vector<int> pos(n, -1);
  for (int s = 0; s < n; ++s) {
    if (c.transient(s)) {
      pos[s] = static_cast<int>(tr.size());
      tr.push_back(s);
    }
  }
  const int m = static_cast<int>(tr.size());
  Eigen::MatrixXd Nmat;
  Eigen::VectorXd g;
  if (m > 0) {
    Eigen::MatrixXd Q(m, m);
    Eigen::VectorXd mu(m);
    for (int i = 0; i < m; ++i) {
      mu[i] = c.mu0[tr[i]];
      for (int j = 0; j < m; ++j) Q(i, j) = c.P(tr[i], tr[j]);
    }
    Nmat = (Eigen::MatrixXd::Identity(m, m) - Q).fullPivLu().solve(Eigen::MatrixXd::Identity(m, m));
    g = (mu.transpose() * Nmat).transpose();
  }
  // Limit pair count between two transient states, with structural zeros.
  auto count = [&](int s, int s2) {
    if (!c.visited[s] || !c.reach(s, s2)) return 0.0;
    const int i = pos[s], j = pos[s2];
    const double v = g[i] * (Nmat(i, j) - (i == j ? 1.0 : 0.0));
    return v > 0 ? v : 0.0;
  };

  for (int s = 0; s < n; ++s) {
    for (int s2 = 0; s2 < n; ++s2) {
      const bool ts = c.transient(s), ts2 = c.transient(s2);
      if (!ts && !ts2) {
        if (c.recurrent_class[s] == c.recurrent_class[s2] && c.visited[s]) {
          t.defined(s, s2) = true;
          t.value(s, s2) = 0.5;
        }
      } else if (ts && !ts2) {
        if (c.visited[s] && c.reach(s, s2)) {
          t.defined(s, s2) = true;
          t.value(s, s2) = 1.0;
        }
      } else if (!ts && ts2) {
        if (c.visited[s2] && c.reach(s2, s)) {
          t.defined(s, s2) = true;
          t.value(s, s2) = 0.0;
        }
      } else {
        const double f = count(s, s2), b = count(s2, s);
        if (f + b > 0) {
          t.defined(s, s2) = true;
          t.value(s, s2) = s == s2 ? 0.5 : f / (f + b);
        }
      }
    }
  }
  return t;
}

PsiTable exact_psi_limit(const TabularMdp& mdp, const PolicyTable& pi) {
  return exact_psi_limit(analyze_chain(induced_chain(mdp, pi), initial_distribution(mdp)));
}

}  // namespace revrl
