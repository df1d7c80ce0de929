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

#ifndef REVRL_ORACLE_PSI_H_
#define REVRL_ORACLE_PSI_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "revrl/envs/tabular_mdp.h"
#include "revrl/oracle/chain.h"

namespace revrl {

// Raised for a pair that never co-occurs in a trajectory.
class UndefinedPairError : public std::domain_error {
 public:
  UndefinedPairError(int s, int s2);
  int s;
  int s2;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precedence values for every ordered pair, with a mask of defined pairs.
struct PsiTable {
  Eigen::MatrixXd value;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> defined;

  int n() const { return static_cast<int>(value.rows()); }
  bool is_defined(int s, int s2) const { return defined(s, s2); }
  double at(int s, int s2) const;  // throws UndefinedPairError
  std::optional<double> get(int s, int s2) const;
};

// E[#_T(s -> s')] for all pairs: expected number of index pairs t < t' < T
// with s_t = s, s_t' = s' and t' - t <= w. w < 0 disables the window.
Eigen::MatrixXd precedence_counts(const Eigen::MatrixXd& P, const Eigen::VectorXd& mu0,
                                  std::int64_t T, std::int64_t w = -1);

// psi(s, s') = C(s, s') / (C(s, s') + C(s', s)).
PsiTable psi_from_counts(const Eigen::MatrixXd& counts);

double exact_psi_T(const TabularMdp& mdp, const PolicyTable& pi, int s, int s2,
                   std::int64_t T);
double exact_psi_windowed(const TabularMdp& mdp, const PolicyTable& pi, int s, int s2,
                          std::int64_t T, std::int64_t w);
PsiTable exact_psi_T_table(const TabularMdp& mdp, const PolicyTable& pi, std::int64_t T,
                           std::int64_t w = -1);

struct PsiDoubling {
  double value = 0.0;
  std::int64_t T = 0;
  double last_change = 0.0;
};

// Doubles T from 2 until consecutive iterates differ by less than tol.
// Throws ConvergenceError past max_T and UndefinedPairError for a pair that
// has not co-occurred by then.
PsiDoubling exact_psi(const TabularMdp& mdp, const PolicyTable& pi, int s, int s2,
                      double tol = 1e-6, std::int64_t max_T = std::int64_t{1} << 20);

// Infinite-horizon limit in closed form from the chain's class structure:
// one half inside a recurrent class, 1 (0) from a transient state to a
// recurrent one (and back), and for two transient states the ratio of the
// finite expected pair counts g(s) (N - I)(s, s') with N = (I - Q)^-1 and
// g = mu0_T N. Pairs in different recurrent classes are undefined.
PsiTable exact_psi_limit(const ChainAnalysis& chain);
PsiTable exact_psi_limit(const TabularMdp& mdp, const PolicyTable& pi);

}  // namespace revrl

#endif  // REVRL_ORACLE_PSI_H_
