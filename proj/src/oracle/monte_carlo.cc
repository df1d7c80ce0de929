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

#include "revrl/oracle/monte_carlo.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace revrl {

namespace {

// Inverse-CDF sampling from a cumulative row.
int draw(const double* cdf, int n, double u) {
  for (int i = 0; i + 1 < n; ++i) {
    if (u < cdf[i]) return i;
  }
  return n - 1;
}

}  // namespace

McPsiEstimate monte_carlo_psi_T(const TabularMdp& mdp, const PolicyTable& pi, int s, int s2,
                                int T, std::int64_t n_trajectories, Rng& rng) {
  validate_policy(mdp, pi, 1e-9);
  if (T < 2 || n_trajectories < 2) throw std::invalid_argument("monte_carlo_psi_T: T or n");
  const int S = mdp.states(), A = mdp.actions();
  std::vector<double> mu_cdf(S), pi_cdf(static_cast<std::size_t>(S) * A),
      p_cdf(static_cast<std::size_t>(S) * A * S);
  double acc = 0;
  for (int x = 0; x < S; ++x) mu_cdf[x] = acc += mdp.initial()[x];
  for (int x = 0; x < S; ++x) {
    acc = 0;
    for (int a = 0; a < A; ++a) pi_cdf[x * A + a] = acc += pi(x, a);
    for (int a = 0; a < A; ++a) {
      acc = 0;
      const double* row = mdp.row(x, a);
      for (int y = 0; y < S; ++y) p_cdf[(static_cast<std::size_t>(x) * A + a) * S + y] = acc += row[y];
    }
  }

  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::int64_t i = 0; i < n_trajectories; ++i) {
    int x = draw(mu_cdf.data(), S, rng.uniform());
    double seen_s = 0, seen_s2 = 0, fwd = 0, bwd = 0;
    for (int t = 0; t < T; ++t) {
      if (x == s2) fwd += seen_s;
      if (x == s) bwd += seen_s2;
      if (x == s) ++seen_s;
      if (x == s2) ++seen_s2;
      if (t + 1 == T) break;
      const int a = draw(&pi_cdf[x * A], A, rng.uniform());
      x = draw(&p_cdf[(static_cast<std::size_t>(x) * A + a) * S], S, rng.uniform());
    }
    if (s == s2) {
      // Every unordered pair of visits counts once in each direction.
      fwd = bwd = seen_s * (seen_s - 1) / 2;
    }
    sx += fwd;
    sy += bwd;
    sxx += fwd * fwd;
    syy += bwd * bwd;
    sxy += fwd * bwd;
  }
  const double n = static_cast<double>(n_trajectories);
  McPsiEstimate out;
  out.trajectories = n_trajectories;
  out.mean_forward = sx / n;
  out.mean_backward = sy / n;
  const double mz = out.mean_forward + out.mean_backward;
  if (mz <= 0) throw std::runtime_error("monte_carlo_psi_T: pair never observed");
  const double r = out.mean_forward / mz;
  out.estimate = r;
  // Var(X - r Z) with Z = X + Y, i.e. Var((1 - r) X - r Y).
  const double vx = (sxx - n * out.mean_forward * out.mean_forward) / (n - 1);
  const double vy = (syy - n * out.mean_backward * out.mean_backward) / (n - 1);
  const double cxy = (sxy - n * out.mean_forward * out.mean_backward) / (n - 1);
  const double v = (1 - r) * (1 - r) * vx + r * r * vy - 2 * r * (1 - r) * cxy;
  out.std_error = std::sqrt(std::max(v, 0.0) / n) / mz;
  return out;
}

}  // namespace revrl
