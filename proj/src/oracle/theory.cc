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

#include "revrl/oracle/theory.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "revrl/core/rng.h"
#include "revrl/oracle/phi.h"

namespace revrl {

bool TheoryReport::all_pass() const { return failures() == 0; }

std::size_t TheoryReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const TheoryCheck& c) { return !c.pass; }));
}

std::string TheoryReport::text(bool verbose) const {
  std::ostringstream out;
  out.precision(12);
  out << "instance " << instance_hash << " states=" << states << " actions=" << actions
      << " rho=" << rho << " tol=" << tol << " checks=" << checks.size()
      << " failures=" << failures() << '\n';
  for (const std::string& n : notes) out << "  note: " << n << '\n';
  for (const TheoryCheck& c : checks) {
    if (c.pass && !verbose) continue;
    out << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << " s=" << c.s << " other=" << c.other;
    if (c.third >= 0) out << " third=" << c.third;
    out << " lhs=" << c.lhs << " rhs=" << c.rhs << '\n';
  }
  return out.str();
}

std::string mdp_hash(const TabularMdp& mdp, const PolicyTable& pi) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    h = mix64(h ^ bits);
  };
  mix(mdp.states());
  mix(mdp.actions());
  for (int s = 0; s < mdp.states(); ++s) {
    mix(mdp.initial()[s]);
    for (int a = 0; a < mdp.actions(); ++a) {
      for (int s2 = 0; s2 < mdp.states(); ++s2) mix(mdp.p(s, a, s2));
    }
  }
  for (Eigen::Index i = 0; i < pi.size(); ++i) mix(pi.data()[i]);
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

TheoryReport verify_theory(const TabularMdp& mdp, const PolicyTable& pi, double tol) {
  mdp.validate(1e-9);
  validate_policy(mdp, pi, 1e-9);
  TheoryReport r;
  r.instance_hash = mdp_hash(mdp, pi);
  r.states = mdp.states();
  r.actions = mdp.actions();
  r.rho = policy_min_prob(pi);
  r.tol = tol;
  const int n = mdp.states(), A = mdp.actions();

  const ChainAnalysis chain = analyze_chain(induced_chain(mdp, pi), initial_distribution(mdp));
  const PsiTable psi = exact_psi_limit(chain);
  const Eigen::MatrixXd phi = exact_phi_table(mdp);
  constexpr int kMaxK = 5;
  std::vector<Eigen::MatrixXd> phiK;
  for (int K = 1; K <= kMaxK + 1; ++K) phiK.push_back(exact_phi_K_table(mdp, K));
  if (r.rho <= 0) r.notes.push_back("rho = 0: K-step bounds are vacuous");

  auto add = [&r](std::string name, int s, int other, int third, double lhs, double rhs,
                  bool pass) {
    r.checks.push_back({std::move(name), s, other, third, lhs, rhs, pass});
  };

  int unvisited = 0;
  for (int s = 0; s < n; ++s) {
    if (!chain.visited[s]) {
      ++unvisited;
      continue;
    }
    for (int a = 0; a < A; ++a) {
      const EmpiricalReversibility emp = empirical_reversibility(mdp, psi, s, a);
      if (emp.skipped > 0) {
        r.notes.push_back("empirical reversibility at (" + std::to_string(s) + ", " +
                          std::to_string(a) + ") skipped undefined successors");
      }
      const double phi_pi = exact_phi_pi(mdp, pi, s, a);
      add("empirical>=phi_pi/2", s, a, -1, emp.value, phi_pi / 2,
          emp.value >= phi_pi / 2 - tol);
      for (int K = 1; K <= kMaxK; ++K) {
        const double rhs = std::pow(r.rho, K) / 2 * phiK[K - 1](s, a);
        add("empirical>=rho^K/2*phi_K[K=" + std::to_string(K) + "]", s, a, -1, emp.value, rhs,
            emp.value >= rhs - tol);
      }
      add("phi_pi<=phi", s, a, -1, phi_pi, phi(s, a), phi_pi <= phi(s, a) + tol);
      for (int K = 1; K <= kMaxK; ++K) {
        add("phi_K<=phi_K+1[K=" + std::to_string(K) + "]", s, a, -1, phiK[K - 1](s, a),
            phiK[K](s, a), phiK[K - 1](s, a) <= phiK[K](s, a) + tol);
      }
      add("phi_K<=phi[K=6]", s, a, -1, phiK[kMaxK](s, a), phi(s, a),
          phiK[kMaxK](s, a) <= phi(s, a) + tol);
    }
  }
  if (unvisited > 0) {
    r.notes.push_back(std::to_string(unvisited) + " state(s) unreachable under mu0; skipped");
  }

  for (int s = 0; s < n; ++s) {
    for (int s2 = s; s2 < n; ++s2) {
      if (psi.is_defined(s, s2) != psi.is_defined(s2, s)) {
        add("definedness-symmetric", s, s2, -1, 0, 0, false);
        continue;
      }
      if (!psi.is_defined(s, s2)) continue;
      const double sum = psi.value(s, s2) + psi.value(s2, s);
      add("psi(s,s')+psi(s',s)=1", s, s2, -1, sum, 1.0, std::abs(sum - 1.0) <= tol);
    }
  }

  auto strong = [&](int x, int y) { return psi.is_defined(x, y) && psi.value(x, y) >= 1 - tol; };
  auto weak = [&](int x, int y) { return psi.is_defined(x, y) && psi.value(x, y) >= 0.5 - tol; };
  for (int s0 = 0; s0 < n; ++s0) {
    for (int s1 = 0; s1 < n; ++s1) {
      if (!strong(s0, s1)) continue;
      for (int s2 = 0; s2 < n; ++s2) {
        if (!strong(s1, s2)) continue;
        const double v = psi.is_defined(s0, s2) ? psi.value(s0, s2) : -1.0;
        add("strong-transitivity", s0, s1, s2, v, 1.0, strong(s0, s2));
      }
    }
  }
  // Closure of the weak relation over chains of any length (zero included).
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> wreach(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) wreach(x, y) = x == y || weak(x, y);
  }
  for (int k = 0; k < n; ++k) {
    for (int x = 0; x < n; ++x) {
      if (!wreach(x, k)) continue;
      for (int y = 0; y < n; ++y) wreach(x, y) = wreach(x, y) || wreach(k, y);
    }
  }
  for (int si = 0; si < n; ++si) {
    for (int sj = 0; sj < n; ++sj) {
      if (!strong(si, sj)) continue;
      for (int s0 = 0; s0 < n; ++s0) {
        if (!wreach(s0, si) || !chain.visited[s0]) continue;
        for (int st = 0; st < n; ++st) {
          if (!wreach(sj, st)) continue;
          const double v = psi.is_defined(s0, st) ? psi.value(s0, st) : -1.0;
          add("chain-through-strong", s0, si * n + sj, st, v, 1.0, strong(s0, st));
        }
      }
    }
  }
  return r;
}

std::optional<TransitivityViolation> find_half_transitivity_violation(const PsiTable& psi,
                                                                      double margin) {
  const int n = psi.n();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b || !psi.is_defined(a, b) || psi.value(a, b) < 0.5) continue;
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b || !psi.is_defined(b, c) || psi.value(b, c) < 0.5) continue;
        if (psi.is_defined(a, c) && psi.value(a, c) < 0.5 - margin) {
          return TransitivityViolation{a, b, c, psi.value(a, b), psi.value(b, c), psi.value(a, c)};
        }
      }
    }
  }
  return std::nullopt;
}

TabularMdp leaky_three_cycle(double q) {
  if (!(q > 0 && q < 1)) throw std::invalid_argument("leaky_three_cycle: q in (0, 1)");
  TabularMdp m(4, 1);
  for (int s = 0; s < 3; ++s) {
    m.p(s, 0, (s + 1) % 3) = 1 - q;
    m.p(s, 0, 3) = q;
  }
  m.p(3, 0, 3) = 1.0;
  m.initial() = {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0};
  return m;
}

}  // namespace revrl
