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

#include <cmath>

#include "doctest.h"
#include "revrl/core/rng.h"
#include "revrl/envs/turf.h"
#include "revrl/oracle/chain.h"
#include "revrl/oracle/monte_carlo.h"
#include "revrl/oracle/phi.h"
#include "revrl/oracle/psi.h"
#include "revrl/oracle/theory.h"

using namespace revrl;

namespace {

TabularMdp single_state() {
  TabularMdp m(1, 1);
  m.p(0, 0, 0) = 1.0;
  m.initial() = {1.0};
  return m;
}

TabularMdp alternating() {
  TabularMdp m(2, 1);
  m.p(0, 0, 1) = 1.0;
  m.p(1, 0, 0) = 1.0;
  m.initial() = {1.0, 0.0};
  return m;
}

// Three states, two actions; values below come from brute-force enumeration
// of all 3^5 trajectories in exact rational arithmetic.
TabularMdp hand_mdp() {
  TabularMdp m(3, 2);
  const double a0[3][3] = {{0.5, 0.5, 0}, {0, 0.2, 0.8}, {0.1, 0, 0.9}};
  const double a1[3][3] = {{0, 0, 1}, {0.3, 0.3, 0.4}, {0, 1, 0}};
  for (int s = 0; s < 3; ++s) {
    for (int t = 0; t < 3; ++t) {
      m.p(s, 0, t) = a0[s][t];
      m.p(s, 1, t) = a1[s][t];
    }
  }
  m.initial() = {0.6, 0.4, 0.0};
  return m;
}

PolicyTable hand_policy() {
  PolicyTable pi(3, 2);
  pi << 0.25, 0.75, 0.5, 0.5, 0.9, 0.1;
  return pi;
}

// s0 -a-> s1; in s1 action 0 returns to s0 and action 1 drops into trap s2.
TabularMdp return_or_trap() {
  TabularMdp m(3, 2);
  m.p(0, 0, 1) = 1.0;
  m.p(0, 1, 0) = 1.0;
  m.p(1, 0, 0) = 1.0;
  m.p(1, 1, 2) = 1.0;
  m.p(2, 0, 2) = 1.0;
  m.p(2, 1, 2) = 1.0;
  m.initial() = {1.0, 0.0, 0.0};
  return m;
}

}  // namespace

TEST_CASE("policy helpers") {
  Rng rng(1);
  TabularMdp m = random_dirichlet_mdp(5, 3, 1.0, rng);
  PolicyTable pi = epsilon_mixed_policy(m, 0.3, rng);
  CHECK_NOTHROW(validate_policy(m, pi));
  CHECK(policy_min_prob(pi) >= 0.1 - 1e-15);
  Eigen::MatrixXd P = induced_chain(m, pi);
  CHECK((P.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
  PolicyTable bad = pi;
  bad(0, 0) += 0.1;
  CHECK_THROWS(validate_policy(m, bad));
}

TEST_CASE("chain classification") {
  ChainAnalysis c = analyze_chain(induced_chain(return_or_trap(), uniform_policy(return_or_trap())),
                                  initial_distribution(return_or_trap()));
  CHECK(c.transient(0));
  CHECK(c.transient(1));
  CHECK(c.cls[2] == StateClass::kRecurrent);
  CHECK(c.recurrent_class[2] == 0);
  CHECK(c.recurrent_class[0] == -1);
  CHECK(c.visited[2]);
  const TabularMdp cyc = three_cycle();
  ChainAnalysis d = analyze_chain(induced_chain(cyc, uniform_policy(cyc)), initial_distribution(cyc));
  for (int s = 0; s < 3; ++s) CHECK(d.recurrent_class[s] == 0);
}

TEST_CASE("hitting probabilities") {
  Eigen::MatrixXd P(3, 3);
  P << 0, 1, 0, 0.4, 0, 0.6, 0, 0, 1;
  Eigen::VectorXd h = hitting_probabilities(P, 0);
  CHECK(h[0] == 1.0);
  CHECK(h[1] == doctest::Approx(0.4));
  CHECK(h[2] == 0.0);
}

TEST_CASE("psi of a state with itself is one half") {
  const TabularMdp cyc = three_cycle();
  CHECK(exact_psi_T(cyc, uniform_policy(cyc), 1, 1, 10) == 0.5);
}

TEST_CASE("psi on a chain into an absorbing state") {
  TabularMdp m = one_way_chain(2);
  CHECK(exact_psi_T(m, uniform_policy(m), 0, 1, 3) == 1.0);
  Eigen::MatrixXd C = precedence_counts(induced_chain(m, uniform_policy(m)), initial_distribution(m), 3);
  CHECK(C(0, 1) == 2.0);
  CHECK(C(1, 0) == 0.0);
}

TEST_CASE("psi_T matches exhaustive enumeration") {
  const TabularMdp m = hand_mdp();
  const PolicyTable pi = hand_policy();
  CHECK(exact_psi_T(m, pi, 0, 1, 5) == doctest::Approx(0.5589011381644498).epsilon(1e-12));
  CHECK(exact_psi_T(m, pi, 1, 2, 5) == doctest::Approx(0.7887380045628871).epsilon(1e-12));
  CHECK(exact_psi_T(m, pi, 2, 0, 5) == doctest::Approx(0.14738616582452743).epsilon(1e-12));
  CHECK(exact_psi_windowed(m, pi, 0, 1, 5, 2) == doctest::Approx(0.5218387319966457).epsilon(1e-12));
  CHECK(exact_psi_windowed(m, pi, 1, 2, 5, 2) == doctest::Approx(0.7221455839303341).epsilon(1e-12));
  CHECK(exact_psi_windowed(m, pi, 2, 0, 5, 2) == doctest::Approx(0.20258336876503288).epsilon(1e-12));
}

TEST_CASE("three-cycle with uniform start favours the cycle order at finite T") {
  const TabularMdp cyc = three_cycle();
  const PolicyTable pi = uniform_policy(cyc);
  CHECK(exact_psi_T(cyc, pi, 0, 1, 3) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(exact_psi_T(cyc, pi, 0, 1, 7) == doctest::Approx(9.0 / 16).epsilon(1e-14));
  PsiTable t = exact_psi_T_table(cyc, pi, 1000);
  CHECK(t.at(0, 1) == doctest::Approx(501.0 / 1001).epsilon(1e-12));
  CHECK(t.at(0, 1) > 0.5);
  CHECK(t.at(1, 2) > 0.5);
  CHECK(t.at(2, 0) > 0.5);
  auto v = find_half_transitivity_violation(exact_psi_T_table(cyc, pi, 3));
  REQUIRE(v.has_value());
  CHECK(v->psi13 < 0.5);
  // In the limit every pair of the single recurrent class is exactly 1/2.
  PsiTable lim = exact_psi_limit(cyc, pi);
  CHECK(lim.at(0, 1) == 0.5);
  CHECK_FALSE(find_half_transitivity_violation(lim).has_value());
}

TEST_CASE("leaky three-cycle keeps the violation in the limit") {
  // Survival r per step: C(0,1) ~ r / (1 - r^3), C(1,0) ~ r^2 / (1 - r^3),
  // so psi(0,1) = 1 / (1 + r).
  for (double q : {0.1, 0.5, 0.9}) {
    const TabularMdp m = leaky_three_cycle(q);
    PsiTable lim = exact_psi_limit(m, uniform_policy(m));
    const double r = 1 - q;
    CHECK(lim.at(0, 1) == doctest::Approx(1 / (1 + r)).epsilon(1e-12));
    CHECK(lim.at(0, 2) == doctest::Approx(r / (1 + r)).epsilon(1e-12));
    CHECK(find_half_transitivity_violation(lim).has_value());
  }
}

TEST_CASE("undefined pairs raise") {
  // Two absorbing states reached from different starts never co-occur.
  TabularMdp m(2, 1);
  m.p(0, 0, 0) = 1.0;
  m.p(1, 0, 1) = 1.0;
  m.initial() = {0.5, 0.5};
  CHECK_THROWS_AS(exact_psi_T(m, uniform_policy(m), 0, 1, 10), UndefinedPairError);
  CHECK_THROWS_AS(exact_psi_limit(m, uniform_policy(m)).at(0, 1), UndefinedPairError);
  CHECK_THROWS_AS(exact_psi(m, uniform_policy(m), 0, 1, 1e-6, 64), UndefinedPairError);
}

TEST_CASE("doubling limit for recurrent states of an irreducible chain") {
  Rng rng(11);
  TabularMdp m = random_dirichlet_mdp(4, 2, 1.0, rng);
  PolicyTable pi = uniform_policy(m);
  PsiDoubling r = exact_psi(m, pi, 0, 1, 1e-6);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(r.last_change < 1e-6);
}

TEST_CASE("doubling limit for transient before absorbing") {
  TabularMdp m = one_way_chain(4);
  PsiDoubling r = exact_psi(m, uniform_policy(m), 1, 3);
  CHECK(r.value == 1.0);
}

TEST_CASE("doubling iteration cap raises") {
  Rng rng(11);
  TabularMdp m = random_dirichlet_mdp(4, 2, 1.0, rng);
  CHECK_THROWS_AS(exact_psi(m, uniform_policy(m), 0, 1, 1e-12, 256), ConvergenceError);
}

TEST_CASE("closed-form limit agrees with long-horizon doubling on transient pairs") {
  const TabularMdp m = return_or_trap();
  Eigen::MatrixXd pi_m(3, 2);
  pi_m << 0.7, 0.3, 0.6, 0.4, 0.5, 0.5;
  PsiTable lim = exact_psi_limit(m, pi_m);
  for (auto [s, s2] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{0, 2}, std::pair{2, 1}}) {
    PsiDoubling d = exact_psi(m, pi_m, s, s2, 1e-12, 1 << 12);
    CHECK(lim.at(s, s2) == doctest::Approx(d.value).epsilon(1e-10));
  }
}

TEST_CASE("windowed psi") {
  const TabularMdp m = hand_mdp();
  const PolicyTable pi = hand_policy();
  for (int T : {3, 6, 9}) {
    CHECK(exact_psi_windowed(m, pi, 0, 1, T, T) == exact_psi_T(m, pi, 0, 1, T));
  }
  // Alternating chain, w = 1: #(0->1) = ceil((T-1)/2), #(1->0) = floor((T-1)/2).
  const TabularMdp alt = alternating();
  for (int T : {4, 5, 10, 11}) {
    const double f = (T - 1 + 1) / 2, b = (T - 1) / 2;
    CHECK(exact_psi_windowed(alt, uniform_policy(alt), 0, 1, T, 1) ==
          doctest::Approx(f / (f + b)).epsilon(1e-14));
  }
  CHECK(exact_psi_windowed(alt, uniform_policy(alt), 0, 1, 4, 1) == doctest::Approx(2.0 / 3));
  const TabularMdp chain = one_way_chain(6);
  for (int w : {1, 2, 4}) CHECK(exact_psi_windowed(chain, uniform_policy(chain), 1, 1 + w, 20, w) == 1.0);
  CHECK_THROWS_AS(exact_psi_windowed(chain, uniform_policy(chain), 1, 3, 20, 1), UndefinedPairError);
}

TEST_CASE("phi_pi examples") {
  TabularMdp self = single_state();
  CHECK(exact_phi_pi(self, uniform_policy(self), 0, 0) == 1.0);
  const TabularMdp m = return_or_trap();
  for (double q : {0.0, 0.3, 0.8}) {
    PolicyTable pi(3, 2);
    pi << 0.5, 0.5, q, 1 - q, 0.5, 0.5;
    CHECK(exact_phi_pi(m, pi, 0, 0) == doctest::Approx(q).epsilon(1e-14));
  }
  CHECK(exact_phi_pi(m, uniform_policy(m), 1, 1) == 0.0);
}

TEST_CASE("phi_K on a deterministic gridworld move") {
  // Two cells; right then left undoes the move. With K counting the states
  // after the action, one undo needs K = 2.
  TabularMdp m(2, 2);
  m.p(0, 0, 1) = 1.0;
  m.p(0, 1, 0) = 1.0;
  m.p(1, 0, 1) = 1.0;
  m.p(1, 1, 0) = 1.0;
  m.initial() = {1.0, 0.0};
  CHECK(exact_phi_K(m, 0, 0, 1) == 0.0);
  CHECK(exact_phi_K(m, 0, 0, 2) == 1.0);
  CHECK(exact_phi(m, 0, 0) == 1.0);
  CHECK(exact_phi_K(m, 0, 1, 1) == 1.0);
}

TEST_CASE("phi on Turf grass step is zero") {
  TurfMap map = parse_turf_map(std::string("AGT\nPPP\n"));
  TurfMdp t = turf_to_mdp(map);
  int start = -1;
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    if (t.states[i].agent == map.start && t.states[i].spoiled == 0) start = static_cast<int>(i);
  }
  REQUIRE(start >= 0);
  CHECK(exact_phi(t.mdp, start, static_cast<int>(GridAction::kRight)) == 0.0);
  CHECK(exact_phi(t.mdp, start, static_cast<int>(GridAction::kDown)) == 1.0);
}

TEST_CASE("property: phi_K monotone and bounded by phi on random MDPs") {
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    TabularMdp m = random_dirichlet_mdp(5, 3, 0.5, rng);
    Eigen::MatrixXd phi = exact_phi_table(m);
    Eigen::MatrixXd prev = exact_phi_K_table(m, 1);
    for (int K = 2; K <= 8; ++K) {
      Eigen::MatrixXd cur = exact_phi_K_table(m, K);
      REQUIRE((cur - prev).minCoeff() >= -1e-12);
      prev = cur;
    }
    REQUIRE((phi - prev).minCoeff() >= -1e-10);
  }
}

TEST_CASE("phi variants") {
  TabularMdp self = single_state();
  for (double g : {0.3, 0.9}) {
    PhiVariants v = exact_phi_variants(self, uniform_policy(self), 0, 0, g, 10);
    CHECK(v.discounted == doctest::Approx(g).epsilon(1e-14));
    CHECK(v.fixed_timestep == 1.0);
  }
  const TabularMdp m = return_or_trap();
  PhiVariants trap = exact_phi_variants(m, uniform_policy(m), 1, 1, 0.9, 20);
  CHECK(trap.discounted == 0.0);
  CHECK(trap.fixed_timestep == 0.0);
}

TEST_CASE("discounted variant matches an explicit first-return series") {
  Rng rng(4);
  TabularMdp m = random_dirichlet_mdp(4, 2, 1.0, rng);
  PolicyTable pi = epsilon_mixed_policy(m, 0.5, rng);
  Eigen::MatrixXd P = induced_chain(m, pi);
  const int s = 2, a = 1;
  const double gamma = 0.8;
  Eigen::RowVectorXd q(4);
  for (int y = 0; y < 4; ++y) q[y] = m.p(s, a, y);
  double series = 0, gk = gamma;
  for (int k = 1; k < 2000; ++k) {
    series += gk * q[s];
    q[s] = 0;
    q = q * P;
    gk *= gamma;
  }
  CHECK(exact_phi_variants(m, pi, s, a, gamma, 5).discounted == doctest::Approx(series).epsilon(1e-12));
}

TEST_CASE("empirical reversibility examples") {
  TabularMdp self = single_state();
  EmpiricalReversibility e = empirical_reversibility(self, uniform_policy(self), 0, 0);
  CHECK(e.value == 0.5);
  CHECK(e.value == exact_phi_pi(self, uniform_policy(self), 0, 0) / 2);
  TabularMdp chain = one_way_chain(3);
  EmpiricalReversibility c = empirical_reversibility(chain, uniform_policy(chain), 0, 0);
  CHECK(c.value == 0.0);
  CHECK(c.value >= exact_phi_pi(chain, uniform_policy(chain), 0, 0) / 2);
  const TabularMdp cyc = three_cycle();
  EmpiricalReversibility y = empirical_reversibility(cyc, uniform_policy(cyc), 0, 0);
  CHECK(y.value == 0.5);
  CHECK(y.value >= exact_phi_pi(cyc, uniform_policy(cyc), 0, 0) / 2);
}

TEST_CASE("verify_theory passes on random instances") {
  Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    TabularMdp m = random_dirichlet_mdp(6, 3, 1.0, rng);
    PolicyTable pi = epsilon_mixed_policy(m, 0.3, rng);
    TheoryReport r = verify_theory(m, pi, 1e-9);
    INFO(r.text());
    CHECK(r.all_pass());
    CHECK(r.checks.size() > 100);
  }
}

TEST_CASE("verify_theory on a single state is tight") {
  TabularMdp m = single_state();
  TheoryReport r = verify_theory(m, uniform_policy(m));
  CHECK(r.all_pass());
  CHECK(r.checks[0].lhs == 0.5);
  CHECK(r.checks[0].rhs == 0.5);
}

TEST_CASE("verify_theory covers transient structure") {
  const TabularMdp m = return_or_trap();
  TheoryReport r = verify_theory(m, uniform_policy(m), 1e-9);
  INFO(r.text());
  CHECK(r.all_pass());
  const TabularMdp chain = one_way_chain(4);
  TheoryReport rc = verify_theory(chain, uniform_policy(chain), 1e-9);
  CHECK(rc.all_pass());
  int strong = 0, through = 0;
  for (const auto& c : rc.checks) {
    strong += c.name == "strong-transitivity";
    through += c.name == "chain-through-strong";
  }
  CHECK(strong > 0);
  CHECK(through > 0);
}

TEST_CASE("monte carlo psi_T agrees with the exact value") {
  const TabularMdp m = hand_mdp();
  const PolicyTable pi = hand_policy();
  Rng rng(5);
  McPsiEstimate mc = monte_carlo_psi_T(m, pi, 1, 2, 5, 200000, rng);
  const double exact = exact_psi_T(m, pi, 1, 2, 5);
  CHECK(std::abs(mc.estimate - exact) < 4 * mc.std_error);
  CHECK(mc.std_error > 0);
  CHECK(mc.std_error < 0.01);
}
