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

#include "revrl/agents/policy.h"

#include <cmath>
#include <stdexcept>

namespace revrl {

UniformPolicy::UniformPolicy(int n_actions) {
  if (n_actions < 1) throw std::invalid_argument("UniformPolicy: no actions");
  p_.assign(static_cast<std::size_t>(n_actions), 1.0 / n_actions);
}

TabularPolicy::TabularPolicy(Eigen::MatrixXd table) : table_(std::move(table)) {
  if (table_.size() == 0) throw std::invalid_argument("TabularPolicy: empty table");
  for (Eigen::Index s = 0; s < table_.rows(); ++s) {
    if ((table_.row(s).array() < 0.0).any() || std::abs(table_.row(s).sum() - 1.0) > 1e-9) {
      throw std::invalid_argument("TabularPolicy: rows must be distributions");
    }
  }
}

std::vector<double> TabularPolicy::probs(const Observation& x) const {
  if (static_cast<Eigen::Index>(x.size()) != table_.rows()) {
    throw std::invalid_argument("TabularPolicy: observation is not one-hot over states");
  }
  std::size_t s = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] > x[s]) s = i;
  }
  std::vector<double> p(static_cast<std::size_t>(table_.cols()));
  for (Eigen::Index a = 0; a < table_.cols(); ++a) p[a] = table_(static_cast<Eigen::Index>(s), a);
  return p;
}

PhiFunction phi_of(std::shared_ptr<const ReversibilityModel> model) {
  if (!model) throw std::invalid_argument("phi_of: null model");
  return [m = std::move(model)](const Observation& x) { return m->phi(x); };
}

ActionChoice choose_action(const Policy& policy, const Observation& x, Rng& rng,
                           const RacFilter* rac) {
  ActionChoice c;
  c.probs = policy.probs(x);
  const std::size_t n = c.probs.size();
  c.mask.assign(n, 1);
  if (rac) {
    const std::vector<double> phi = rac->phi(x);
    RacResult r = rac_filter(c.probs, phi, rac->cfg);
    c.fallback = r.fallback;
    for (std::size_t a = 0; a < n; ++a) {
      c.mask[a] = r.fallback ? (r.probs[a] > 0.0) : (phi[a] >= rac->cfg.beta);
    }
    c.probs = std::move(r.probs);
  }
  c.action = static_cast<int>(rng.categorical(c.probs));
  return c;
}

ActionChoice policy_sample(const PolicyValueNet& net, const Observation& x, Rng& rng,
                           const RacFilter* rac) {
  return choose_action(NetworkPolicy(net), x, rng, rac);
}

}  // namespace revrl
