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

#include "revrl/reversibility/shaping.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "revrl/core/io.h"

namespace revrl {

void validate(const RaeConfig& cfg) {
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw std::invalid_argument("rae: beta must be in (0,1)");
  if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("rae: lambda must be >= 0");
}

void validate(const RacConfig& cfg) {
  if (!(cfg.beta >= 0.0 && cfg.beta < 1.0)) throw std::invalid_argument("rac: beta must be in [0,1)");
}

double rae_reward(double psi_value, const RaeConfig& cfg) {
  if (!(psi_value >= 0.0 && psi_value <= 1.0)) {
    throw std::invalid_argument("rae_reward: psi outside [0,1]");
  }
  return psi_value > cfg.beta ? -cfg.lambda * psi_value : 0.0;
}

RacResult rac_filter(const std::vector<double>& policy_probs, const std::vector<double>& phi,
                     const RacConfig& cfg) {
  if (policy_probs.size() != phi.size() || phi.empty()) {
    throw std::invalid_argument("rac_filter: size mismatch");
  }
  double sum = 0.0;
  for (double p : policy_probs) sum += p;
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("rac_filter: probs must sum to 1");

  RacResult r;
  r.probs.assign(phi.size(), 0.0);
  double z = 0.0;
  for (std::size_t a = 0; a < phi.size(); ++a) {
    if (phi[a] >= cfg.beta) z += policy_probs[a];
  }
  if (z > 0.0) {
    for (std::size_t a = 0; a < phi.size(); ++a) {
      if (phi[a] >= cfg.beta) r.probs[a] = policy_probs[a] / z;
    }
    return r;
  }
  std::size_t best = 0;
  for (std::size_t a = 1; a < phi.size(); ++a) {
    if (phi[a] > phi[best]) best = a;
  }
  r.probs[best] = 1.0;
  r.fallback = true;
  return r;
}

RaeEnv::RaeEnv(std::unique_ptr<Environment> inner, std::shared_ptr<const PrecedenceModel> psi,
               RaeConfig cfg)
    : inner_(std::move(inner)), psi_(std::move(psi)), cfg_(cfg) {
  if (!inner_ || !psi_) throw std::invalid_argument("RaeEnv: null environment or model");
  validate(cfg_);
  if (psi_->obs_size() != inner_->observation_size()) {
    throw std::invalid_argument("RaeEnv: precedence model does not match observation size");
  }
}

Observation RaeEnv::reset(Rng& rng) {
  last_ = inner_->reset(rng);
  return last_;
}

EnvStep RaeEnv::step(int action, Rng& rng) {
  if (last_.empty()) throw std::logic_error("RaeEnv: step before reset");
  EnvStep s = inner_->step(action, rng);
  const double bonus = rae_reward(psi_->psi(last_, s.obs), cfg_);
  s.reward += bonus;
  s.intrinsic += bonus;
  last_ = s.obs;
  return s;
}

std::unique_ptr<Environment> RaeEnv::clone() const {
  auto c = std::make_unique<RaeEnv>(inner_->clone(), psi_, cfg_);
  c->last_ = last_;
  return c;
}

std::unique_ptr<Environment> wrap_env_rae(std::unique_ptr<Environment> env,
                                          std::shared_ptr<const PrecedenceModel> psi,
                                          const RaeConfig& cfg) {
  return std::make_unique<RaeEnv>(std::move(env), std::move(psi), cfg);
}

void write_threshold_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  CsvTable t({"beta", "seed", "score", "irreversible_event_count"});
  for (const SweepRow& r : rows) {
    t.row({format_real(r.beta), std::to_string(r.seed), format_real(r.score),
           std::to_string(r.irreversible_events)});
  }
  t.write(path);
}

}  // namespace revrl
