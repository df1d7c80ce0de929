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

#ifndef REVRL_EXPERIMENTS_CONFIG_H_
#define REVRL_EXPERIMENTS_CONFIG_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "revrl/agents/ppo.h"
#include "revrl/envs/environment.h"
#include "revrl/reversibility/shaping.h"

namespace revrl {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EnvConfig {
  std::string id = "cartpole";  // cartpole | cliff | turf
  bool reward_free = false;     // cartpole
  int max_steps = 0;            // 0: environment default
  double p_wind = 0.0;          // cliff
  std::string turf_map;         // empty: bundled map
};

struct AgentConfig {
  std::string kind = "ppo";  // ppo | random
  std::vector<int> hidden{64, 64};
  PpoConfig ppo;
};

struct WrapperConfig {
  std::string kind = "none";  // none | rae | rac
  RaeConfig rae;
  RacConfig rac;
  std::vector<double> rac_betas;  // optional sweep for random + rac
};

struct NetTrainConfig {
  std::vector<int> hidden;
  double learning_rate = 0.01;
  int batch = 128;
  long steps = 0;  // offline gradient steps
};

struct EstimatorConfig {
  std::string mode = "online";  // online | offline | exact
  long pretrain_episodes = 0;   // random-policy trajectories for offline mode
  int window = 200;
  long psi_every = 500;  // online: one psi step per this many env steps
  long phi_every = 500;
  bool use_final_obs = true;
  // phi transitions ending an episode; unset follows use_final_obs
  std::optional<bool> phi_final_obs;
  long buffer_steps = 1000000;
  NetTrainConfig psi{{64, 64}, 0.01, 128, 0};
  NetTrainConfig phi{{64}, 0.01, 128, 0};
};

struct ExperimentConfig {
  std::string name;
  EnvConfig env;
  AgentConfig agent;
  WrapperConfig wrapper;
  EstimatorConfig estimator;
  long env_steps = 0;         // ppo training budget
  long episodes = 0;          // random-agent evaluation episodes per seed
  long eval_episodes = 0;     // episodes with the final policy after training
  long eval_max_steps = 0;    // cap per evaluation episode, 0: none
  std::vector<std::uint64_t> seeds{0};
  int workers = 1;
  std::string output_dir;
};

// Throws ConfigError on unknown keys, bad ids or out-of-range values.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

std::unique_ptr<Environment> make_env(const EnvConfig& cfg);

}  // namespace revrl

#endif  // REVRL_EXPERIMENTS_CONFIG_H_
