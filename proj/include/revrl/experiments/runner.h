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

#ifndef REVRL_EXPERIMENTS_RUNNER_H_
#define REVRL_EXPERIMENTS_RUNNER_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "revrl/agents/episode.h"
#include "revrl/core/stats.h"
#include "revrl/experiments/config.h"
#include "revrl/precedence/trainer.h"
#include "revrl/reversibility/shaping.h"

namespace revrl {

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<EpisodeRow> episodes;  // training episodes, or evaluation episodes of a random agent
  std::vector<EpisodeRow> eval;      // final-policy episodes after training
  std::vector<SweepRow> sweep;       // random agent + rac over wrapper.betas
  std::map<std::string, double> stats;
  std::vector<double> visitation;  // turf: agent visits per cell during eval
  std::vector<LossRecord> psi_trace;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<SeedResult> seeds;
  Summary score;  // over per-seed scores
  long irreversible_events = 0;
  std::vector<std::string> artifacts;
};

// Score of one episode: length on reward-free cartpole, extrinsic return otherwise.
double episode_score(const ExperimentConfig& cfg, const EpisodeMetrics& m);
// Mean score over eval episodes, else the last 100 training episodes (ppo)
// or all episodes (random agent).
double seed_score(const ExperimentConfig& cfg, const SeedResult& r);

SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed);
// Runs every seed (in cfg.workers threads) and writes artifacts when
// cfg.output_dir is set.
RunResult run(const ExperimentConfig& cfg);

// Mean intrinsic return per episode over training thirds, by env steps.
// Intrinsic reward per environment step in each third of training (by steps).
std::vector<double> intrinsic_thirds(const std::vector<EpisodeRow>& rows);
std::string learning_curve_svg(const RunResult& r, int bins = 50);

}  // namespace revrl

#endif  // REVRL_EXPERIMENTS_RUNNER_H_
