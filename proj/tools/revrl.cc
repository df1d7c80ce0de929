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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "revrl/experiments/config.h"
#include "revrl/experiments/reproduce.h"
#include "revrl/experiments/runner.h"

namespace {

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out,
            int workers) {
  revrl::ExperimentConfig cfg = revrl::load_config(path);
  if (seed) cfg.seeds = {*seed};
  if (!out.empty()) cfg.output_dir = out;
  if (workers > 0) cfg.workers = workers;
  revrl::validate(cfg);
  const revrl::RunResult r = revrl::run(cfg);
  std::cout << cfg.name << ": score " << r.score.mean << " +/- " << r.score.ci95 << " (95% CI, "
            << r.score.n << " seeds), irreversible events " << r.irreversible_events << "\n";
  for (const revrl::SeedResult& s : r.seeds) {
    std::cout << "  seed " << s.seed << ": score " << revrl::seed_score(cfg, s);
    for (const auto& [k, v] : s.stats) std::cout << ", " << k << " " << v;
    std::cout << "\n";
  }
  for (const std::string& a : r.artifacts) std::cout << "  wrote " << a << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversibility-aware RL experiments"};
  app.require_subcommand(1);

  std::string config, out;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  CLI::App* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Run this seed only");
  run->add_option("--out", out, "Output directory");
  run->add_option("--workers", workers, "Worker threads across seeds");

  std::string target;
  revrl::ReproduceOptions ropts;
  CLI::App* rep = app.add_subcommand("reproduce", "Run a canned reproduction target");
  rep->add_option("target", target, "Target name")
      ->required()
      ->check(CLI::IsMember(revrl::reproduce_targets()));
  rep->add_option("--seeds", ropts.seeds, "Use seeds 0..K-1 instead of the canned list");
  rep->add_option("--out", ropts.out_dir, "Output directory");
  rep->add_option("--workers", ropts.workers, "Worker threads across seeds");
  rep->add_option("--config-dir", ropts.config_dir, "Directory with the canned configs");

  int instances = 50;
  double tol = 1e-9;
  std::uint64_t theory_seed = 0;
  CLI::App* theory = app.add_subcommand("verify-theory", "Check the tabular bounds and properties");
  theory->add_option("--instances", instances, "Random MDP instances")->check(CLI::PositiveNumber);
  theory->add_option("--tol", tol, "Tolerance");
  theory->add_option("--seed", theory_seed, "Instance seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config, seed, out, workers);
    if (*rep) {
      const revrl::Report r = revrl::reproduce(target, ropts);
      std::cout << r.text();
      return r.pass() ? 0 : 1;
    }
    const revrl::Report r = revrl::theory_suite(instances, tol, theory_seed);
    std::cout << r.text();
    return r.pass() ? 0 : 1;
  } catch (const revrl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
