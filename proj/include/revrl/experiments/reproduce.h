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


#ifndef REVRL_EXPERIMENTS_REPRODUCE_H_
#define REVRL_EXPERIMENTS_REPRODUCE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "revrl/experiments/config.h"

namespace revrl {

struct CheckRow {
  std::string item;
  double value = 0.0;
  std::string reference;  // target value or condition, as printed
  bool pass = true;
};

struct Report {
  std::string target;
  std::vector<CheckRow> rows;
  std::vector<std::string> tables;  // preformatted blocks
  std::vector<std::string> notes;

  bool pass() const;
  std::size_t failures() const;
  std::string text() const;
};

struct ReproduceOptions {
  int seeds = 0;  // 0: the canned seed list
  std::string out_dir;
  int workers = 1;
  std::string config_dir;  // empty: the in-repo configs/ directory
};

std::string default_config_dir();
std::vector<std::string> reproduce_targets();
ExperimentConfig canned_config(const std::string& name, const ReproduceOptions& opts);

// Throws std::invalid_argument on an unknown target.
Report reproduce(const std::string& target, const ReproduceOptions& opts = {});

// Bounds and ordering properties on random tabular instances, the
// single-state tightness case and the three-cycle counterexample.
Report theory_suite(int instances = 50, double tol = 1e-9, std::uint64_t seed = 0);
// Matrix-power psi_T against Monte Carlo counts on random chains.
Report psi_monte_carlo_check(int chains = 10, std::int64_t trajectories = 1000000,
                             std::uint64_t seed = 0);
// Analytic against central-difference gradients for every network type.
Report gradient_suite(int draws = 100, std::uint64_t seed = 0);

}  // namespace revrl

#endif  // REVRL_EXPERIMENTS_REPRODUCE_H_
