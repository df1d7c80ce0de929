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

#ifndef REVRL_CORE_STATS_H_
#define REVRL_CORE_STATS_H_

#include <span>

namespace revrl {

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double sem = 0.0;     // standard error of the mean
  double ci95 = 0.0;    // half-width, normal approximation
  std::size_t n = 0;
};

Summary summarize(std::span<const double> values);
double mean(std::span<const double> values);

}  // namespace revrl

#endif  // REVRL_CORE_STATS_H_
