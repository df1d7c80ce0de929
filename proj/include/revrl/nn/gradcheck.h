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

#ifndef REVRL_NN_GRADCHECK_H_
#define REVRL_NN_GRADCHECK_H_

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "revrl/core/rng.h"
#include "revrl/nn/dense_net.h"

namespace revrl {

struct GradCheckResult {
  double max_rel_error = 0.0;  // worst draw
  int draws = 0;
  long coords_checked = 0;
  long coords_skipped = 0;  // finite difference straddled a relu kink
};

// Compares `analytic` with central differences of `loss` at `theta` on the
// given coordinates. Returns ||a - fd|| / (||a|| + ||fd||) over the
// coordinates kept. A coordinate is skipped when the step-h and step-2h
// central differences disagree, which only happens near a kink.
double finite_difference_error(
    const std::function<double(const Eigen::VectorXd&)>& loss,
    const Eigen::VectorXd& theta, const Eigen::VectorXd& analytic,
    const std::vector<Eigen::Index>& coords, double h, long* skipped);

// Up to `max_coords` coordinates of an n-vector, chosen without
// replacement (all of them when n <= max_coords).
std::vector<Eigen::Index> sample_coords(Eigen::Index n, Eigen::Index max_coords,
                                        Rng& rng);

// Draws fresh parameters and a batch of inputs `draws` times and checks
// both the parameter and input gradients of a random linear functional of
// the output.
GradCheckResult gradient_check(const std::vector<LayerSpec>& layers, int draws,
                               Rng& rng, Eigen::Index max_coords = 64,
                               double h = 1e-5);

}  // namespace revrl

#endif  // REVRL_NN_GRADCHECK_H_
