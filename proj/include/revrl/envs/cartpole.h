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

#ifndef REVRL_ENVS_CARTPOLE_H_
#define REVRL_ENVS_CARTPOLE_H_

#include "revrl/envs/environment.h"

namespace revrl {

struct CartpoleState {
  double x = 0.0;          // m
  double x_dot = 0.0;      // m/s
  double theta = 0.0;      // rad
  double theta_dot = 0.0;  // rad/s
};

struct CartpoleParams {
  double gravity = 9.8;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double half_length = 0.5;
  double force = 10.0;
  double dt = 0.02;
  double theta_limit = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;
  double x_limit = 2.4;
  int max_steps = 200;   // 50'000 for Cartpole+
  bool rewarded = true;  // false: reward-free variant
};

enum class CartpoleAction : int { kLeft = 0, kRight = 1 };

struct CartpoleTransition {
  CartpoleState state;
  double reward = 0.0;
  bool done = false;
  bool failed = false;  // left the angle or position bounds
};

// One explicit Euler step of the classic cart-pole equations. `steps_taken`
// counts steps already taken in the episode, including none for this one.
// Stepping a state outside the bounds throws std::logic_error.
CartpoleTransition cartpole_step(const CartpoleParams& params,
                                 const CartpoleState& state,
                                 CartpoleAction action, int steps_taken);

bool cartpole_out_of_bounds(const CartpoleParams& params,
                            const CartpoleState& state);

class Cartpole final : public Environment {
 public:
  explicit Cartpole(CartpoleParams params = {});

  Observation reset(Rng& rng) override;
  EnvStep step(int action, Rng& rng) override;
  int action_count() const override { return 2; }
  int observation_size() const override { return 4; }
  std::string name() const override;
  std::unique_ptr<Environment> clone() const override;

  const CartpoleState& state() const { return state_; }
  void set_state(const CartpoleState& s) { state_ = s; }
  const CartpoleParams& params() const { return params_; }
  int steps_taken() const { return t_; }

 private:
  CartpoleParams params_;
  CartpoleState state_;
  int t_ = 0;
  bool done_ = true;
};

Observation cartpole_observation(const CartpoleState& s);

}  // namespace revrl

#endif  // REVRL_ENVS_CARTPOLE_H_
