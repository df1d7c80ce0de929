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

#include "revrl/envs/cartpole.h"

#include <cmath>
#include <stdexcept>

namespace revrl {

bool cartpole_out_of_bounds(const CartpoleParams& params,
                            const CartpoleState& s) {
  return s.x < -params.x_limit || s.x > params.x_limit ||
         s.theta < -params.theta_limit || s.theta > params.theta_limit;
}

CartpoleTransition cartpole_step(const CartpoleParams& p,
                                 const CartpoleState& s, CartpoleAction action,
                                 int steps_taken) {
  if (cartpole_out_of_bounds(p, s)) {
    throw std::logic_error("cartpole_step: state already terminated");
  }
  const double total_mass = p.cart_mass + p.pole_mass;
  const double pole_mass_length = p.pole_mass * p.half_length;
  const double force = action == CartpoleAction::kRight ? p.force : -p.force;
  const double cos_t = std::cos(s.theta);
  const double sin_t = std::sin(s.theta);

  const double temp =
      (force + pole_mass_length * s.theta_dot * s.theta_dot * sin_t) /
      total_mass;
  const double theta_acc =
      (p.gravity * sin_t - cos_t * temp) /
      (p.half_length *
       (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
  const double x_acc = temp - pole_mass_length * theta_acc * cos_t / total_mass;

  CartpoleTransition out;
  out.state.x = s.x + p.dt * s.x_dot;
  out.state.x_dot = s.x_dot + p.dt * x_acc;
  out.state.theta = s.theta + p.dt * s.theta_dot;
  out.state.theta_dot = s.theta_dot + p.dt * theta_acc;
  out.failed = cartpole_out_of_bounds(p, out.state);
  out.done = out.failed || steps_taken + 1 >= p.max_steps;
  out.reward = p.rewarded ? 1.0 : 0.0;
  return out;
}

Observation cartpole_observation(const CartpoleState& s) {
  return {s.x, s.x_dot, s.theta, s.theta_dot};
}

Cartpole::Cartpole(CartpoleParams params) : params_(params) {
  if (params_.max_steps <= 0) {
    throw std::invalid_argument("Cartpole: max_steps must be positive");
  }
}

std::string Cartpole::name() const {
  return params_.max_steps > 200 ? "cartpole_plus" : "cartpole";
}

std::unique_ptr<Environment> Cartpole::clone() const {
  return std::make_unique<Cartpole>(*this);
}

Observation Cartpole::reset(Rng& rng) {
  state_.x = rng.uniform(-0.05, 0.05);
  state_.x_dot = rng.uniform(-0.05, 0.05);
  state_.theta = rng.uniform(-0.05, 0.05);
  state_.theta_dot = rng.uniform(-0.05, 0.05);
  t_ = 0;
  done_ = false;
  return cartpole_observation(state_);
}

EnvStep Cartpole::step(int action, Rng& /*rng*/) {
  if (done_) throw std::logic_error("Cartpole::step after episode end");
  if (action < 0 || action > 1) {
    throw std::invalid_argument("Cartpole::step: action out of range");
  }
  const CartpoleTransition tr =
      cartpole_step(params_, state_, static_cast<CartpoleAction>(action), t_);
  state_ = tr.state;
  ++t_;
  done_ = tr.done;
  EnvStep out;
  out.obs = cartpole_observation(state_);
  out.reward = tr.reward;
  out.done = tr.done;
  out.truncated = tr.done && !tr.failed;
  return out;
}

}  // namespace revrl
