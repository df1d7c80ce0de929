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

#include "revrl/experiments/config.h"

#include <set>

#include "revrl/core/io.h"
#include "revrl/envs/cartpole.h"
#include "revrl/envs/cliff.h"
#include "revrl/envs/turf.h"

namespace revrl {

using nlohmann::json;

namespace {

// Reads fields from one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }
  bool has(const char* key) const { return j_.contains(key); }
  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void parse_net(const json& j, const std::string& where, NetTrainConfig& n) {
  Section s(j, where);
  s.get("hidden", n.hidden);
  s.get("learning_rate", n.learning_rate);
  s.get("batch", n.batch);
  s.get("steps", n.steps);
}

json net_json(const NetTrainConfig& n) {
  return {{"hidden", n.hidden}, {"learning_rate", n.learning_rate}, {"batch", n.batch},
          {"steps", n.steps}};
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  Section top(j, "config");
  top.get("name", c.name);
  if (const json* e = top.child("env")) {
    Section s(*e, "env");
    s.get("id", c.env.id);
    s.get("reward_free", c.env.reward_free);
    s.get("max_steps", c.env.max_steps);
    s.get("p_wind", c.env.p_wind);
    s.get("turf_map", c.env.turf_map);
  }
  if (const json* a = top.child("agent")) {
    Section s(*a, "agent");
    PpoConfig& p = c.agent.ppo;
    s.get("kind", c.agent.kind);
    s.get("hidden", c.agent.hidden);
    s.get("clip_epsilon", p.clip_epsilon);
    s.get("entropy_coef", p.entropy_coef);
    s.get("value_coef", p.value_coef);
    s.get("gamma", p.gamma);
    s.get("gae_lambda", p.gae_lambda);
    s.get("rollout_steps", p.rollout_steps);
    s.get("epochs", p.epochs);
    s.get("minibatch", p.minibatch);
    s.get("learning_rate", p.learning_rate);
    s.get("max_grad_norm", p.max_grad_norm);
    s.get("normalize_advantages", p.normalize_advantages);
  }
  if (const json* w = top.child("wrapper")) {
    Section s(*w, "wrapper");
    s.get("kind", c.wrapper.kind);
    double beta = -1.0;
    s.get("beta", beta);
    if (beta >= 0.0) c.wrapper.rae.beta = c.wrapper.rac.beta = beta;
    s.get("lambda", c.wrapper.rae.lambda);
    s.get("betas", c.wrapper.rac_betas);
  }
  if (const json* e = top.child("estimator")) {
    Section s(*e, "estimator");
    EstimatorConfig& x = c.estimator;
    s.get("mode", x.mode);
    s.get("pretrain_episodes", x.pretrain_episodes);
    s.get("window", x.window);
    s.get("psi_every", x.psi_every);
    s.get("phi_every", x.phi_every);
    s.get("use_final_obs", x.use_final_obs);
    if (s.has("phi_final_obs")) {
      bool v = false;
      s.get("phi_final_obs", v);
      x.phi_final_obs = v;
    }
    s.get("buffer_steps", x.buffer_steps);
    if (const json* p = s.child("psi")) parse_net(*p, "estimator.psi", x.psi);
    if (const json* p = s.child("phi")) parse_net(*p, "estimator.phi", x.phi);
  }
  top.get("env_steps", c.env_steps);
  top.get("episodes", c.episodes);
  top.get("eval_episodes", c.eval_episodes);
  top.get("eval_max_steps", c.eval_max_steps);
  top.get("seeds", c.seeds);
  top.get("workers", c.workers);
  top.get("output_dir", c.output_dir);
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  const PpoConfig& p = c.agent.ppo;
  const EstimatorConfig& x = c.estimator;
  json w = {{"kind", c.wrapper.kind}};
  if (c.wrapper.kind == "rae") {
    w["beta"] = c.wrapper.rae.beta;
    w["lambda"] = c.wrapper.rae.lambda;
  } else if (c.wrapper.kind == "rac") {
    w["beta"] = c.wrapper.rac.beta;
    if (!c.wrapper.rac_betas.empty()) w["betas"] = c.wrapper.rac_betas;
  }
  json out = {
      {"name", c.name},
      {"env",
       {{"id", c.env.id},
        {"reward_free", c.env.reward_free},
        {"max_steps", c.env.max_steps},
        {"p_wind", c.env.p_wind},
        {"turf_map", c.env.turf_map}}},
      {"agent",
       {{"kind", c.agent.kind},
        {"hidden", c.agent.hidden},
        {"clip_epsilon", p.clip_epsilon},
        {"entropy_coef", p.entropy_coef},
        {"value_coef", p.value_coef},
        {"gamma", p.gamma},
        {"gae_lambda", p.gae_lambda},
        {"rollout_steps", p.rollout_steps},
        {"epochs", p.epochs},
        {"minibatch", p.minibatch},
        {"learning_rate", p.learning_rate},
        {"max_grad_norm", p.max_grad_norm},
        {"normalize_advantages", p.normalize_advantages}}},
      {"wrapper", w},
      {"estimator",
       {{"mode", x.mode},
        {"pretrain_episodes", x.pretrain_episodes},
        {"window", x.window},
        {"psi_every", x.psi_every},
        {"phi_every", x.phi_every},
        {"use_final_obs", x.use_final_obs},
        {"buffer_steps", x.buffer_steps},
        {"psi", net_json(x.psi)},
        {"phi", net_json(x.phi)}}},
      {"env_steps", c.env_steps},
      {"episodes", c.episodes},
      {"eval_episodes", c.eval_episodes},
      {"eval_max_steps", c.eval_max_steps},
      {"seeds", c.seeds},
      {"workers", c.workers},
      {"output_dir", c.output_dir},
  };
  if (x.phi_final_obs) out["estimator"]["phi_final_obs"] = *x.phi_final_obs;
  return out;
}

void validate(const ExperimentConfig& c) {
  require(!c.name.empty(), "config: name is required");
  const std::string& e = c.env.id;
  require(e == "cartpole" || e == "cliff" || e == "turf", "env.id: unknown environment '" + e + "'");
  require(c.env.max_steps >= 0, "env.max_steps must be >= 0");
  require(c.env.p_wind >= 0.0 && c.env.p_wind <= 1.0, "env.p_wind must be in [0,1]");
  require(!c.env.reward_free || e == "cartpole", "env.reward_free applies to cartpole only");

  const std::string& a = c.agent.kind;
  require(a == "ppo" || a == "random", "agent.kind: unknown agent '" + a + "'");
  if (a == "ppo") {
    try {
      validate(c.agent.ppo);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("agent: ") + ex.what());
    }
    require(c.env_steps > 0, "env_steps must be > 0 for ppo");
  } else {
    require(c.episodes > 0, "episodes must be > 0 for the random agent");
  }
  for (int h : c.agent.hidden) require(h > 0, "agent.hidden sizes must be positive");

  const std::string& w = c.wrapper.kind;
  require(w == "none" || w == "rae" || w == "rac", "wrapper.kind: unknown wrapper '" + w + "'");
  try {
    if (w == "rae") validate(c.wrapper.rae);
    if (w == "rac") validate(c.wrapper.rac);
    for (double b : c.wrapper.rac_betas) validate(RacConfig{b});
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("wrapper: ") + ex.what());
  }
  require(c.wrapper.rac_betas.empty() || w == "rac", "wrapper.betas needs the rac wrapper");
  require(c.wrapper.rac_betas.empty() || a == "random", "wrapper.betas sweeps the random agent only");
  require(!(w == "rae" && a == "random"), "the rae wrapper needs a learning agent");

  const EstimatorConfig& x = c.estimator;
  require(x.mode == "online" || x.mode == "offline" || x.mode == "exact",
          "estimator.mode: unknown mode '" + x.mode + "'");
  if (w != "none") {
    require(x.mode != "exact" || (e == "cliff" && w == "rac"),
            "estimator.mode exact is available for cliff rac only");
    require(x.mode != "online" || a == "ppo", "online estimation needs a learning agent");
    if (x.mode == "offline") {
      require(x.pretrain_episodes > 0, "estimator.pretrain_episodes must be > 0 offline");
      require(x.psi.steps > 0, "estimator.psi.steps must be > 0 offline");
      require(w != "rac" || x.phi.steps > 0, "estimator.phi.steps must be > 0 offline");
    }
    if (x.mode == "online") {
      require(x.psi_every > 0 && x.phi_every > 0, "estimator.*_every must be > 0");
    }
    require(x.window > 0, "estimator.window must be > 0");
    require(x.buffer_steps > 0, "estimator.buffer_steps must be > 0");
    for (const NetTrainConfig* n : {&x.psi, &x.phi}) {
      require(n->learning_rate > 0.0 && n->batch > 0 && n->steps >= 0,
              "estimator: learning_rate, batch and steps must be positive");
      for (int h : n->hidden) require(h > 0, "estimator hidden sizes must be positive");
    }
  }
  require(c.eval_episodes >= 0 && c.eval_max_steps >= 0, "eval settings must be >= 0");
  require(!c.seeds.empty(), "seeds must not be empty");
  require(c.workers >= 1, "workers must be >= 1");
}

std::unique_ptr<Environment> make_env(const EnvConfig& c) {
  if (c.id == "cartpole") {
    CartpoleParams p;
    p.rewarded = !c.reward_free;
    if (c.max_steps > 0) p.max_steps = c.max_steps;
    return std::make_unique<Cartpole>(p);
  }
  if (c.id == "cliff") {
    CliffParams p;
    p.p_wind = c.p_wind;
    if (c.max_steps > 0) p.max_steps = c.max_steps;
    return std::make_unique<CliffWalk>(p);
  }
  if (c.id == "turf") {
    TurfMap map = c.turf_map.empty() ? default_turf_map() : load_turf_map(c.turf_map);
    return std::make_unique<Turf>(std::move(map), c.max_steps > 0 ? c.max_steps : kTurfMaxSteps);
  }
  throw ConfigError("env.id: unknown environment '" + c.id + "'");
}

}  // namespace revrl
