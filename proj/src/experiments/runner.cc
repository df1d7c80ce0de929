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

#include "revrl/experiments/runner.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "revrl/agents/ppo.h"
#include "revrl/core/io.h"
#include "revrl/envs/cliff.h"
#include "revrl/envs/turf.h"
#include "revrl/experiments/svg.h"
#include "revrl/oracle/phi.h"
#include "revrl/oracle/psi.h"
#include "revrl/reversibility/model.h"

namespace revrl {

namespace {

int hot_index(const Observation& x, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] > x[best]) best = i;
  }
  return static_cast<int>(best);
}

struct Estimators {
  std::shared_ptr<PrecedenceModel> psi;
  std::shared_ptr<ReversibilityModel> phi;
  std::unique_ptr<PrecedenceTrainer> psi_trainer;
  AdamState phi_opt;
  TransitionSampler transitions;
  long psi_pending = 0;
  long phi_pending = 0;
};

Estimators make_estimators(const ExperimentConfig& cfg, const Environment& env, Rng& rng) {
  const EstimatorConfig& x = cfg.estimator;
  Estimators e{nullptr, nullptr, nullptr, {},
               TransitionSampler(x.phi_final_obs.value_or(x.use_final_obs))};
  e.psi = std::make_shared<PrecedenceModel>(env.observation_size(), rng, x.psi.hidden);
  e.psi_trainer = std::make_unique<PrecedenceTrainer>(*e.psi, x.window, x.psi.batch,
                                                       AdamConfig{x.psi.learning_rate},
                                                       x.use_final_obs);
  if (cfg.wrapper.kind == "rac") {
    e.phi = std::make_shared<ReversibilityModel>(env.observation_size(), env.action_count(), rng,
                                                 x.phi.hidden);
    e.phi_opt = AdamState(e.phi->params().size(), AdamConfig{x.phi.learning_rate});
  }
  return e;
}

void train_phi(const ExperimentConfig& cfg, Estimators& e, const ReplayBuffer& buf, long steps,
               Rng& rng) {
  const PsiFunction psi = psi_of(*e.psi);
  for (long i = 0; i < steps; ++i) {
    reversibility_update(*e.phi, e.phi_opt, e.transitions.sample(buf, cfg.estimator.phi.batch, rng),
                         psi);
  }
}

double tail_mean_loss(const std::vector<LossRecord>& t) {
  if (t.empty()) return 0.0;
  const std::size_t k = std::min<std::size_t>(100, t.size());
  double s = 0.0;
  for (std::size_t i = t.size() - k; i < t.size(); ++i) s += t[i].loss;
  return s / static_cast<double>(k);
}

// Random-policy data, then psi and (for rac) phi on the frozen buffer.
void pretrain(const ExperimentConfig& cfg, Environment& env, Estimators& e, ReplayBuffer& buf,
              Rng& rng, SeedResult& out) {
  const EstimatorConfig& x = cfg.estimator;
  UniformPolicy random(env.action_count());
  Rng data = rng.fork("pretrain-data");
  double len = 0.0;
  for (long i = 0; i < x.pretrain_episodes; ++i) {
    EpisodeResult r = run_episode(env, random, data);
    len += static_cast<double>(r.metrics.length);
    r.traj.episode_index = i;
    buf.push(std::move(r.traj));
  }
  out.stats["pretrain_mean_length"] = len / static_cast<double>(x.pretrain_episodes);
  out.stats["pretrain_steps"] = static_cast<double>(buf.step_count());
  Rng psi_rng = rng.fork("pretrain-psi");
  e.psi_trainer->train(buf, static_cast<int>(x.psi.steps), psi_rng);
  out.stats["psi_final_loss"] = tail_mean_loss(e.psi_trainer->trace());
  if (e.phi) {
    Rng phi_rng = rng.fork("pretrain-phi");
    train_phi(cfg, e, buf, x.phi.steps, phi_rng);
  }
}

struct Pretrained {
  std::shared_ptr<const PrecedenceModel> psi;
  std::shared_ptr<const ReversibilityModel> phi;
  std::map<std::string, double> stats;
  std::vector<LossRecord> psi_trace;
};

// Offline estimators depend only on the environment, the estimator settings,
// the wrapper kind and the seed, so runs that differ elsewhere (thresholds,
// agent settings) share them within a process.
void offline_estimators(const ExperimentConfig& cfg, Environment& env, const Rng& rng,
                        Estimators& e, SeedResult& out) {
  static std::mutex mu;
  static std::map<std::string, Pretrained> cache;
  const nlohmann::json j = to_json(cfg);
  const std::string key = j["env"].dump() + j["estimator"].dump() + cfg.wrapper.kind + "/" +
                          std::to_string(rng.key());
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) {
      e.psi = std::make_shared<PrecedenceModel>(*it->second.psi);
      if (it->second.phi) e.phi = std::make_shared<ReversibilityModel>(*it->second.phi);
      for (const auto& [k, v] : it->second.stats) out.stats[k] = v;
      out.psi_trace = it->second.psi_trace;
      return;
    }
  }
  Rng est_rng = rng;
  e = make_estimators(cfg, env, est_rng);
  SeedResult tmp;
  {
    ReplayBuffer buf(static_cast<std::size_t>(cfg.estimator.buffer_steps));
    pretrain(cfg, env, e, buf, est_rng, tmp);
  }
  for (const auto& [k, v] : tmp.stats) out.stats[k] = v;
  out.psi_trace = e.psi_trainer->trace();
  e.psi_trainer.reset();
  Pretrained p{std::make_shared<PrecedenceModel>(*e.psi),
               e.phi ? std::make_shared<ReversibilityModel>(*e.phi) : nullptr, tmp.stats,
               out.psi_trace};
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, std::move(p));
}

// Exact empirical reversibility of the uniform policy on the cliff grid.
PhiFunction exact_cliff_phi(const CliffParams& p) {
  const TabularMdp mdp = cliff_to_mdp(p);
  const PolicyTable pi = uniform_policy(mdp);
  const PsiTable psi = exact_psi_limit(mdp, pi);
  auto table = std::make_shared<std::vector<std::vector<double>>>(mdp.states());
  for (int s = 0; s < mdp.states(); ++s) {
    auto& row = (*table)[static_cast<std::size_t>(s)];
    row.assign(static_cast<std::size_t>(mdp.actions()), 0.0);
    if (cliff_is_cliff(p, {s / p.cols, s % p.cols})) continue;
    for (int a = 0; a < mdp.actions(); ++a) {
      row[static_cast<std::size_t>(a)] = empirical_reversibility(mdp, psi, s, a).value;
    }
  }
  const std::size_t n = static_cast<std::size_t>(mdp.states());
  return [table, n](const Observation& x) { return (*table)[hot_index(x, n)]; };
}

// Memoizes phi on one-hot observations.
PhiFunction cached_one_hot(PhiFunction f, std::size_t n) {
  auto cache = std::make_shared<std::vector<std::vector<double>>>(n);
  return [f = std::move(f), cache, n](const Observation& x) {
    auto& slot = (*cache)[hot_index(x, n)];
    if (slot.empty()) slot = f(x);
    return slot;
  };
}

std::vector<double> turf_visits(const TurfMap& map, const Trajectory& t) {
  std::vector<double> v(static_cast<std::size_t>(map.rows * map.cols), 0.0);
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < t.observation_count(); ++i) v[hot_index(t.observation(i), n)] += 1.0;
  return v;
}

void add_turf_stats(const ExperimentConfig& cfg, SeedResult& out) {
  if (cfg.env.id != "turf" || out.visitation.empty()) return;
  const TurfMap map = cfg.env.turf_map.empty() ? default_turf_map() : load_turf_map(cfg.env.turf_map);
  double grass = 0.0, total = 0.0;
  for (std::size_t i = 0; i < out.visitation.size(); ++i) {
    total += out.visitation[i];
    if (map.cells[i] == TurfCell::kGrass) grass += out.visitation[i];
  }
  out.stats["grass_visitation"] = total > 0 ? grass / total : 0.0;
}

double success_rate(const std::vector<EpisodeRow>& rows, std::size_t last) {
  if (rows.empty()) return 0.0;
  const std::size_t k = std::min(last, rows.size());
  double hit = 0.0;
  for (std::size_t i = rows.size() - k; i < rows.size(); ++i) hit += rows[i].metrics.extrinsic_return > 0.0;
  return hit / static_cast<double>(k);
}

SeedResult run_random(const ExperimentConfig& cfg, std::uint64_t seed) {
  SeedResult out;
  out.seed = seed;
  Rng rng(seed);
  std::unique_ptr<Environment> env = make_env(cfg.env);
  const bool rac = cfg.wrapper.kind == "rac";
  PhiFunction phi;
  if (rac) {
    if (cfg.estimator.mode == "exact") {
      CliffParams p;
      p.p_wind = cfg.env.p_wind;
      if (cfg.env.max_steps > 0) p.max_steps = cfg.env.max_steps;
      phi = exact_cliff_phi(p);
    } else {
      Estimators e;
      offline_estimators(cfg, *env, rng.fork("estimators"), e, out);
      phi = phi_of(e.phi);
      if (cfg.env.id == "cliff") phi = cached_one_hot(phi, env->observation_size());
    }
  }
  UniformPolicy random(env->action_count());
  auto evaluate = [&](const RacFilter* filter, std::vector<EpisodeRow>* rows, long& events) {
    Rng eval = rng.fork("eval");  // same stream for every threshold
    EpisodeOptions o;
    o.rac = filter;
    o.max_steps = cfg.eval_max_steps;
    double total = 0.0;
    std::int64_t steps = 0;
    events = 0;
    for (long i = 0; i < cfg.episodes; ++i) {
      const EpisodeResult r = run_episode(*env, random, eval, o);
      steps += r.metrics.length;
      total += episode_score(cfg, r.metrics);
      events += r.metrics.irreversible_events;
      if (rows) rows->push_back({seed, i, r.metrics, steps});
    }
    return total / static_cast<double>(cfg.episodes);
  };
  long events = 0;
  if (rac) {
    const RacFilter f{cfg.wrapper.rac, phi};
    evaluate(&f, &out.episodes, events);
    for (double b : cfg.wrapper.rac_betas) {
      const RacFilter fb{{b}, phi};
      long ev = 0;
      const double score = evaluate(&fb, nullptr, ev);
      out.sweep.push_back({b, seed, score, ev});
    }
  } else {
    evaluate(nullptr, &out.episodes, events);
  }
  return out;
}

SeedResult run_ppo(const ExperimentConfig& cfg, std::uint64_t seed) {
  SeedResult out;
  out.seed = seed;
  Rng rng(seed);
  std::unique_ptr<Environment> base = make_env(cfg.env);
  const int obs = base->observation_size(), actions = base->action_count();
  const std::string& wrapper = cfg.wrapper.kind;
  const bool online = cfg.estimator.mode == "online";

  ReplayBuffer buf(wrapper != "none" && online ? static_cast<std::size_t>(cfg.estimator.buffer_steps)
                                                : 1);
  Rng est_rng = rng.fork("estimators");
  Estimators e;
  if (wrapper != "none") {
    if (online) {
      e = make_estimators(cfg, *base, est_rng);
    } else {
      offline_estimators(cfg, *base, est_rng, e, out);
    }
  }
  std::unique_ptr<Environment> env =
      wrapper == "rae" ? wrap_env_rae(std::move(base), e.psi, cfg.wrapper.rae) : std::move(base);
  std::unique_ptr<RacFilter> rac;
  if (wrapper == "rac") rac = std::make_unique<RacFilter>(RacFilter{cfg.wrapper.rac, phi_of(e.phi)});

  Rng init = rng.fork("policy-init");
  PolicyValueNet net(obs, actions, init, cfg.agent.hidden);
  const PpoConfig& pc = cfg.agent.ppo;
  AdamState opt(net.parameter_count(), AdamConfig{pc.learning_rate});
  Rng act = rng.fork("acting");
  Rng upd = rng.fork("updates");
  std::int64_t steps = 0, episode = 0;
  double entropy_sum = 0.0;
  long updates = 0, training_events = 0;
  while (steps < cfg.env_steps) {
    std::vector<EpisodeResult> eps = collect_rollout(*env, net, pc.rollout_steps, act, rac.get());
    for (EpisodeResult& r : eps) {
      steps += r.metrics.length;
      training_events += r.metrics.irreversible_events;
      out.episodes.push_back({seed, episode, r.metrics, steps});
      r.traj.episode_index = episode++;
      if (online && wrapper != "none") {
        e.psi_pending += r.metrics.length;
        e.phi_pending += r.metrics.length;
      }
    }
    const PpoDiagnostics d = ppo_update(net, build_ppo_batch(net, eps, pc), pc, opt, upd);
    entropy_sum += d.entropy_after;
    ++updates;
    if (online && wrapper != "none") {
      for (EpisodeResult& r : eps) buf.push(std::move(r.traj));
      const long n = e.psi_pending / cfg.estimator.psi_every;
      e.psi_pending -= n * cfg.estimator.psi_every;
      e.psi_trainer->train(buf, static_cast<int>(n), est_rng);
      if (e.phi) {
        const long m = e.phi_pending / cfg.estimator.phi_every;
        e.phi_pending -= m * cfg.estimator.phi_every;
        train_phi(cfg, e, buf, m, est_rng);
      }
    }
  }
  if (online && e.psi_trainer) out.psi_trace = e.psi_trainer->trace();
  out.stats["updates"] = static_cast<double>(updates);
  out.stats["mean_policy_entropy"] = updates ? entropy_sum / static_cast<double>(updates) : 0.0;
  out.stats["training_irreversible_events"] = static_cast<double>(training_events);
  out.stats["training_steps"] = static_cast<double>(steps);
  {
    double s = 0.0;
    const std::size_t k = std::min<std::size_t>(100, out.episodes.size());
    for (std::size_t i = out.episodes.size() - k; i < out.episodes.size(); ++i) {
      s += episode_score(cfg, out.episodes[i].metrics);
    }
    out.stats["last100_score"] = k ? s / static_cast<double>(k) : 0.0;
  }
  if (wrapper == "rae") {
    const std::vector<double> th = intrinsic_thirds(out.episodes);
    out.stats["intrinsic_first_third"] = th[0];
    out.stats["intrinsic_middle_third"] = th[1];
    out.stats["intrinsic_last_third"] = th[2];
  }
  if (cfg.env.id == "turf") out.stats["training_success_last100"] = success_rate(out.episodes, 100);

  if (cfg.eval_episodes > 0) {
    Rng eval = rng.fork("eval");
    NetworkPolicy policy(net);
    EpisodeOptions o;
    o.rac = rac.get();
    o.max_steps = cfg.eval_max_steps;
    std::int64_t es = 0;
    for (long i = 0; i < cfg.eval_episodes; ++i) {
      const EpisodeResult r = run_episode(*env, policy, eval, o);
      es += r.metrics.length;
      out.eval.push_back({seed, i, r.metrics, es});
      if (cfg.env.id == "turf") {
        const Environment& inner =
            wrapper == "rae" ? static_cast<const RaeEnv&>(*env).inner() : *env;
        const std::vector<double> v = turf_visits(static_cast<const Turf&>(inner).map(), r.traj);
        if (out.visitation.empty()) out.visitation.assign(v.size(), 0.0);
        for (std::size_t k = 0; k < v.size(); ++k) out.visitation[k] += v[k];
      }
    }
    if (cfg.env.id == "turf") out.stats["eval_success"] = success_rate(out.eval, out.eval.size());
    add_turf_stats(cfg, out);
  }
  return out;
}

nlohmann::json summary_json(const RunResult& r) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const SeedResult& s : r.seeds) {
    nlohmann::json j = {{"seed", s.seed}, {"score", seed_score(r.config, s)}};
    for (const auto& [k, v] : s.stats) j[k] = v;
    seeds.push_back(j);
  }
  return {{"name", r.config.name},
          {"score_mean", r.score.mean},
          {"score_ci95", r.score.ci95},
          {"score_n", r.score.n},
          {"irreversible_events", r.irreversible_events},
          {"seeds", seeds}};
}

void write_outputs(RunResult& r) {
  namespace fs = std::filesystem;
  const fs::path dir(r.config.output_dir);
  auto put = [&](const std::string& name, const std::string& text) {
    write_file_atomic((dir / name).string(), text);
    r.artifacts.push_back((dir / name).string());
  };
  put("config.json", to_json(r.config).dump(2) + "\n");
  std::vector<EpisodeRow> rows, eval;
  std::vector<SweepRow> sweep;
  for (const SeedResult& s : r.seeds) {
    rows.insert(rows.end(), s.episodes.begin(), s.episodes.end());
    eval.insert(eval.end(), s.eval.begin(), s.eval.end());
    sweep.insert(sweep.end(), s.sweep.begin(), s.sweep.end());
  }
  write_episode_metrics_csv((dir / "metrics.csv").string(), rows);
  r.artifacts.push_back((dir / "metrics.csv").string());
  if (!eval.empty()) {
    write_episode_metrics_csv((dir / "eval_metrics.csv").string(), eval);
    r.artifacts.push_back((dir / "eval_metrics.csv").string());
  }
  if (!sweep.empty()) {
    write_threshold_sweep_csv((dir / "threshold_sweep.csv").string(), sweep);
    r.artifacts.push_back((dir / "threshold_sweep.csv").string());
  }
  if (!r.seeds.empty() && !r.seeds.front().psi_trace.empty()) {
    write_loss_trace_csv((dir / "psi_loss.csv").string(), r.seeds.front().psi_trace);
    r.artifacts.push_back((dir / "psi_loss.csv").string());
  }
  put("learning_curve.svg", learning_curve_svg(r));
  if (r.config.env.id == "turf" && !r.seeds.front().visitation.empty()) {
    const TurfMap map =
        r.config.env.turf_map.empty() ? default_turf_map() : load_turf_map(r.config.env.turf_map);
    Heatmap h;
    h.title = r.config.name + ": eval state visitation (fraction)";
    h.rows = map.rows;
    h.cols = map.cols;
    h.values.assign(static_cast<std::size_t>(map.rows * map.cols), 0.0);
    double total = 0.0;
    for (const SeedResult& s : r.seeds) {
      for (std::size_t i = 0; i < s.visitation.size(); ++i) {
        h.values[i] += s.visitation[i];
        total += s.visitation[i];
      }
    }
    for (double& v : h.values) v /= total > 0 ? total : 1.0;
    put("visitation.svg", render_heatmap(h, 36));
  }
  put("summary.json", summary_json(r).dump(2) + "\n");
}

}  // namespace

double episode_score(const ExperimentConfig& cfg, const EpisodeMetrics& m) {
  return cfg.env.id == "cartpole" && cfg.env.reward_free ? static_cast<double>(m.length)
                                                          : m.extrinsic_return;
}

double seed_score(const ExperimentConfig& cfg, const SeedResult& r) {
  const std::vector<EpisodeRow>& rows = !r.eval.empty() ? r.eval : r.episodes;
  if (rows.empty()) return 0.0;
  std::size_t from = 0;
  if (r.eval.empty() && cfg.agent.kind == "ppo" && rows.size() > 100) from = rows.size() - 100;
  double s = 0.0;
  for (std::size_t i = from; i < rows.size(); ++i) s += episode_score(cfg, rows[i].metrics);
  return s / static_cast<double>(rows.size() - from);
}

SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  return cfg.agent.kind == "random" ? run_random(cfg, seed) : run_ppo(cfg, seed);
}

RunResult run(const ExperimentConfig& cfg) {
  validate(cfg);
  RunResult r;
  r.config = cfg;
  r.seeds.resize(cfg.seeds.size());
  std::vector<std::exception_ptr> errors(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
      try {
        r.seeds[i] = run_seed(cfg, cfg.seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::min<int>(cfg.workers, static_cast<int>(cfg.seeds.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<double> scores;
  for (const SeedResult& s : r.seeds) {
    scores.push_back(seed_score(cfg, s));
    for (const EpisodeRow& row : s.episodes) r.irreversible_events += row.metrics.irreversible_events;
    for (const EpisodeRow& row : s.eval) r.irreversible_events += row.metrics.irreversible_events;
  }
  r.score = summarize(scores);
  if (!cfg.output_dir.empty()) write_outputs(r);
  return r;
}

std::vector<double> intrinsic_thirds(const std::vector<EpisodeRow>& rows) {
  std::vector<double> sum(3, 0.0), steps(3, 0.0);
  if (rows.empty()) return sum;
  const double total = static_cast<double>(rows.back().wall_steps);
  for (const EpisodeRow& r : rows) {
    const int k = std::min(2, static_cast<int>(3.0 * static_cast<double>(r.wall_steps - 1) / total));
    sum[k] += r.metrics.intrinsic_return;
    steps[k] += static_cast<double>(r.metrics.length);
  }
  for (int k = 0; k < 3; ++k) sum[k] = steps[k] > 0 ? sum[k] / steps[k] : 0.0;
  return sum;
}

std::string learning_curve_svg(const RunResult& r, int bins) {
  const ExperimentConfig& cfg = r.config;
  const bool by_steps = cfg.agent.kind == "ppo";
  double xmax = 0.0;
  for (const SeedResult& s : r.seeds) {
    if (s.episodes.empty()) continue;
    xmax = std::max(xmax, by_steps ? static_cast<double>(s.episodes.back().wall_steps)
                                   : static_cast<double>(s.episodes.size()));
  }
  LineChart chart;
  chart.title = cfg.name;
  chart.x_label = by_steps ? "environment steps" : "episode";
  chart.y_label = "score";
  LineSeries score{"score (mean, 95% CI)", {}, {}, {}, {}};
  LineSeries intr{"intrinsic return", {}, {}, {}, {}};
  const bool rae = cfg.wrapper.kind == "rae";
  for (int b = 0; b < bins && xmax > 0; ++b) {
    std::vector<double> per_seed, per_seed_int;
    for (const SeedResult& s : r.seeds) {
      double t = 0.0, ti = 0.0, c = 0.0;
      for (std::size_t i = 0; i < s.episodes.size(); ++i) {
        const double x = by_steps ? static_cast<double>(s.episodes[i].wall_steps)
                                  : static_cast<double>(i + 1);
        const int k = std::min(bins - 1, static_cast<int>(bins * (x - 1) / xmax));
        if (k != b) continue;
        t += episode_score(cfg, s.episodes[i].metrics);
        ti += s.episodes[i].metrics.intrinsic_return;
        c += 1.0;
      }
      if (c > 0) {
        per_seed.push_back(t / c);
        per_seed_int.push_back(ti / c);
      }
    }
    if (per_seed.empty()) continue;
    const Summary m = summarize(per_seed);
    const double x = (b + 0.5) * xmax / bins;
    score.x.push_back(x);
    score.y.push_back(m.mean);
    score.lo.push_back(m.mean - m.ci95);
    score.hi.push_back(m.mean + m.ci95);
    intr.x.push_back(x);
    intr.y.push_back(mean(per_seed_int));
  }
  chart.series.push_back(score);
  if (rae) chart.series.push_back(intr);
  return render_line_chart(chart);
}

}  // namespace revrl
