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

#include "revrl/experiments/reproduce.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>

#include "revrl/agents/policy_value_net.h"
#include "revrl/agents/ppo.h"
#include "revrl/core/io.h"
#include "revrl/envs/tabular_mdp.h"
#include "revrl/experiments/runner.h"
#include "revrl/experiments/svg.h"
#include "revrl/nn/gradcheck.h"
#include "revrl/oracle/chain.h"
#include "revrl/oracle/monte_carlo.h"
#include "revrl/oracle/psi.h"
#include "revrl/oracle/theory.h"
#include "revrl/precedence/model.h"
#include "revrl/reversibility/model.h"

#ifndef REVRL_CONFIG_DIR
#define REVRL_CONFIG_DIR "configs"
#endif

namespace revrl {

namespace {

namespace fs = std::filesystem;

std::string num(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

std::string fixed(double v, int digits = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

CheckRow within(std::string item, double value, double ref, double rel) {
  const bool ok = std::abs(value - ref) <= rel * std::abs(ref);
  return {std::move(item), value, num(ref) + " +/- " + num(100 * rel) + "%", ok};
}

CheckRow at_least(std::string item, double value, double bound) {
  return {std::move(item), value, ">= " + num(bound), value >= bound};
}

CheckRow below(std::string item, double value, double bound) {
  return {std::move(item), value, "< " + num(bound), value < bound};
}

CheckRow exactly(std::string item, double value, double ref) {
  return {std::move(item), value, "= " + num(ref), value == ref};
}

int majority(std::size_t n, double frac) {
  return static_cast<int>(std::ceil(frac * static_cast<double>(n) - 1e-12));
}

void merge(Report& into, const Report& from) {
  into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
  into.tables.insert(into.tables.end(), from.tables.begin(), from.tables.end());
  into.notes.insert(into.notes.end(), from.notes.begin(), from.notes.end());
}

std::string grid_table(const std::string& title, const std::vector<double>& rows,
                       const std::vector<double>& cols,
                       const std::vector<std::vector<std::string>>& cells) {
  std::ostringstream out;
  out << title << "\n";
  out << "  p \\ thr ";
  for (double c : cols) out << " | " << fixed(c);
  out << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << "  " << fixed(rows[i]) << "     ";
    for (const std::string& s : cells[i]) out << " | " << s;
    out << "\n";
  }
  return out.str();
}

void write_report(const Report& r, const ReproduceOptions& opts) {
  if (opts.out_dir.empty()) return;
  const fs::path dir = fs::path(opts.out_dir) / r.target;
  fs::create_directories(dir);
  write_file_atomic((dir / "report.txt").string(), r.text());
  CsvTable t({"item", "value", "reference", "pass"});
  for (const CheckRow& c : r.rows) t.row({c.item, format_real(c.value), c.reference, c.pass ? "1" : "0"});
  t.write((dir / "report.csv").string());
}

ExperimentConfig with_output(ExperimentConfig cfg, const ReproduceOptions& opts,
                             const std::string& target, const std::string& sub) {
  cfg.output_dir = opts.out_dir.empty() ? "" : (fs::path(opts.out_dir) / target / sub).string();
  return cfg;
}

double mean_stat(const RunResult& r, const std::string& key) {
  double s = 0.0;
  for (const SeedResult& x : r.seeds) s += x.stats.at(key);
  return r.seeds.empty() ? 0.0 : s / static_cast<double>(r.seeds.size());
}

// ---- cliff tables ----

constexpr double kCliffRandom[5][5] = {{57.5, 57.7, 61.2, 58.2, 57.7},
                                       {29.8, 28.8, 29.5, 30.2, 29.6},
                                       {18.6, 18.5, 19.3, 18.9, 18.8},
                                       {13.4, 13.3, 13.9, 13.6, 13.4},
                                       {10.5, 10.7, 10.4, 10.2, 10.2}};
constexpr double kCliffRac[5][5] = {{59.1, 250.0, 250.0, 250.0, 250.0},
                                    {29.2, 56.0, 56.3, 80.2, 248.5},
                                    {18.7, 26.7, 29.2, 85.8, 238.6},
                                    {13.2, 16.8, 19.6, 77.6, 250.0},
                                    {10.4, 12.5, 24.9, 152.2, 250.0}};

Report cliff_tables(const ReproduceOptions& opts) {
  Report rep;
  rep.target = "cliff-tables";
  const ExperimentConfig base = canned_config("cliff-tables", opts);
  const std::vector<double> ps{0.0, 0.1, 0.2, 0.3, 0.4};
  const std::vector<double> thr = base.wrapper.rac_betas;
  if (thr.size() != 5) throw ConfigError("cliff-tables: expects five thresholds in wrapper.betas");
  std::vector<std::vector<std::string>> t1(5), t2(5), t3(5);
  CsvTable csv({"table", "p", "threshold", "score", "reference", "pass"});
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::vector<double> random(5), rac(5, 0.0);
    for (std::size_t c = 0; c < 5; ++c) {
      ExperimentConfig cfg = base;
      cfg.name = "cliff-random";
      cfg.env.p_wind = ps[i];
      cfg.wrapper.kind = "none";
      cfg.wrapper.rac_betas.clear();
      cfg.estimator.mode = "online";
      cfg.output_dir.clear();
      for (std::uint64_t& s : cfg.seeds) s += 1000 * (c + 1);  // one independent sample per cell
      random[c] = run(cfg).score.mean;
    }
    ExperimentConfig cfg = with_output(base, opts, rep.target, "p" + fixed(ps[i]));
    cfg.env.p_wind = ps[i];
    const RunResult r = run(cfg);
    for (const SeedResult& s : r.seeds) {
      for (const SweepRow& row : s.sweep) {
        const auto k = std::find(thr.begin(), thr.end(), row.beta) - thr.begin();
        rac[static_cast<std::size_t>(k)] += row.score / static_cast<double>(r.seeds.size());
      }
    }
    ExperimentConfig ex = base;
    ex.name = "cliff-rac-exact";
    ex.env.p_wind = ps[i];
    ex.estimator.mode = "exact";
    for (const SeedResult& s : run(ex).seeds) {
      for (const SweepRow& row : s.sweep) t3[i].push_back(fixed(row.score) + " ");
    }
    for (std::size_t c = 0; c < 5; ++c) {
      const std::string cell = "p=" + fixed(ps[i]) + " thr=" + fixed(thr[c]);
      CheckRow a = within("random " + cell, random[c], kCliffRandom[i][c], 0.05);
      CheckRow b = within("random+RAC " + cell, rac[c], kCliffRac[i][c], 0.10);
      t1[i].push_back(fixed(random[c]) + (a.pass ? " " : "*"));
      t2[i].push_back(fixed(rac[c]) + (b.pass ? " " : "*"));
      csv.row({"random", format_real(ps[i]), format_real(thr[c]), format_real(random[c]),
               format_real(kCliffRandom[i][c]), a.pass ? "1" : "0"});
      csv.row({"random+rac", format_real(ps[i]), format_real(thr[c]), format_real(rac[c]),
               format_real(kCliffRac[i][c]), b.pass ? "1" : "0"});
      rep.rows.push_back(a);
      rep.rows.push_back(b);
    }
    bool monotone = true;
    for (std::size_t c = 1; c < 5; ++c) monotone = monotone && rac[c] >= rac[c - 1];
    rep.rows.push_back({"RAC nondecreasing in threshold, p=" + fixed(ps[i]), monotone ? 1.0 : 0.0,
                        "= 1", monotone});
    rep.rows.push_back(at_least("RAC uplift at thr=0.4 over random, p=" + fixed(ps[i]),
                                rac[4] / random[0], 4.0));
  }
  rep.tables.push_back(grid_table("random policy (* outside +/-5%)", ps, thr, t1));
  rep.tables.push_back(grid_table("random policy + RAC (* outside +/-10%)", ps, thr, t2));
  rep.tables.push_back(grid_table("cross-check: random policy + RAC with the exact limit reversibility",
                                  ps, thr, t3));
  if (!opts.out_dir.empty()) {
    fs::create_directories(fs::path(opts.out_dir) / rep.target);
    csv.write((fs::path(opts.out_dir) / rep.target / "cliff_tables.csv").string());
  }
  return rep;
}

// ---- cartpole ----

Report cartpole_reward_free(const ReproduceOptions& opts) {
  Report rep;
  rep.target = "cartpole-reward-free";
  const ExperimentConfig cfg =
      with_output(canned_config("cartpole-reward-free", opts), opts, rep.target, "run");
  const RunResult r = run(cfg);
  int solved = 0;
  std::vector<double> thirds(3, 0.0);
  for (const SeedResult& s : r.seeds) {
    const double last = s.stats.at("last100_score");
    solved += last >= 195.0;
    rep.notes.push_back("seed " + std::to_string(s.seed) + ": last-100 mean length " +
                        fixed(last) + ", intrinsic per step by thirds " +
                        num(s.stats.at("intrinsic_first_third")) + " / " +
                        num(s.stats.at("intrinsic_middle_third")) + " / " +
                        num(s.stats.at("intrinsic_last_third")));
  }
  thirds[0] = mean_stat(r, "intrinsic_first_third");
  thirds[1] = mean_stat(r, "intrinsic_middle_third");
  thirds[2] = mean_stat(r, "intrinsic_last_third");
  rep.rows.push_back(at_least("seeds with last-100 mean length >= 195", solved,
                              majority(r.seeds.size(), 0.7)));
  rep.rows.push_back(below("intrinsic middle third minus first third", thirds[1] - thirds[0], 0.0));
  rep.rows.push_back(below("intrinsic middle third minus last third", thirds[1] - thirds[2], 0.0));
  return rep;
}

Report cartpole_plus(const ReproduceOptions& opts) {
  Report rep;
  rep.target = "cartpole-plus";
  const ExperimentConfig cfg =
      with_output(canned_config("cartpole-plus", opts), opts, rep.target, "run");
  const std::vector<double>& betas = cfg.wrapper.rac_betas;
  if (std::find(betas.begin(), betas.end(), 0.0) == betas.end()) {
    throw ConfigError("cartpole-plus: wrapper.betas must include 0 (unfiltered)");
  }
  const RunResult r = run(cfg);
  std::map<double, double> score;
  for (const SeedResult& s : r.seeds) {
    for (const SweepRow& row : s.sweep) score[row.beta] += row.score / static_cast<double>(r.seeds.size());
  }
  double best_beta = 0.0, best = -1.0;
  for (const auto& [b, v] : score) {
    rep.notes.push_back("beta " + fixed(b, 2) + ": mean score " + fixed(v));
    if (b > 0.0 && v > best) {
      best = v;
      best_beta = b;
    }
  }
  rep.rows.push_back(within("random-policy pretraining mean length",
                            mean_stat(r, "pretrain_mean_length"), 20.0, 0.25));
  rep.rows.push_back(at_least("random + RAC mean score at best beta=" + fixed(best_beta, 2), best,
                              10000.0));
  rep.rows.push_back(below("unfiltered random mean score", score.at(0.0), 50.0));
  return rep;
}

// ---- turf ----

Report turf_rac(const ReproduceOptions& opts) {
  Report rep;
  rep.target = "turf-rac";
  const ExperimentConfig cfg = with_output(canned_config("turf-rac", opts), opts, rep.target, "run");
  const RunResult r = run(cfg);
  int good = 0;
  for (const SeedResult& s : r.seeds) {
    const double succ = s.stats.at("training_success_last100");
    const double spoils = s.stats.at("training_irreversible_events");
    good += succ >= 0.9 && spoils == 0.0;
    rep.notes.push_back("seed " + std::to_string(s.seed) + ": success over last 100 episodes " +
                        fixed(100 * succ) + "%, spoiled cells during training " + fixed(spoils, 0));
  }
  rep.rows.push_back(at_least("seeds with >= 90% success and 0 spoils", good,
                              majority(r.seeds.size(), 0.8)));
  return rep;
}

std::string sweep_chart(const std::string& title, const std::string& y_label,
                        const std::vector<std::pair<double, RunResult>>& runs, bool cumulative_spoils) {
  LineChart chart;
  chart.title = title;
  chart.x_label = "environment steps";
  chart.y_label = y_label;
  for (const auto& [beta, r] : runs) {
    LineSeries s{"beta " + fixed(beta, 1), {}, {}, {}, {}};
    const int bins = 40;
    double xmax = 0.0;
    for (const SeedResult& x : r.seeds) {
      if (!x.episodes.empty()) xmax = std::max(xmax, static_cast<double>(x.episodes.back().wall_steps));
    }
    for (int b = 0; b < bins && xmax > 0; ++b) {
      const double hi = (b + 1) * xmax / bins;
      std::vector<double> per_seed;
      for (const SeedResult& x : r.seeds) {
        double tot = 0.0, cnt = 0.0;
        for (const EpisodeRow& e : x.episodes) {
          const auto step = static_cast<double>(e.wall_steps);
          if (cumulative_spoils) {
            if (step <= hi) tot += e.metrics.irreversible_events;
            cnt = 1.0;
          } else if (step > hi - xmax / bins && step <= hi) {
            tot += e.metrics.extrinsic_return;
            cnt += 1.0;
          }
        }
        if (cnt > 0) per_seed.push_back(tot / cnt);
      }
      if (per_seed.empty()) continue;
      const Summary m = summarize(per_seed);
      s.x.push_back(hi);
      s.y.push_back(m.mean);
      s.lo.push_back(m.mean - m.ci95);
      s.hi.push_back(m.mean + m.ci95);
    }
    chart.series.push_back(s);
  }
  return render_line_chart(chart);
}

Report beta_sweep(const ReproduceOptions& opts) {
  Report rep;
  rep.target = "beta-sweep";
  const ExperimentConfig base = canned_config("beta-sweep", opts);
  std::vector<std::pair<double, RunResult>> runs;
  std::vector<SweepRow> rows;
  for (double beta : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    ExperimentConfig cfg = with_output(base, opts, rep.target, "beta" + fixed(beta));
    cfg.wrapper.rac.beta = beta;
    runs.emplace_back(beta, run(cfg));
    for (const SeedResult& s : runs.back().second.seeds) {
      rows.push_back({beta, s.seed, s.stats.at("training_success_last100"),
                      static_cast<long>(s.stats.at("training_irreversible_events"))});
    }
  }
  bool no_learn = true, effects = true, band = true;
  bool has_high = false, has_low = false, has_band = false;
  for (const auto& [beta, r] : runs) {
    const double succ = mean_stat(r, "training_success_last100");
    const double spoils = mean_stat(r, "training_irreversible_events");
    rep.notes.push_back("beta " + fixed(beta) + ": success " + fixed(100 * succ) +
                        "%, mean spoils during training " + fixed(spoils));
    if (beta > 0.4 + 1e-9) {
      has_high = true;
      no_learn = no_learn && succ < 0.1;
    }
    if (beta < 0.2 - 1e-9) {
      has_low = true;
      for (const SeedResult& s : r.seeds) effects = effects && s.stats.at("training_irreversible_events") > 0;
    }
    if (beta > 0.2 - 1e-9 && beta < 0.4 + 1e-9) {
      has_band = true;
      band = band && spoils == 0.0;
    }
  }
  if (has_high) rep.rows.push_back({"no learning for beta > 0.4", no_learn ? 1.0 : 0.0, "= 1", no_learn});
  if (has_low) rep.rows.push_back({"side effects for beta < 0.2", effects ? 1.0 : 0.0, "= 1", effects});
  if (has_band) rep.rows.push_back({"zero side effects for beta in [0.2, 0.4]", band ? 1.0 : 0.0, "= 1", band});
  if (!opts.out_dir.empty()) {
    const fs::path dir = fs::path(opts.out_dir) / rep.target;
    fs::create_directories(dir);
    write_threshold_sweep_csv((dir / "threshold_sweep.csv").string(), rows);
    write_file_atomic((dir / "rewards.svg").string(),
                      sweep_chart("PPO + RAC on Turf: reward", "mean episode reward", runs, false));
    write_file_atomic((dir / "side_effects.svg").string(),
                      sweep_chart("PPO + RAC on Turf: spoiled cells", "cumulative spoiled cells",
                                  runs, true));
  }
  return rep;
}

Report turf_rae(const ReproduceOptions& opts) {
  Report rep;
  rep.target = "turf-rae";
  const RunResult rae = run(with_output(canned_config("turf-rae", opts), opts, rep.target, "rae"));
  const RunResult ppo = run(with_output(canned_config("turf-ppo", opts), opts, rep.target, "ppo"));
  const double g_rae = mean_stat(rae, "grass_visitation");
  const double g_ppo = mean_stat(ppo, "grass_visitation");
  rep.notes.push_back("PPO + RAE eval success " + fixed(100 * mean_stat(rae, "eval_success")) +
                      "%, plain PPO " + fixed(100 * mean_stat(ppo, "eval_success")) + "%");
  rep.rows.push_back(below("PPO + RAE grass visitation fraction", g_rae, 0.05));
  rep.rows.push_back({"plain PPO grass visitation fraction", g_ppo, "> 0.2", g_ppo > 0.2});
  return rep;
}

TabularMdp single_state_mdp() {
  TabularMdp m(1, 1);
  m.p(0, 0, 0) = 1.0;
  m.initial() = {1.0};
  return m;
}

// Removes every move back to a lower-indexed state from a random half of
// the states, which creates transient states and psi = 1 pairs.
void make_one_way(TabularMdp& m, Rng& rng) {
  for (int s = 0; s < m.states(); ++s) {
    if (!rng.bernoulli(0.5)) continue;
    for (int a = 0; a < m.actions(); ++a) {
      double kept = 0.0;
      for (int t = 0; t < m.states(); ++t) {
        if (t < s) m.p(s, a, t) = 0.0;
        kept += m.p(s, a, t);
      }
      if (kept <= 0.0) {
        m.p(s, a, s) = 1.0;
        continue;
      }
      for (int t = 0; t < m.states(); ++t) m.p(s, a, t) /= kept;
    }
  }
}

Eigen::VectorXd random_params(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = 0.5 * rng.normal();
  return p;
}

std::string check_group(const std::string& name) {
  if (name == "empirical>=phi_pi/2") return "empirical reversibility >= phi_pi / 2";
  if (name.rfind("empirical>=rho^K", 0) == 0) return "empirical reversibility >= rho^K / 2 * phi_K";
  if (name == "psi(s,s')+psi(s',s)=1" || name == "definedness-symmetric") return "antisymmetry";
  if (name == "strong-transitivity") return "transitivity of the psi = 1 relation";
  if (name == "chain-through-strong") return "chains through a psi = 1 link";
  return "phi ordering sanity";
}

}  // namespace

bool Report::pass() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const CheckRow& c) { return !c.pass; }));
}

std::string Report::text() const {
  std::ostringstream out;
  out << "== " << target << " ==\n";
  for (const std::string& t : tables) out << t << "\n";
  std::size_t width = 0;
  for (const CheckRow& c : rows) width = std::max(width, c.item.size());
  for (const CheckRow& c : rows) {
    out << (c.pass ? "PASS  " : "FAIL  ") << c.item << std::string(width - c.item.size() + 2, ' ')
        << num(c.value, 6) << "  (" << c.reference << ")\n";
  }
  for (const std::string& n : notes) out << "  " << n << "\n";
  out << target << ": " << (pass() ? "PASS" : "FAIL") << " (" << rows.size() - failures() << "/"
      << rows.size() << " checks)\n";
  return out.str();
}

std::string default_config_dir() { return REVRL_CONFIG_DIR; }

std::vector<std::string> reproduce_targets() {
  return {"cliff-tables", "cartpole-reward-free", "cartpole-plus", "turf-rae",
          "turf-rac",     "beta-sweep",           "theory-suite"};
}

ExperimentConfig canned_config(const std::string& name, const ReproduceOptions& opts) {
  const std::string dir = opts.config_dir.empty() ? default_config_dir() : opts.config_dir;
  ExperimentConfig cfg = load_config((fs::path(dir) / (name + ".json")).string());
  if (opts.seeds > 0) {
    cfg.seeds.clear();
    for (int i = 0; i < opts.seeds; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
  }
  cfg.workers = std::max(cfg.workers, opts.workers);
  cfg.output_dir.clear();
  validate(cfg);
  return cfg;
}

Report reproduce(const std::string& target, const ReproduceOptions& opts) {
  Report r;
  if (target == "cliff-tables") {
    r = cliff_tables(opts);
  } else if (target == "cartpole-reward-free") {
    r = cartpole_reward_free(opts);
  } else if (target == "cartpole-plus") {
    r = cartpole_plus(opts);
  } else if (target == "turf-rae") {
    r = turf_rae(opts);
  } else if (target == "turf-rac") {
    r = turf_rac(opts);
  } else if (target == "beta-sweep") {
    r = beta_sweep(opts);
  } else if (target == "theory-suite") {
    r = theory_suite();
    merge(r, psi_monte_carlo_check());
  } else {
    throw std::invalid_argument("unknown reproduce target: " + target);
  }
  write_report(r, opts);
  return r;
}

Report theory_suite(int instances, double tol, std::uint64_t seed) {
  if (instances <= 0) throw std::invalid_argument("theory_suite: instances must be positive");
  Report rep;
  rep.target = "theory-suite";
  Rng rng(seed);
  std::map<std::string, std::pair<long, long>> groups;  // passed, total
  int clean = 0;
  for (int i = 0; i < instances; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform_int(7));
    const int a = 1 + static_cast<int>(rng.uniform_int(4));
    TabularMdp m = random_dirichlet_mdp(n, a, 1.0, rng);
    if (i % 2 == 1) make_one_way(m, rng);
    const PolicyTable pi = epsilon_mixed_policy(m, 0.3, rng);
    const TheoryReport r = verify_theory(m, pi, tol);
    clean += r.all_pass();
    for (const TheoryCheck& c : r.checks) {
      auto& g = groups[check_group(c.name)];
      g.first += c.pass;
      ++g.second;
    }
    if (!r.all_pass()) rep.notes.push_back(r.text());
  }
  rep.rows.push_back(exactly("random instances with every check passing", clean, instances));
  for (const auto& [name, g] : groups) {
    rep.rows.push_back({name + " (" + std::to_string(g.second) + " checks)",
                        static_cast<double>(g.first), "= " + std::to_string(g.second),
                        g.first == g.second && g.second > 0});
  }
  const TabularMdp one = single_state_mdp();
  const TheoryReport tight = verify_theory(one, uniform_policy(one), tol);
  const bool eq = tight.all_pass() && !tight.checks.empty() && tight.checks[0].lhs == tight.checks[0].rhs;
  rep.rows.push_back({"single state: bound holds with equality", tight.checks.empty() ? 0.0 : tight.checks[0].lhs,
                      "= 0.5", eq && tight.checks[0].lhs == 0.5});
  const TabularMdp cyc = three_cycle();
  const auto v = find_half_transitivity_violation(exact_psi_T_table(cyc, uniform_policy(cyc), 3));
  rep.rows.push_back({"three-cycle: s1 -> s2 -> s3 but not s1 -> s3 (psi13)", v ? v->psi13 : 1.0,
                      "< 0.5", v.has_value() && v->psi13 < 0.5});
  return rep;
}

Report psi_monte_carlo_check(int chains, std::int64_t trajectories, std::uint64_t seed) {
  Report rep;
  rep.target = "psi-monte-carlo";
  Rng rng = Rng(seed).fork("psi-mc");
  int agree = 0;
  for (int i = 0; i < chains; ++i) {
    const int T = 6 + i % 5;
    const TabularMdp m = random_dirichlet_mdp(4 + i % 3, 2, 1.0, rng);
    const PolicyTable pi = epsilon_mixed_policy(m, 0.3, rng);
    const PsiTable table = exact_psi_T_table(m, pi, T);
    int s = 0, s2 = 1;
    for (int t = 0; t < 32 && !table.is_defined(s, s2); ++t) {
      s = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(m.states())));
      s2 = (s + 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(m.states() - 1)))) % m.states();
    }
    const double exact = exact_psi_T(m, pi, s, s2, T);
    const McPsiEstimate mc = monte_carlo_psi_T(m, pi, s, s2, T, trajectories, rng);
    const double z = std::abs(mc.estimate - exact) / mc.std_error;
    agree += z <= 3.0;
    rep.notes.push_back("chain " + std::to_string(i) + " T=" + std::to_string(T) + " pair (" +
                        std::to_string(s) + "," + std::to_string(s2) + "): exact " + num(exact, 8) +
                        ", monte carlo " + num(mc.estimate, 8) + " +/- " + num(mc.std_error, 3) +
                        " (|z| = " + num(z, 3) + ")");
  }
  rep.rows.push_back(exactly("chains where psi_T matches Monte Carlo within 3 SE", agree, chains));
  return rep;
}

Report gradient_suite(int draws, std::uint64_t seed) {
  Report rep;
  rep.target = "gradients";
  Rng rng = Rng(seed).fork("gradients");
  const std::vector<std::pair<std::string, std::vector<LayerSpec>>> shapes{
      {"dense relu-relu-identity", {{6, 16, Activation::kRelu}, {16, 8, Activation::kRelu}, {8, 3, Activation::kIdentity}}},
      {"dense tanh-tanh-identity", {{4, 64, Activation::kTanh}, {64, 64, Activation::kTanh}, {64, 2, Activation::kIdentity}}},
      {"dense relu-sigmoid", {{5, 12, Activation::kRelu}, {12, 4, Activation::kSigmoid}}},
      {"dense relu-relu embedder", {{4, 64, Activation::kRelu}, {64, 64, Activation::kRelu}}},
      {"dense single sigmoid", {{128, 1, Activation::kSigmoid}}},
  };
  for (const auto& [name, layers] : shapes) {
    const GradCheckResult g = gradient_check(layers, draws, rng);
    rep.rows.push_back(below(name + ": max relative error", g.max_rel_error, 1e-4));
  }
  double worst_psi = 0.0, worst_phi = 0.0, worst_ppo = 0.0;
  for (int d = 0; d < draws; ++d) {
    {
      PrecedenceModel m(5, rng, {8, 6});
      m.set_params(random_params(m.parameter_count(), rng));
      const Eigen::MatrixXd X = Eigen::MatrixXd::Random(5, 6), X2 = Eigen::MatrixXd::Random(5, 6);
      Eigen::VectorXd y(6);
      for (int j = 0; j < 6; ++j) y[j] = static_cast<double>(rng.uniform_int(2));
      const BceResult r = m.bce(X, X2, y);
      PrecedenceModel probe = m;
      auto loss = [&](const Eigen::VectorXd& p) {
        probe.set_params(p);
        return probe.bce(X, X2, y).loss;
      };
      worst_psi = std::max(worst_psi, finite_difference_error(loss, m.params(), r.grad,
                                                              sample_coords(m.parameter_count(), 64, rng),
                                                              1e-5, nullptr));
    }
    {
      ReversibilityModel m(6, 4, rng, {12, 8});
      m.mutable_params() = random_params(m.params().size(), rng);
      const Eigen::MatrixXd X = Eigen::MatrixXd::Random(6, 5);
      std::vector<int> acts(5);
      for (int& a : acts) a = static_cast<int>(rng.uniform_int(4));
      const Eigen::VectorXd tgt = Eigen::VectorXd::Random(5).cwiseAbs();
      const Eigen::VectorXd g = m.mse(X, acts, tgt).grad;
      ReversibilityModel probe = m;
      auto loss = [&](const Eigen::VectorXd& p) {
        probe.mutable_params() = p;
        return probe.mse(X, acts, tgt).loss;
      };
      worst_phi = std::max(worst_phi, finite_difference_error(loss, m.params(), g,
                                                              sample_coords(m.params().size(), 64, rng),
                                                              1e-5, nullptr));
    }
    {
      const bool shared = d % 2 == 1;
      PolicyValueNet net(5, 3, rng, {7}, shared ? std::vector<int>{6} : std::vector<int>{});
      net.set_params(random_params(net.parameter_count(), rng));
      PpoBatch b;
      const int n = 10;
      b.obs = Eigen::MatrixXd::Random(5, n);
      b.logp_old.resize(n);
      b.advantages = Eigen::VectorXd::Random(n);
      b.returns = Eigen::VectorXd::Random(n);
      for (int j = 0; j < n; ++j) {
        std::vector<unsigned char> mask;
        int a = static_cast<int>(rng.uniform_int(3));
        if (j % 3 == 0) {
          mask = {1, 1, 1};
          mask[(a + 1) % 3] = 0;
        }
        b.actions.push_back(a);
        b.masks.push_back(mask);
        b.logp_old[j] = std::log(rng.uniform(0.2, 0.6));
      }
      std::vector<Eigen::Index> idx(n);
      for (int j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = j;
      PpoConfig cfg;
      cfg.entropy_coef = 0.3;
      const PpoLoss l = ppo_loss(net, b, idx, cfg);
      PolicyValueNet probe = net;
      auto loss = [&](const Eigen::VectorXd& th) {
        probe.set_params(th);
        return ppo_loss(probe, b, idx, cfg).loss;
      };
      worst_ppo = std::max(worst_ppo, finite_difference_error(loss, net.params(), l.grad,
                                                              sample_coords(net.parameter_count(), 64, rng),
                                                              1e-5, nullptr));
    }
  }
  rep.rows.push_back(below("precedence classifier (bce): max relative error", worst_psi, 1e-4));
  rep.rows.push_back(below("reversibility estimator (mse): max relative error", worst_phi, 1e-4));
  rep.rows.push_back(below("policy/value net (clipped ppo loss): max relative error", worst_ppo, 1e-4));
  rep.notes.push_back(std::to_string(draws) + " draws per network");
  return rep;
}

}  // namespace revrl
