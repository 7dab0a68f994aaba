/**
 * Copyright 2026 The MediaTCP Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mediatcp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "mediatcp/errors.hpp"

namespace mediatcp {

using nlohmann::json;

void parallel_for(std::size_t count, int parallelism, const std::function<void(std::size_t)> &job) {
  if (count == 0) return;
  int threads = parallelism > 0 ? parallelism : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, static_cast<int>(count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto &th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

Stat make_stat(std::vector<double> samples) {
  Stat s;
  s.samples = std::move(samples);
  const double n = static_cast<double>(s.samples.size());
  if (s.samples.empty()) return s;
  s.mean = std::accumulate(s.samples.begin(), s.samples.end(), 0.0) / n;
  if (s.samples.size() > 1) {
    double ss = 0.0;
    for (double v : s.samples) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

double mean_user_quality(const RunSummary &s, std::optional<ControllerKind> kind) {
  double sum = 0.0;
  int count = 0;
  for (const UserSummary &u : s.users) {
    if (kind && u.controller != to_string(*kind)) continue;
    sum += u.mean_quality;
    ++count;
  }
  if (count == 0 && kind) return mean_user_quality(s, std::nullopt);
  return count ? sum / count : 0.0;
}

namespace {

std::vector<RunSummary> run_all(const std::vector<SimConfig> &configs, int parallelism) {
  std::vector<RunSummary> out(configs.size());
  parallel_for(configs.size(), parallelism, [&](std::size_t i) { out[i] = run(configs[i]).summary; });
  return out;
}

double mean_over_mt(const RunSummary &s, double UserSummary::*field) {
  double sum = 0.0;
  int count = 0;
  for (const UserSummary &u : s.users) {
    if (u.controller != "mt") continue;
    sum += u.*field;
    ++count;
  }
  if (count == 0) {
    for (const UserSummary &u : s.users) {
      sum += u.*field;
      ++count;
    }
  }
  return count ? sum / count : 0.0;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SimConfig &base, const std::vector<double> &lambdas,
                                const std::vector<double> &gammas, const std::vector<int> &horizons,
                                const std::vector<std::uint64_t> &seeds, int parallelism) {
  if (lambdas.empty() || gammas.empty() || horizons.empty() || seeds.empty()) {
    throw ConfigError("sweep: every grid needs at least one value");
  }
  std::vector<SweepRow> rows;
  std::vector<SimConfig> configs;
  for (int k : horizons) {
    for (double g : gammas) {
      for (double l : lambdas) {
        SweepRow row;
        row.lambda = l;
        row.gamma = g;
        row.horizon = k;
        rows.push_back(row);
        for (std::uint64_t seed : seeds) {
          SimConfig c = base;
          c.seed = seed;
          for (UserConfig &u : c.users) {
            if (u.controller != ControllerKind::kMediaTcp) continue;
            u.lambda = l;
            u.gamma = g;
            u.horizon = k;
          }
          configs.push_back(std::move(c));
        }
      }
    }
  }
  std::vector<RunSummary> results = run_all(configs, parallelism);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<double> q, ratio, pass;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const RunSummary &sum = results[r * seeds.size() + s];
      q.push_back(mean_over_mt(sum, &UserSummary::mean_quality));
      ratio.push_back(mean_over_mt(sum, &UserSummary::mean_ratio));
      pass.push_back(mean_over_mt(sum, &UserSummary::friendliness_pass_rate));
    }
    rows[r].quality = make_stat(q);
    rows[r].ratio = make_stat(ratio);
    rows[r].pass_rate = make_stat(pass);
  }
  return rows;
}

std::vector<CompareRow> run_compare(const SimConfig &base,
                                    const std::vector<ControllerKind> &controllers,
                                    const std::vector<double> &delays,
                                    const std::vector<std::uint64_t> &seeds, int parallelism) {
  if (controllers.empty() || delays.empty() || seeds.empty()) {
    throw ConfigError("compare: controller, delay and seed lists must be nonempty");
  }
  std::vector<CompareRow> rows;
  std::vector<SimConfig> configs;
  for (ControllerKind kind : controllers) {
    for (double delay : delays) {
      CompareRow row;
      row.controller = to_string(kind);
      row.delay = delay;
      rows.push_back(row);
      for (std::uint64_t seed : seeds) {
        SimConfig c = base;
        c.seed = seed;
        for (UserConfig &u : c.users) {
          u.controller = kind;
          u.playback_delay = delay;
        }
        configs.push_back(std::move(c));
      }
    }
  }
  std::vector<RunSummary> results = run_all(configs, parallelism);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<double> q, ratio;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const RunSummary &sum = results[r * seeds.size() + s];
      double uq = 0.0, ur = 0.0;
      for (const UserSummary &u : sum.users) {
        uq += u.mean_quality;
        ur += u.mean_ratio;
      }
      const double n = std::max<std::size_t>(1, sum.users.size());
      q.push_back(uq / n);
      ratio.push_back(ur / n);
    }
    rows[r].quality = make_stat(q);
    rows[r].ratio = make_stat(ratio);
  }
  return rows;
}

std::vector<FairnessRow> run_fairness(const SimConfig &base, const std::vector<int> &tcp_users,
                                      const std::vector<std::uint64_t> &seeds, int parallelism) {
  if (base.users.size() < 2) throw ConfigError("fairness: needs at least two media users");
  if (tcp_users.empty() || seeds.empty()) throw ConfigError("fairness: empty grid");
  std::vector<SimConfig> configs;
  for (int count : tcp_users) {
    for (std::uint64_t seed : seeds) {
      SimConfig c = base;
      c.seed = seed;
      c.background.count = count;
      if (c.metric_sample_every <= 0) c.metric_sample_every = 50;
      configs.push_back(std::move(c));
    }
  }
  std::vector<RunSummary> results = run_all(configs, parallelism);

  std::vector<ClassSet> user_classes;
  for (const UserConfig &u : base.users) user_classes.emplace_back(u.classes);

  std::vector<FairnessRow> rows;
  for (std::size_t r = 0; r < tcp_users.size(); ++r) {
    FairnessRow row;
    row.tcp_users = tcp_users[r];
    std::vector<std::vector<double>> per_user(base.users.size());
    std::vector<double> gap, fin, at, bg;
    std::vector<MetricSamples> samples;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const RunSummary &sum = results[r * seeds.size() + s];
      for (std::size_t u = 0; u < sum.users.size(); ++u) {
        per_user[u].push_back(sum.users[u].mean_quality);
      }
      gap.push_back(std::abs(sum.users[0].mean_quality - sum.users[1].mean_quality));
      fin.push_back(sum.fairness_final.value_or(0.0));
      at.push_back(sum.fairness_at_slot.value_or(0.0));
      bg.push_back(sum.bg_mean_window);
      row.lemma2_checks += sum.lemma2_checks;
      row.lemma2_counterexamples += sum.lemma2_counterexamples;
      samples.insert(samples.end(), sum.metric_samples.begin(), sum.metric_samples.end());
    }
    for (auto &v : per_user) row.user_quality.push_back(make_stat(v));
    row.gap = make_stat(gap);
    row.fairness_final = make_stat(fin);
    row.fairness_at_slot = make_stat(at);
    row.bg_mean_window = make_stat(bg);
    row.conditions = check_theorem4_conditions(user_classes, samples);
    rows.push_back(std::move(row));
  }
  return rows;
}

OracleInstance random_instance(Stream &rng, const OracleCheckOptions &opt) {
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
  };
  const int m_count = pick(1, opt.max_classes);
  const int n_max = pick(1, opt.max_occupancy);
  const int grid_size = pick(1, opt.max_grid);
  const int horizon = pick(1, opt.max_horizon);

  std::vector<int> grid;
  while (static_cast<int>(grid.size()) < grid_size) {
    int w = pick(2, 16);
    if (std::find(grid.begin(), grid.end(), w) == grid.end()) grid.push_back(w);
  }
  std::sort(grid.begin(), grid.end());
  const std::size_t g = grid.size();
  std::vector<double> p(g * g, 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < g; ++j) {
      double v = rng.uniform() < 0.25 ? 0.0 : rng.uniform();
      p[i * g + j] = v;
      total += v;
    }
    if (total == 0.0) {
      p[i * g + i] = 1.0;
      total = 1.0;
    }
    for (std::size_t j = 0; j < g; ++j) p[i * g + j] /= total;
    // exact row sums
    double fix = 1.0;
    for (std::size_t j = 0; j + 1 < g; ++j) fix -= p[i * g + j];
    p[i * g + g - 1] = std::max(0.0, fix);
  }

  std::vector<ClassSpec> specs;
  for (int m = 0; m < m_count; ++m) {
    ClassSpec s;
    s.id = m + 1;
    s.q = 2.0 * rng.uniform();
    s.n0 = n_max;
    if (opt.dag) {
      for (int parent = 1; parent <= m; ++parent) {
        if (rng.uniform() < 0.5) s.parents.push_back(parent);
      }
    }
    specs.push_back(s);
  }

  OracleInstance inst{ClassSet(std::move(specs)), SolverConfig{}};
  SolverConfig &cfg = inst.cfg;
  cfg.lambda = 8.0 * rng.uniform();
  cfg.gamma = rng.uniform();
  cfg.horizon = horizon;
  cfg.n_max = n_max;
  cfg.chain = NetChain(grid, p);
  for (int k = 0; k < horizon; ++k) {
    SlotSchedule s;
    for (int m = 0; m < m_count; ++m) {
      s.arrivals.push_back(pick(0, n_max));
      s.discards.push_back(pick(0, n_max));
    }
    cfg.schedule.push_back(std::move(s));
  }
  return inst;
}

double separability_gap(const ClassSet &classes, const SolverConfig &cfg) {
  if (classes.has_edges()) throw PreconditionError("separability_gap: independent classes only");
  JointOracle oracle(classes, cfg);
  const std::size_t m_count = classes.size();
  std::vector<ClassTables> tables;
  for (std::size_t m = 0; m < m_count; ++m) {
    tables.push_back(backward_induction_class(classes.spec(m).q, m, cfg, 0, cfg.n_max));
  }
  std::size_t occ_states = 1;
  for (std::size_t m = 0; m < m_count; ++m) occ_states *= static_cast<std::size_t>(cfg.n_max + 1);
  const Mask none(m_count, 0);
  double worst = 0.0;
  std::vector<int> n(m_count);
  for (std::size_t w = 0; w < cfg.chain.size(); ++w) {
    std::vector<double> residual;
    for (std::size_t occ = 0; occ < occ_states; ++occ) {
      std::size_t rest = occ;
      double parts = 0.0;
      for (std::size_t m = 0; m < m_count; ++m) {
        n[m] = static_cast<int>(rest % static_cast<std::size_t>(cfg.n_max + 1));
        rest /= static_cast<std::size_t>(cfg.n_max + 1);
        parts += tables[m].at(0, w, n[m]);
      }
      residual.push_back(oracle.value(0, w, n, none) - parts);
    }
    double c = std::accumulate(residual.begin(), residual.end(), 0.0) /
               static_cast<double>(residual.size());
    for (double r : residual) worst = std::max(worst, std::abs(r - c));
  }
  return worst;
}

OracleCheckReport run_oracle_check(const OracleCheckOptions &opt) {
  OracleLimits limits;
  if (opt.max_classes > static_cast<int>(limits.max_classes) ||
      opt.max_occupancy > limits.max_occupancy ||
      opt.max_grid > static_cast<int>(limits.max_grid) || opt.max_horizon > limits.max_horizon) {
    throw ConfigError("oracle check: instance bounds exceed the oracle guard");
  }
  OracleCheckReport rep;
  Stream rng(Stream::derive(opt.seed, opt.dag ? 2 : 1));
  for (int i = 0; i < opt.instances; ++i) {
    OracleInstance inst = random_instance(rng, opt);
    const ClassSet &classes = inst.classes;
    SolverConfig cfg = inst.cfg;
    const std::size_t m_count = classes.size();
    JointOracle oracle(classes, cfg, limits);
    ++rep.instances;
    if (!classes.has_edges()) {
      rep.max_separability_gap = std::max(rep.max_separability_gap, separability_gap(classes, cfg));
    }

    std::size_t occ_states = 1;
    for (std::size_t m = 0; m < m_count; ++m) occ_states *= static_cast<std::size_t>(cfg.n_max + 1);
    const std::uint32_t avail_states = classes.has_edges() ? (1u << m_count) : 1u;
    std::vector<int> n(m_count);
    for (std::size_t w = 0; w < cfg.chain.size(); ++w) {
      for (std::size_t occ = 0; occ < occ_states; ++occ) {
        std::size_t rest = occ;
        for (std::size_t m = 0; m < m_count; ++m) {
          n[m] = static_cast<int>(rest % static_cast<std::size_t>(cfg.n_max + 1));
          rest /= static_cast<std::size_t>(cfg.n_max + 1);
        }
        for (std::uint32_t bits = 0; bits < avail_states; ++bits) {
          SystemState st;
          st.net.w_tcp = cfg.chain.window(w);
          st.classes.assign(m_count, ClassState{});
          Mask avail(m_count, 0);
          for (std::size_t m = 0; m < m_count; ++m) {
            st.classes[m].n = n[m];
            st.classes[m].delivered = (bits >> m) & 1u;
            avail[m] = st.classes[m].delivered ? 1 : 0;
          }
          SolveResult greedy = classes.has_edges() ? solve_dag(classes, st, cfg)
                                                   : solve_independent(classes, st, cfg);
          rep.monotonicity_violations += greedy.monotonicity_violations;
          ++rep.states;
          Action best = oracle.best_action(0, w, n, avail);
          double best_v = oracle.value(0, w, n, avail);
          double got_v = oracle.action_value(0, w, n, avail, greedy.permissions);
          double gap = std::abs(best_v - got_v);
          rep.max_value_gap = std::max(rep.max_value_gap, gap);
          bool perm_bad = !(best == greedy.permissions);
          bool value_bad = gap > 1e-9;
          if (perm_bad) ++rep.permission_mismatches;
          if (value_bad) ++rep.value_mismatches;
          if ((perm_bad || value_bad) && rep.examples.size() < 10) {
            std::ostringstream os;
            os << "instance " << i << " w=" << cfg.chain.window(w) << " n=[";
            for (std::size_t m = 0; m < m_count; ++m) os << (m ? "," : "") << n[m];
            os << "] delivered=" << bits << " oracle=";
            for (auto b : best.permissions) os << int(b);
            os << " solver=";
            for (auto b : greedy.permissions.permissions) os << int(b);
            os << " value gap=" << gap;
            rep.examples.push_back(os.str());
          }
        }
      }
    }
  }
  return rep;
}

json to_json(const Stat &s) {
  return json{{"mean", s.mean}, {"se", s.se}, {"samples", s.samples}};
}

json to_json(const ConvergenceReport &r) {
  auto cond = [](const ConditionResult &c) {
    return json{{"pass", c.pass}, {"counterexamples", c.counterexamples}};
  };
  return json{{"shared_q", cond(r.shared_q)},
              {"size_order", cond(r.size_order)},
              {"metric_trend", cond(r.metric_trend)},
              {"all", r.all()}};
}

}  // namespace mediatcp
