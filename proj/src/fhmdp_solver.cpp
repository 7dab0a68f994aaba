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

#include "mediatcp/fhmdp_solver.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>

#include "mediatcp/errors.hpp"

namespace mediatcp {

void validate_solver_config(const SolverConfig &cfg, std::size_t m_count) {
  if (cfg.horizon < 1) throw ConfigError("solver: horizon must be at least 1");
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) throw ConfigError("solver: gamma outside [0, 1]");
  if (!(cfg.lambda >= 0.0)) throw ConfigError("solver: lambda must be nonnegative");
  if (cfg.n_max < 0) throw ConfigError("solver: n_max must be nonnegative");
  if (cfg.chain.size() == 0) throw ConfigError("solver: network chain is empty");
  if (cfg.schedule.size() < static_cast<std::size_t>(cfg.horizon)) {
    throw ConfigError("solver: schedule covers " + std::to_string(cfg.schedule.size()) +
                      " slots, horizon needs " + std::to_string(cfg.horizon));
  }
  for (std::size_t k = 0; k < static_cast<std::size_t>(cfg.horizon); ++k) {
    if (cfg.schedule[k].arrivals.size() < m_count || cfg.schedule[k].discards.size() < m_count) {
      throw ConfigError("solver: schedule slot " + std::to_string(k) + " is missing classes");
    }
  }
}

ClassTables::ClassTables(int horizon, std::size_t grid_size, int n_cap, int first_slot)
    : horizon_(horizon), grid_size_(grid_size), n_cap_(n_cap), first_slot_(first_slot) {
  j_.resize(static_cast<std::size_t>(horizon));
  for (int k = first_slot; k < horizon; ++k) {
    j_[static_cast<std::size_t>(k)].assign(grid_size * static_cast<std::size_t>(n_cap + 1), 0.0);
  }
}

double ClassTables::at(int k, std::size_t w, int n) const {
  if (k >= horizon_) return 0.0;
  n = std::clamp(n, 0, n_cap_);
  return j_[static_cast<std::size_t>(k)][w * static_cast<std::size_t>(n_cap_ + 1) +
                                         static_cast<std::size_t>(n)];
}

std::size_t ClassTables::monotonicity_violations(double tol) const {
  std::size_t bad = 0;
  const std::size_t width = static_cast<std::size_t>(n_cap_ + 1);
  for (int k = first_slot_; k < horizon_; ++k) {
    const auto &slot = j_[static_cast<std::size_t>(k)];
    for (std::size_t w = 0; w < grid_size_; ++w) {
      for (std::size_t n = 0; n + 1 < width; ++n) {
        if (slot[w * width + n + 1] < slot[w * width + n] - tol) ++bad;
      }
    }
  }
  return bad;
}

ClassTables backward_induction_class(double q, std::size_t m, const SolverConfig &cfg,
                                     int first_slot, int n_cap, std::size_t origin) {
  if (static_cast<int>(cfg.schedule.size()) < cfg.horizon) {
    throw ConfigError("backward induction: schedule shorter than the horizon");
  }
  if (n_cap < 0) n_cap = cfg.n_max;
  const NetChain &chain = cfg.chain;
  const std::size_t g = chain.size();
  const std::size_t width = static_cast<std::size_t>(n_cap + 1);
  ClassTables tables(cfg.horizon, g, n_cap, first_slot);

  // reach[k][w]: window w can occur k slots after the decision slot
  std::vector<std::vector<std::uint8_t>> reach(static_cast<std::size_t>(cfg.horizon),
                                               std::vector<std::uint8_t>(g, 1));
  if (origin != kAllWindows) {
    for (auto &r : reach) std::fill(r.begin(), r.end(), 0);
    reach[0][origin] = 1;
    for (std::size_t k = 1; k < reach.size(); ++k) {
      for (std::size_t w = 0; w < g; ++w) {
        if (!reach[k - 1][w]) continue;
        for (const auto &entry : chain.row(w)) reach[k][entry.first] = 1;
      }
    }
  }

  std::vector<double> expected(width);
  for (int k = cfg.horizon - 1; k >= first_slot; --k) {
    const SlotSchedule &sched = cfg.schedule[static_cast<std::size_t>(k)];
    if (m >= sched.arrivals.size() || m >= sched.discards.size()) {
      throw ConfigError("backward induction: schedule slot " + std::to_string(k) +
                        " has no entry for class " + std::to_string(m + 1));
    }
    const int arrivals = sched.arrivals[m];
    const int discards = sched.discards[m];
    const bool terminal = (k == cfg.horizon - 1);
    const double *next = terminal ? nullptr : tables.slot_data(k + 1);
    double *cur = tables.slot_data(k);

    for (std::size_t w = 0; w < g; ++w) {
      if (!reach[static_cast<std::size_t>(k)][w]) continue;
      // expected[n'] = sum_w' P(w' | w) J_{k+1}(w', n')
      std::fill(expected.begin(), expected.end(), 0.0);
      if (!terminal) {
        for (const auto &[w2, prob] : chain.row(w)) {
          const double *row = next + w2 * width;
          for (std::size_t n = 0; n < width; ++n) expected[n] += prob * row[n];
        }
      }
      const double unit_gain = q - cfg.lambda / static_cast<double>(chain.window(w));
      const int sent_next = next_occupancy(0, 0, arrivals, true, n_cap);
      const double send_future = cfg.gamma * expected[static_cast<std::size_t>(sent_next)];
      for (int n = 0; n <= n_cap; ++n) {
        const int held_next = next_occupancy(n, discards, arrivals, false, n_cap);
        const double hold = cfg.gamma * expected[static_cast<std::size_t>(held_next)];
        const double send = unit_gain * n + send_future;
        cur[w * width + static_cast<std::size_t>(n)] = std::max(send, hold);
      }
    }
  }
  return tables;
}

double priority_metric(double q, std::size_t m, const SystemState &state,
                       const ClassTables &tables, const SolverConfig &cfg) {
  const NetChain &chain = cfg.chain;
  const std::size_t w = chain.index_of(state.net.w_tcp);
  const int n = std::clamp(state.classes[m].n, 0, cfg.n_max);
  const double immediate = (q - cfg.lambda / static_cast<double>(chain.window(w))) * n;
  if (cfg.horizon <= 1 || cfg.gamma == 0.0) return immediate;

  const SlotSchedule &now = cfg.schedule.front();
  const int sent_next = next_occupancy(n, now.discards[m], now.arrivals[m], true, cfg.n_max);
  const int held_next = next_occupancy(n, now.discards[m], now.arrivals[m], false, cfg.n_max);
  if (sent_next == held_next) return immediate;
  double future = 0.0;
  for (const auto &[w2, prob] : chain.row(w)) {
    future += prob * (tables.at(1, w2, sent_next) - tables.at(1, w2, held_next));
  }
  return immediate + cfg.gamma * future;
}

namespace {

// Largest occupancy class m can reach inside the horizon from its current
// buffer; tables beyond it are never read.
int reachable_cap(std::size_t m, const SystemState &state, const SolverConfig &cfg) {
  long cap = std::clamp(state.classes[m].n, 0, cfg.n_max);
  for (int k = 0; k < cfg.horizon; ++k) cap += cfg.schedule[static_cast<std::size_t>(k)].arrivals[m];
  return static_cast<int>(std::min<long>(cap, cfg.n_max));
}

void solve_class(std::size_t m, double q_act, const SystemState &state, const SolverConfig &cfg,
                 SolveResult &out) {
  out.q_act[m] = q_act;
  const int n = state.classes[m].n;
  ClassTables tables;
  // With q_act = 0 sending never pays, so J is identically 0.
  bool need_tables = cfg.keep_tables || (n > 0 && q_act > 0.0 && cfg.horizon > 1 && cfg.gamma > 0.0);
  if (need_tables) {
    if (cfg.keep_tables) {
      tables = backward_induction_class(q_act, m, cfg, 0, cfg.n_max);
    } else {
      tables = backward_induction_class(q_act, m, cfg, 1, reachable_cap(m, state, cfg),
                                        cfg.chain.index_of(state.net.w_tcp));
    }
    out.monotonicity_violations += tables.monotonicity_violations();
  }
  double pm = 0.0;
  if (n > 0 && q_act > 0.0) {
    pm = priority_metric(q_act, m, state, tables, cfg);
  } else if (n > 0) {
    pm = -cfg.lambda / static_cast<double>(cfg.chain.window(cfg.chain.index_of(state.net.w_tcp))) *
         std::min(n, cfg.n_max);
  }
  out.metrics[m] = pm;
  const bool permit = pm > 0.0 && n > 0;
  out.permissions.permissions[m] = permit ? 1 : 0;
  if (permit) {
    out.window += n;
    out.expected_quality += q_act * n;
  }
  if (cfg.keep_tables) out.tables.classes[m] = std::move(tables);
}

SolveResult make_result(std::size_t m_count, const SolverConfig &cfg) {
  SolveResult out;
  out.metrics.assign(m_count, 0.0);
  out.permissions = Action(m_count);
  out.q_act.assign(m_count, 0.0);
  if (cfg.keep_tables) out.tables.classes.resize(m_count);
  return out;
}

}  // namespace

SolveResult solve_independent(const ClassSet &classes, const SystemState &state,
                              const SolverConfig &cfg) {
  if (classes.has_edges()) {
    throw PreconditionError("solve_independent: class graph has dependencies; use solve_dag");
  }
  validate_solver_config(cfg, classes.size());
  SolveResult out = make_result(classes.size(), cfg);
  for (std::size_t m = 0; m < classes.size(); ++m) {
    solve_class(m, classes.spec(m).q, state, cfg, out);
  }
  return out;
}

SolveResult solve_dag(const ClassSet &classes, const SystemState &state,
                      const SolverConfig &cfg) {
  validate_solver_config(cfg, classes.size());
  const std::size_t m_count = classes.size();
  std::vector<ClassState> local = state.classes;
  recompute_depths(classes, local);

  // Phase order: by depth, parents before children within a depth.
  std::vector<std::size_t> order = classes.topological_order();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return local[a].depth < local[b].depth;
  });

  SolveResult out = make_result(m_count, cfg);
  Mask available(m_count, 0);
  for (std::size_t m = 0; m < m_count; ++m) available[m] = local[m].delivered ? 1 : 0;

  for (std::size_t m : order) {
    // Ancestors are all decided by now; a denied one zeroes Q_act.
    double q_act = actual_distortion(classes, m, available);
    solve_class(m, q_act, state, cfg, out);
    if (out.permissions.permits(m)) available[m] = 1;
  }
  return out;
}

double default_lambda(const NetChain &chain, const ClassSet &classes) {
  if (classes.empty()) throw PreconditionError("default_lambda: no classes");
  double weighted = 0.0;
  double weight = 0.0;
  for (const auto &s : classes.specs()) {
    weighted += s.q * s.n0;
    weight += s.n0;
  }
  double mean_q;
  if (weight > 0.0) {
    mean_q = weighted / weight;
  } else {
    mean_q = 0.0;
    for (const auto &s : classes.specs()) mean_q += s.q;
    mean_q /= static_cast<double>(classes.size());
  }
  return chain.stationary_mean() * mean_q;
}

}  // namespace mediatcp
