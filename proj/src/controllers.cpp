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

#include "mediatcp/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mediatcp {

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kMediaTcp:
      return "mt";
    case ControllerKind::kRateDistortion:
      return "rd";
    case ControllerKind::kPassive:
      return "pa";
  }
  return "?";
}

std::optional<ControllerKind> parse_controller(const std::string &name) {
  if (name == "mt") return ControllerKind::kMediaTcp;
  if (name == "rd") return ControllerKind::kRateDistortion;
  if (name == "pa") return ControllerKind::kPassive;
  return std::nullopt;
}

Decision mt_decide(const ClassSet &classes, const SystemState &state, const SolverConfig &cfg,
                   int w_max) {
  SolveResult r = classes.has_edges() ? solve_dag(classes, state, cfg)
                                      : solve_independent(classes, state, cfg);
  Decision d;
  d.permissions = r.permissions;
  d.metrics = r.metrics;
  d.monotonicity_violations = r.monotonicity_violations;
  d.sent.assign(classes.size(), 0);

  auto window_of = [&]() {
    int w = 0;
    for (std::size_t m = 0; m < classes.size(); ++m) {
      if (d.permissions.permits(m)) w += state.classes[m].n;
    }
    return w;
  };
  int window = window_of();
  while (window > w_max) {
    std::size_t worst = classes.size();
    for (std::size_t m = 0; m < classes.size(); ++m) {
      if (!d.permissions.permits(m)) continue;
      if (worst == classes.size() || r.metrics[m] < r.metrics[worst]) worst = m;
    }
    d.permissions.permissions[worst] = 0;
    if (!state.classes[worst].delivered) {
      for (std::size_t c : classes.descendants(worst)) d.permissions.permissions[c] = 0;
    }
    window = window_of();
  }
  for (std::size_t m = 0; m < classes.size(); ++m) {
    if (d.permissions.permits(m)) d.sent[m] = state.classes[m].n;
  }
  d.window = window;
  d.budget = static_cast<double>(state.net.w_tcp);
  return d;
}

Decision rd_decide(const ClassSet &classes, std::span<const ClassState> states, int budget,
                   int w_max) {
  const std::size_t m_count = classes.size();
  Decision d;
  d.permissions = Action(m_count);
  d.sent.assign(m_count, 0);
  d.metrics.assign(m_count, 0.0);
  d.budget = budget;
  int left = std::clamp(budget, 0, w_max);

  Mask available(m_count, 0);
  for (std::size_t m = 0; m < m_count; ++m) available[m] = states[m].delivered ? 1 : 0;
  for (std::size_t m = 0; m < m_count; ++m) d.metrics[m] = actual_distortion(classes, m, available);

  Mask tried(m_count, 0);
  for (;;) {
    std::size_t pick = m_count;
    for (std::size_t m = 0; m < m_count; ++m) {
      if (tried[m] || states[m].n <= 0 || states[m].n > left) continue;
      double q = actual_distortion(classes, m, available);
      if (q <= 0.0) continue;
      if (pick == m_count) {
        pick = m;
        continue;
      }
      double qp = actual_distortion(classes, pick, available);
      if (q > qp || (q == qp && states[m].depth < states[pick].depth)) pick = m;
    }
    if (pick == m_count) break;
    tried[pick] = 1;
    d.permissions.permissions[pick] = 1;
    d.sent[pick] = states[pick].n;
    d.metrics[pick] = actual_distortion(classes, pick, available);
    available[pick] = 1;
    left -= states[pick].n;
    d.window += states[pick].n;
  }
  return d;
}

Decision pa_decide(const ClassSet &classes, std::span<const ClassState> states,
                   double tcp_window, int w_max) {
  const std::size_t m_count = classes.size();
  Decision d;
  d.permissions = Action(m_count);
  d.sent.assign(m_count, 0);
  d.budget = tcp_window;
  int left = static_cast<int>(std::floor(std::max(0.0, tcp_window)));
  left = std::min(left, w_max);

  std::vector<std::size_t> order(m_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return states[a].depth < states[b].depth;
  });
  for (std::size_t m : order) {
    if (left == 0) break;
    if (states[m].n <= 0) continue;
    int take = std::min(left, states[m].n);
    d.sent[m] = take;
    left -= take;
    d.window += take;
    if (take == states[m].n) d.permissions.permissions[m] = 1;
  }
  return d;
}

}  // namespace mediatcp
