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

#include "mediatcp/media_model.hpp"

#include <algorithm>
#include <string>

#include "mediatcp/errors.hpp"

namespace mediatcp {

std::size_t Action::granted() const {
  return static_cast<std::size_t>(std::count_if(permissions.begin(), permissions.end(),
                                                [](std::uint8_t p) { return p != 0; }));
}

ClassSet::ClassSet(std::vector<ClassSpec> specs) : specs_(std::move(specs)) {
  const std::size_t m_count = specs_.size();
  parents_.assign(m_count, {});
  for (std::size_t m = 0; m < m_count; ++m) {
    const ClassSpec &s = specs_[m];
    if (s.id != static_cast<int>(m) + 1) {
      throw ConfigError("class at position " + std::to_string(m) + " has id " +
                        std::to_string(s.id) + ", expected " + std::to_string(m + 1));
    }
    if (s.q < 0.0) throw ConfigError("class " + std::to_string(s.id) + ": negative q");
    if (s.n0 < 0) throw ConfigError("class " + std::to_string(s.id) + ": negative n0");
    if (s.deadline < s.arrival_time) {
      throw ConfigError("class " + std::to_string(s.id) + ": deadline before arrival");
    }
    for (int p : s.parents) {
      if (p < 1 || p > static_cast<int>(m_count)) {
        throw ConfigError("class " + std::to_string(s.id) + ": unknown parent id " +
                          std::to_string(p));
      }
      if (p == s.id) throw ConfigError("class " + std::to_string(s.id) + " is its own parent");
      auto idx = static_cast<std::size_t>(p - 1);
      if (std::find(parents_[m].begin(), parents_[m].end(), idx) == parents_[m].end()) {
        parents_[m].push_back(idx);
      }
    }
    has_edges_ = has_edges_ || !parents_[m].empty();
  }

  // Kahn's algorithm; ties resolved by index so the order is stable.
  std::vector<int> indegree(m_count, 0);
  std::vector<std::vector<std::size_t>> children(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    indegree[m] = static_cast<int>(parents_[m].size());
    for (std::size_t p : parents_[m]) children[p].push_back(m);
  }
  std::vector<std::size_t> ready;
  for (std::size_t m = 0; m < m_count; ++m) {
    if (indegree[m] == 0) ready.push_back(m);
  }
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end());
    std::size_t m = *it;
    ready.erase(it);
    topo_.push_back(m);
    for (std::size_t c : children[m]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (topo_.size() != m_count) throw ConfigError("class dependency graph has a cycle");

  ancestors_.assign(m_count, {});
  for (std::size_t m : topo_) {
    std::vector<std::uint8_t> seen(m_count, 0);
    for (std::size_t p : parents_[m]) {
      seen[p] = 1;
      for (std::size_t a : ancestors_[p]) seen[a] = 1;
    }
    for (std::size_t a = 0; a < m_count; ++a) {
      if (seen[a]) ancestors_[m].push_back(a);
    }
  }
  descendants_.assign(m_count, {});
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t a : ancestors_[m]) descendants_[a].push_back(m);
  }
}

int ClassSet::total_packets() const {
  int total = 0;
  for (const auto &s : specs_) total += s.n0;
  return total;
}

ClassSet ClassSet::scaled(double scale) const {
  std::vector<ClassSpec> copy = specs_;
  for (auto &s : copy) s.q *= scale;
  return ClassSet(std::move(copy));
}

int next_occupancy(int n, int discards, int arrivals, bool permit, int n_max) {
  int remaining = permit ? 0 : std::max(0, n - discards);
  return std::clamp(remaining + arrivals, 0, n_max);
}

ClassState app_transition(const ClassState &state, bool permit, int n_max) {
  ClassState next = state;
  next.n = next_occupancy(state.n, state.discards, state.arrivals, permit, n_max);
  if (permit && state.n > 0) next.delivered = true;
  next.arrivals = 0;
  next.discards = 0;
  return next;
}

double actual_distortion(const ClassSet &classes, std::size_t m,
                         std::span<const std::uint8_t> availability) {
  for (std::size_t a : classes.ancestors(m)) {
    if (a >= availability.size()) {
      throw ConfigError("availability does not cover ancestor id " + std::to_string(a + 1));
    }
    if (!availability[a]) return 0.0;
  }
  return classes.spec(m).q;
}

Mask effective_availability(std::span<const ClassState> states, const Action &action) {
  Mask avail(states.size(), 0);
  for (std::size_t m = 0; m < states.size(); ++m) {
    bool granted = m < action.size() && action.permits(m) && states[m].n > 0;
    avail[m] = (states[m].delivered || granted) ? 1 : 0;
  }
  return avail;
}

double distortion_reduction(const ClassSet &classes, std::span<const ClassState> states,
                            const Action &action, std::span<const std::uint8_t> availability) {
  double total = 0.0;
  for (std::size_t m = 0; m < classes.size(); ++m) {
    if (!action.permits(m) || states[m].n == 0) continue;
    total += actual_distortion(classes, m, availability) * states[m].n;
  }
  return total;
}

void recompute_depths(const ClassSet &classes, std::span<ClassState> states) {
  // A delivered parent is transparent: its own level passes straight through,
  // so an undelivered grandparent still pushes the child down.
  for (std::size_t m : classes.topological_order()) {
    int depth = 0;
    for (std::size_t p : classes.parents(m)) {
      depth = std::max(depth, states[p].delivered ? states[p].depth : states[p].depth + 1);
    }
    states[m].depth = depth;
  }
}

}  // namespace mediatcp
