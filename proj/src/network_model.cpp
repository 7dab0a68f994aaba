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

#include "mediatcp/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "mediatcp/errors.hpp"

namespace mediatcp {

int quantize_window(double window, int w_max) {
  if (!std::isfinite(window)) return w_max;
  double rounded = std::floor(window + 0.5);
  return static_cast<int>(std::clamp(rounded, 1.0, static_cast<double>(w_max)));
}

double tcp_response_window(double p) {
  if (!(p > 0.0)) throw DomainError("tcp_response_window: loss rate must be positive");
  if (p >= 1.5) return 1.0;
  return std::sqrt(1.5 / p);
}

NetState NetState::from_loss(double p, int w_max) {
  return NetState{p, quantize_window(tcp_response_window(p), w_max)};
}

double bottleneck_loss(double aggregate_load, double capacity, int buffer, double p_floor) {
  if (aggregate_load < 0.0) throw DomainError("bottleneck_loss: negative load");
  if (!(capacity > 0.0)) throw DomainError("bottleneck_loss: capacity must be positive");
  if (buffer < 1) throw DomainError("bottleneck_loss: buffer must be at least 1");
  const double rho = aggregate_load / capacity;
  const double b = static_cast<double>(buffer);
  double blocking;
  if (std::abs(rho - 1.0) < 1e-9) {
    blocking = 1.0 / (b + 1.0);
  } else if (rho < 1.0) {
    blocking = (1.0 - rho) * std::pow(rho, b) / (1.0 - std::pow(rho, b + 1.0));
  } else {
    // Same formula divided through by rho^(B+1) so large loads cannot overflow.
    double inv = 1.0 / rho;
    blocking = (1.0 - inv) / (1.0 - std::pow(inv, b + 1.0));
  }
  return std::clamp(blocking, p_floor, 1.0);
}

double smooth_loss(double p_prev, double p_hat, double alpha, double p_floor) {
  return std::max(p_floor, alpha * p_prev + (1.0 - alpha) * p_hat);
}

AimdAgent aimd_step(AimdAgent agent, bool lost) {
  if (lost) {
    agent.w = std::max(1.0, (1.0 - agent.b) * agent.w);
  } else {
    agent.w += agent.a;
  }
  return agent;
}

NetChain::NetChain(std::vector<int> grid, std::vector<double> row_major,
                   std::vector<double> initial)
    : grid_(std::move(grid)), p_(std::move(row_major)), initial_(std::move(initial)) {
  const std::size_t g = grid_.size();
  if (g == 0) throw ConfigError("NetChain: empty window grid");
  if (p_.size() != g * g) throw ConfigError("NetChain: matrix does not match grid size");
  for (std::size_t i = 1; i < g; ++i) {
    if (grid_[i] <= grid_[i - 1]) throw ConfigError("NetChain: grid must be increasing");
  }
  if (grid_.front() < 1) throw ConfigError("NetChain: window grid starts below 1");
  rows_.assign(g, {});
  for (std::size_t i = 0; i < g; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < g; ++j) {
      double v = p_[i * g + j];
      if (!(v >= 0.0)) throw ConfigError("NetChain: negative transition probability");
      sum += v;
      if (v > 0.0) rows_[i].emplace_back(j, v);
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("NetChain: row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }
  if (initial_.empty()) {
    initial_.assign(g, 1.0 / static_cast<double>(g));
  } else {
    if (initial_.size() != g) throw ConfigError("NetChain: initial distribution size mismatch");
    double total = std::accumulate(initial_.begin(), initial_.end(), 0.0);
    if (!(total > 0.0)) throw ConfigError("NetChain: initial distribution has no mass");
    for (double &v : initial_) v /= total;
  }
}

NetChain NetChain::self_loops(std::vector<int> grid) {
  const std::size_t g = grid.size();
  std::vector<double> p(g * g, 0.0);
  for (std::size_t i = 0; i < g; ++i) p[i * g + i] = 1.0;
  return NetChain(std::move(grid), std::move(p));
}

std::vector<int> NetChain::full_grid(int w_max) {
  std::vector<int> grid(static_cast<std::size_t>(std::max(1, w_max)));
  std::iota(grid.begin(), grid.end(), 1);
  return grid;
}

std::size_t NetChain::index_of(int window) const {
  auto it = std::lower_bound(grid_.begin(), grid_.end(), window);
  if (it == grid_.end()) return grid_.size() - 1;
  if (*it == window || it == grid_.begin()) return static_cast<std::size_t>(it - grid_.begin());
  auto prev = it - 1;
  // Nearest grid point, ties toward the larger window.
  return (window - *prev < *it - window) ? static_cast<std::size_t>(prev - grid_.begin())
                                         : static_cast<std::size_t>(it - grid_.begin());
}

double NetChain::stationary_mean(int iterations) const {
  const std::size_t g = grid_.size();
  std::vector<double> dist = initial_;
  std::vector<double> next(g);
  double mean_sum = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double mean = 0.0;
    for (std::size_t i = 0; i < g; ++i) mean += dist[i] * grid_[i];
    mean_sum += mean;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < g; ++i) {
      if (dist[i] == 0.0) continue;
      for (const auto &[j, v] : rows_[i]) next[j] += dist[i] * v;
    }
    dist.swap(next);
  }
  return mean_sum / static_cast<double>(std::max(1, iterations));
}

NetChain estimate_chain(std::span<const int> window_trace, int w_max) {
  if (window_trace.size() < 2) throw ConfigError("estimate_chain: need at least two samples");
  const std::size_t g = static_cast<std::size_t>(w_max);
  std::vector<int> grid = NetChain::full_grid(w_max);
  auto idx = [&](int w) { return static_cast<std::size_t>(std::clamp(w, 1, w_max) - 1); };

  std::vector<std::uint8_t> seen(g, 0);
  for (int w : window_trace) seen[idx(w)] = 1;
  std::vector<double> counts(g * g, 0.0);
  std::vector<std::uint8_t> visited(g, 0);
  for (std::size_t t = 0; t + 1 < window_trace.size(); ++t) {
    std::size_t from = idx(window_trace[t]);
    counts[from * g + idx(window_trace[t + 1])] += 1.0;
    visited[from] = 1;
  }

  std::vector<double> p(g * g, 0.0);
  std::vector<double> initial(g, 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    if (!visited[i]) {
      p[i * g + i] = 1.0;
      continue;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < g; ++j) {
      if (seen[j]) counts[i * g + j] += 1.0;
      total += counts[i * g + j];
    }
    for (std::size_t j = 0; j < g; ++j) p[i * g + j] = counts[i * g + j] / total;
  }
  for (int w : window_trace) initial[idx(w)] += 1.0;
  return NetChain(std::move(grid), std::move(p), std::move(initial));
}

}  // namespace mediatcp
