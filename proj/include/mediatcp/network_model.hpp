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

#ifndef MEDIATCP_NETWORK_MODEL_HPP_
#define MEDIATCP_NETWORK_MODEL_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace mediatcp {

inline constexpr double kDefaultLossFloor = 1e-4;
inline constexpr double kDefaultLossSmoothing = 0.8;
inline constexpr int kDefaultMaxWindow = 64;

// Window grid index helper: round half up, clamp to [1, w_max].
int quantize_window(double window, int w_max);

// Packets per slot a TCP flow sustains at loss rate p: sqrt(1.5 / p).
// Clamped to 1 above p = 1.5; throws DomainError for p <= 0.
double tcp_response_window(double p);

struct NetState {
  double p = 1.5 / 256.0;  // smoothed loss rate
  int w_tcp = 16;          // quantized expected TCP window

  static NetState from_loss(double p, int w_max = kDefaultMaxWindow);
};

// Finite-buffer blocking probability of an M/M/1/B queue at utilisation
// load / capacity, clamped to [p_floor, 1].
double bottleneck_loss(double aggregate_load, double capacity, int buffer,
                       double p_floor = kDefaultLossFloor);

// alpha * p_prev + (1 - alpha) * p_hat, floored at p_floor.
double smooth_loss(double p_prev, double p_hat, double alpha,
                   double p_floor = kDefaultLossFloor);

struct AimdAgent {
  double a = 1.0;  // additive increase per RTT
  double b = 0.5;  // multiplicative decrease fraction
  double w = 1.0;  // congestion window, packets
};

AimdAgent aimd_step(AimdAgent agent, bool lost);

// Row-stochastic transition matrix over a grid of window values. Rows are
// stored densely; the nonzero pattern of each row is cached because chains
// learned from traces are very sparse.
class NetChain {
 public:
  NetChain() = default;
  // Throws ConfigError unless the matrix is square over `grid`, nonnegative,
  // and every row sums to 1 within 1e-9.
  NetChain(std::vector<int> grid, std::vector<double> row_major,
           std::vector<double> initial = {});

  // Identity chain: every state is absorbing.
  static NetChain self_loops(std::vector<int> grid);
  // Grid 1..w_max.
  static std::vector<int> full_grid(int w_max);

  std::size_t size() const { return grid_.size(); }
  const std::vector<int> &grid() const { return grid_; }
  int window(std::size_t i) const { return grid_[i]; }
  double prob(std::size_t from, std::size_t to) const { return p_[from * grid_.size() + to]; }
  const std::vector<std::pair<std::size_t, double>> &row(std::size_t from) const {
    return rows_[from];
  }
  // Index of `window` on the grid, or of the nearest grid point.
  std::size_t index_of(int window) const;
  // Distribution the stationary mean starts from (uniform unless given).
  const std::vector<double> &initial() const { return initial_; }

  // Long-run mean window, computed as the Cesaro average of the state
  // distribution started from initial().
  double stationary_mean(int iterations = 2000) const;

 private:
  std::vector<int> grid_;
  std::vector<double> p_;
  std::vector<double> initial_;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
};

// Empirical chain on the grid 1..w_max. Visited rows are count-normalized
// after adding one pseudo-count to every state seen in the trace; unvisited
// rows are self-loops. Throws ConfigError for traces shorter than 2.
NetChain estimate_chain(std::span<const int> window_trace, int w_max = kDefaultMaxWindow);

}  // namespace mediatcp

#endif  // MEDIATCP_NETWORK_MODEL_HPP_
