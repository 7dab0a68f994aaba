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

#ifndef MEDIATCP_FHMDP_SOLVER_HPP_
#define MEDIATCP_FHMDP_SOLVER_HPP_

#include <cstddef>
#include <vector>

#include "mediatcp/media_model.hpp"
#include "mediatcp/network_model.hpp"

namespace mediatcp {

// Arrivals and discards per class for one slot of the planning horizon.
// Entry k drives the occupancy transition out of slot i + k.
struct SlotSchedule {
  std::vector<int> arrivals;
  std::vector<int> discards;
};

// Joint FHMDP state: network state plus the per-class buffers.
struct SystemState {
  NetState net;
  std::vector<ClassState> classes;
};

struct SolverConfig {
  double lambda = 10.0;  // Lagrangian price of the friendliness constraint
  double gamma = 0.8;    // discount
  int horizon = 4;       // K
  NetChain chain;        // P(W_TCP' | W_TCP)
  std::vector<SlotSchedule> schedule;  // horizon entries, slot i first
  int n_max = kDefaultMaxOccupancy;
  bool keep_tables = false;  // return the per-class tables in SolveResult
};

// Throws ConfigError when the config cannot drive a solve over m_count classes.
void validate_solver_config(const SolverConfig &cfg, std::size_t m_count);

// Utility-to-go J_m^k(w, n) of one class over the horizon. Slot indices are
// relative to the decision slot i. Occupancy runs 0..n_cap.
class ClassTables {
 public:
  ClassTables() = default;
  ClassTables(int horizon, std::size_t grid_size, int n_cap, int first_slot);

  int horizon() const { return horizon_; }
  std::size_t grid_size() const { return grid_size_; }
  int n_cap() const { return n_cap_; }
  int first_slot() const { return first_slot_; }
  bool has_slot(int k) const { return k >= first_slot_ && k < horizon_; }

  // J at slot k; zero past the horizon. n is clamped into [0, n_cap].
  double at(int k, std::size_t w, int n) const;
  double *slot_data(int k) { return j_[static_cast<std::size_t>(k)].data(); }
  const double *slot_data(int k) const { return j_[static_cast<std::size_t>(k)].data(); }

  // Count of entries with J(w, n+1) < J(w, n) - tol.
  std::size_t monotonicity_violations(double tol = 1e-12) const;

 private:
  int horizon_ = 0;
  std::size_t grid_size_ = 0;
  int n_cap_ = 0;
  int first_slot_ = 0;
  std::vector<std::vector<double>> j_;
};

struct PolicyTables {
  std::vector<ClassTables> classes;  // one per class; empty tables when skipped
};

// Backward induction for class m with distortion impact q:
//   J_k(w, n) = max over pi of (q - lambda / w) n pi
//               + gamma * sum_w' P(w' | w) J_{k+1}(w', n'(pi)),
// J_K = 0, n' from next_occupancy with the scheduled arrivals and discards.
// Slots first_slot..K-1 are filled. n_cap < 0 means cfg.n_max. With an
// origin grid index, slot k only covers windows reachable from it in k steps;
// other entries stay 0.
inline constexpr std::size_t kAllWindows = static_cast<std::size_t>(-1);
ClassTables backward_induction_class(double q, std::size_t m, const SolverConfig &cfg,
                                     int first_slot = 0, int n_cap = -1,
                                     std::size_t origin = kAllWindows);

// Marginal value of sending all of class m now versus holding it:
//   (q - lambda / W_TCP) N + gamma * sum_w' P(w' | W_TCP)
//       * [J_1(w', n'(1)) - J_1(w', n'(0))].
// `tables` must hold slot 1 whenever the horizon exceeds one slot.
double priority_metric(double q, std::size_t m, const SystemState &state,
                       const ClassTables &tables, const SolverConfig &cfg);

struct SolveResult {
  std::vector<double> metrics;  // PM per class
  Action permissions;           // pi = 1 iff PM > 0 and the class is nonempty
  int window = 0;               // sum of N * pi
  double expected_quality = 0.0;
  std::vector<double> q_act;    // distortion impact each class was solved with
  std::size_t monotonicity_violations = 0;
  PolicyTables tables;          // filled when cfg.keep_tables
};

// Classes without dependencies; throws PreconditionError if the graph has edges.
SolveResult solve_independent(const ClassSet &classes, const SystemState &state,
                              const SolverConfig &cfg);

// Depth-by-depth greedy over the dependency DAG. Classes whose ancestors are
// neither delivered nor granted this slot are solved with Q_act = 0.
SolveResult solve_dag(const ClassSet &classes, const SystemState &state,
                      const SolverConfig &cfg);

// Stationary-mean window of the chain times the packet-weighted mean q.
double default_lambda(const NetChain &chain, const ClassSet &classes);

}  // namespace mediatcp

#endif  // MEDIATCP_FHMDP_SOLVER_HPP_
