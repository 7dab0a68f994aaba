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

#ifndef MEDIATCP_JOINT_ORACLE_HPP_
#define MEDIATCP_JOINT_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mediatcp/fhmdp_solver.hpp"
#include "mediatcp/media_model.hpp"

namespace mediatcp {

struct OracleLimits {
  std::size_t max_classes = 4;
  int max_occupancy = 4;
  std::size_t max_grid = 4;
  int max_horizon = 3;
};

// Exhaustive backward induction over the joint state
// (window, occupancy vector, availability flags) and all 2^M actions.
// Instantaneous utility: sum_m Q_act n_m pi_m - lambda (W / w - 1), with
// availability counting same-slot grants.
class JointOracle {
 public:
  // Throws ConfigError when the instance exceeds `limits`.
  JointOracle(const ClassSet &classes, const SolverConfig &cfg, OracleLimits limits = {});

  std::size_t class_count() const { return m_count_; }
  int horizon() const { return horizon_; }

  // Optimal value J_k of a state. Occupancies above n_max are clamped.
  double value(int k, std::size_t w, std::span<const int> n, const Mask &available) const;
  // Immediate utility plus discounted expected continuation of `action`.
  double action_value(int k, std::size_t w, std::span<const int> n, const Mask &available,
                      const Action &action) const;
  // Argmax; ties go to fewer transmissions, then the lexicographically
  // smallest permission vector.
  Action best_action(int k, std::size_t w, std::span<const int> n, const Mask &available) const;

  // Instantaneous utility of `action`.
  double utility(std::size_t w, std::span<const int> n, const Mask &available,
                 const Action &action) const;

 private:
  std::size_t encode(std::size_t w, std::span<const int> n, std::uint32_t avail) const;
  double instant(std::size_t w, std::span<const int> n, std::uint32_t avail,
                 std::uint32_t action, std::uint32_t &eff) const;
  double q_value(int k, std::size_t w, std::span<const int> n, std::uint32_t avail,
                 std::uint32_t action) const;
  std::uint32_t best(int k, std::size_t w, std::span<const int> n, std::uint32_t avail) const;

  ClassSet classes_;
  SolverConfig cfg_;
  std::size_t m_count_ = 0;
  int horizon_ = 0;
  int n_max_ = 0;
  std::size_t occ_states_ = 1;
  std::vector<std::uint32_t> ancestor_bits_;
  std::vector<std::vector<double>> j_;  // slot -> flattened state
};

// Slot-0 decision of the oracle from `state`, reported in SolveResult form.
// metrics[m] holds Q(best) - Q(best with m toggled).
SolveResult solve_oracle(const ClassSet &classes, const SystemState &state,
                         const SolverConfig &cfg, OracleLimits limits = {});

}  // namespace mediatcp

#endif  // MEDIATCP_JOINT_ORACLE_HPP_
