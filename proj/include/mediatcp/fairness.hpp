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

#ifndef MEDIATCP_FAIRNESS_HPP_
#define MEDIATCP_FAIRNESS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mediatcp/media_model.hpp"

namespace mediatcp {

// (sum q)^2 / (V sum q^2). nullopt when every entry is zero (no traffic) or
// the vector is empty. Throws DomainError on a negative entry.
std::optional<double> jain_index(std::span<const double> q);

// Quality change of one user between consecutive slots: the classes whose
// priority metric changes sign contribute +Q N (negative to positive) or
// -Q N (positive to negative).
double quality_delta(std::span<const double> prev_metrics, std::span<const double> next_metrics,
                     std::span<const double> q, std::span<const int> n);

// Sufficient condition for the fairness index not to drop:
//   sum q^2 * sum dq >= sum q * sum q dq.
bool lemma2_condition(std::span<const double> q, std::span<const double> dq);

// Expected next-slot priority metric of one class of one user, sampled over
// the user's own window.
struct MetricSamples {
  std::size_t user = 0;
  std::size_t cls = 0;
  std::vector<int> windows;     // increasing
  std::vector<double> metrics;  // aligned with windows
};

struct ConditionResult {
  bool pass = true;
  std::vector<std::string> counterexamples;
};

struct ConvergenceReport {
  ConditionResult shared_q;       // every user has the same Q vector
  ConditionResult size_order;     // Q_m >= Q_m' implies N_m >= N_m' across users, m != m'
  ConditionResult metric_trend;   // sampled metrics nonincreasing in the window
  bool all() const { return shared_q.pass && size_order.pass && metric_trend.pass; }
};

// users[u] holds the class specs of user u (n0 is the per-GOP size).
// Throws ConfigError for fewer than two users.
ConvergenceReport check_theorem4_conditions(const std::vector<ClassSet> &users,
                                         std::span<const MetricSamples> samples,
                                         double tol = 1e-9);

}  // namespace mediatcp

#endif  // MEDIATCP_FAIRNESS_HPP_
