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

#ifndef MEDIATCP_CONTROLLERS_HPP_
#define MEDIATCP_CONTROLLERS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "mediatcp/fhmdp_solver.hpp"
#include "mediatcp/media_model.hpp"

namespace mediatcp {

enum class ControllerKind { kMediaTcp, kRateDistortion, kPassive };

// "mt", "rd", "pa"
std::string to_string(ControllerKind kind);
std::optional<ControllerKind> parse_controller(const std::string &name);

struct Decision {
  int window = 0;
  Action permissions;
  std::vector<double> metrics;  // PM (mt), q_act (rd); empty for pa
  std::vector<int> sent;        // packets put on the wire per class
  double budget = 0.0;          // rd budget or pa TCP window
  std::size_t monotonicity_violations = 0;  // mt: table entries decreasing in n
};

// Media-TCP. Solves the FHMDP at the current state and grants every class
// with a positive priority metric. If the grant exceeds w_max, the granted
// class with the lowest metric is revoked together with its descendants
// until the window fits.
Decision mt_decide(const ClassSet &classes, const SystemState &state, const SolverConfig &cfg,
                   int w_max = kDefaultMaxWindow);

// Myopic budgeted selection: grants whole classes in decreasing Q_act order
// (ties: lower depth, then lower id) while they fit into the budget. A class
// is eligible only once each ancestor is delivered or granted.
Decision rd_decide(const ClassSet &classes, std::span<const ClassState> states, int budget,
                   int w_max = kDefaultMaxWindow);

// Passive transmission over TCP: drains min(tcp_window, buffered) packets in
// (depth, id) order. A class counts as permitted only when this slot empties
// it.
Decision pa_decide(const ClassSet &classes, std::span<const ClassState> states,
                   double tcp_window, int w_max = kDefaultMaxWindow);

}  // namespace mediatcp

#endif  // MEDIATCP_CONTROLLERS_HPP_
