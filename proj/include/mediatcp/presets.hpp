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

#ifndef MEDIATCP_PRESETS_HPP_
#define MEDIATCP_PRESETS_HPP_

#include <string>
#include <vector>

#include "mediatcp/controllers.hpp"
#include "mediatcp/media_model.hpp"
#include "mediatcp/sim_engine.hpp"

namespace mediatcp {

// Sixteen-class MPEG-style GOP: Q per packet and per-GOP sizes of the three
// reference sequences, the hierarchical-B dependency tree, and arrivals
// staggered by temporal level (one slot per level).
std::vector<ClassSpec> sequence_classes(const std::string &sequence, double slot_duration);
std::vector<std::string> sequence_names();  // coastguard, foreman, mobile

// Two workloads that share one Q vector and satisfy the class-size ordering
// needed for quality fairness. The first user also carries a bulky low-value
// class that a content-blind sender drains first. which = 0 or 1.
std::vector<ClassSpec> fairness_pair_classes(int which, double slot_duration);

// Bottleneck and background defaults under which W_TCP settles near 16.
SimConfig base_config();

UserConfig make_user(const std::string &name, ControllerKind kind,
                     std::vector<ClassSpec> classes, double playback_delay);

}  // namespace mediatcp

#endif  // MEDIATCP_PRESETS_HPP_
