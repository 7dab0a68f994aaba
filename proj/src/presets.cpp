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

#include "mediatcp/presets.hpp"

#include <array>

#include "mediatcp/errors.hpp"

namespace mediatcp {

namespace {

constexpr std::array<double, 16> kQ = {0.154, 0.153, 0.09,  0.08,  0.072, 0.072, 0.072, 0.072,
                                       0.053, 0.053, 0.053, 0.053, 0.053, 0.053, 0.053, 0.053};

// I, P, then the B pyramid
const std::array<std::vector<int>, 16> kParents = {{
    {}, {1}, {1}, {2, 3}, {3}, {3}, {4}, {4},
    {5}, {5}, {6}, {6}, {7}, {7}, {8}, {8},
}};

std::array<int, 16> sizes_of(const std::string &sequence) {
  if (sequence == "coastguard") return {17, 17, 12, 12, 5, 5, 5, 5, 4, 4, 4, 4, 4, 4, 4, 4};
  if (sequence == "foreman") return {34, 34, 8, 8, 4, 4, 4, 4, 0, 0, 0, 0, 0, 0, 0, 0};
  if (sequence == "mobile") return {30, 30, 13, 13, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0};
  throw ConfigError("unknown sequence '" + sequence + "'");
}

int level_of(int id) {
  if (id <= 2) return 0;
  if (id <= 4) return 1;
  if (id <= 8) return 2;
  return 3;
}

}  // namespace

std::vector<std::string> sequence_names() { return {"coastguard", "foreman", "mobile"}; }

std::vector<ClassSpec> sequence_classes(const std::string &sequence, double slot_duration) {
  const auto sizes = sizes_of(sequence);
  std::vector<ClassSpec> out;
  for (int i = 0; i < 16; ++i) {
    ClassSpec s;
    s.id = i + 1;
    s.q = kQ[static_cast<std::size_t>(i)];
    s.n0 = sizes[static_cast<std::size_t>(i)];
    s.parents = kParents[static_cast<std::size_t>(i)];
    s.arrival_time = level_of(s.id) * slot_duration;
    s.deadline = s.arrival_time;
    out.push_back(s);
  }
  return out;
}

std::vector<ClassSpec> fairness_pair_classes(int which, double slot_duration) {
  if (which != 0 && which != 1) throw ConfigError("fairness pair index must be 0 or 1");
  // low-value class first in id order, then two high-value classes
  const std::array<double, 3> q = {0.005, 0.154, 0.153};
  const std::array<int, 3> n = which == 0 ? std::array<int, 3>{30, 30, 30}
                                          : std::array<int, 3>{2, 30, 30};
  std::vector<ClassSpec> out;
  for (int i = 0; i < 3; ++i) {
    ClassSpec s;
    s.id = i + 1;
    s.q = q[static_cast<std::size_t>(i)];
    s.n0 = n[static_cast<std::size_t>(i)];
    s.arrival_time = 0.0 * slot_duration;
    s.deadline = s.arrival_time;
    out.push_back(s);
  }
  return out;
}

SimConfig base_config() {
  SimConfig cfg;
  cfg.seed = 1;
  cfg.slots = 2000;
  cfg.slot_duration = 0.133;
  cfg.packet_size = 1000;
  cfg.background = BackgroundConfig{20, 1.0, 0.5, 16.0};
  cfg.link = LinkConfig{420.0, 20};
  return cfg;
}

UserConfig make_user(const std::string &name, ControllerKind kind, std::vector<ClassSpec> classes,
                     double playback_delay) {
  UserConfig u;
  u.name = name;
  u.controller = kind;
  u.classes = std::move(classes);
  u.gop_slots = 4;
  u.playback_delay = playback_delay;
  u.lambda = 10.0;
  u.gamma = 0.8;
  u.horizon = 4;
  return u;
}

}  // namespace mediatcp
