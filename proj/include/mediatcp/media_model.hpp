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

#ifndef MEDIATCP_MEDIA_MODEL_HPP_
#define MEDIATCP_MEDIA_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mediatcp {

inline constexpr int kDefaultMaxOccupancy = 64;

// One multimedia packet class. Ids are 1-based and equal to the position in
// the owning ClassSet plus one; parents refer to ids.
struct ClassSpec {
  int id = 1;
  double q = 0.0;             // distortion impact, dB per packet
  int n0 = 0;                 // packets per GOP
  std::vector<int> parents;   // direct predecessors in the dependency DAG
  double arrival_time = 0.0;  // seconds after GOP start
  double deadline = 0.0;      // seconds after GOP start

  bool operator==(const ClassSpec &) const = default;
};

struct ClassState {
  int n = 0;          // buffered packets
  int arrivals = 0;   // packets entering the buffer after this slot
  int discards = 0;   // buffered packets whose deadline expires this slot
  int depth = 0;
  bool delivered = false;
  bool expired = false;  // deadline passed while undelivered

  bool operator==(const ClassState &) const = default;
};

// Per-class 0/1 flags. Used for permissions and for availability.
using Mask = std::vector<std::uint8_t>;

struct Action {
  Mask permissions;

  Action() = default;
  explicit Action(std::size_t m) : permissions(m, 0) {}
  explicit Action(Mask p) : permissions(std::move(p)) {}

  std::size_t size() const { return permissions.size(); }
  bool permits(std::size_t m) const { return permissions[m] != 0; }
  std::size_t granted() const;
  bool operator==(const Action &) const = default;
};

// Validated, immutable dependency graph over a list of class specs.
class ClassSet {
 public:
  ClassSet() = default;
  // Throws ConfigError on bad ids, unknown parents, negative sizes, or cycles.
  explicit ClassSet(std::vector<ClassSpec> specs);

  std::size_t size() const { return specs_.size(); }
  bool empty() const { return specs_.empty(); }
  const ClassSpec &spec(std::size_t m) const { return specs_[m]; }
  const std::vector<ClassSpec> &specs() const { return specs_; }

  // Indices, not ids.
  const std::vector<std::size_t> &parents(std::size_t m) const { return parents_[m]; }
  const std::vector<std::size_t> &ancestors(std::size_t m) const { return ancestors_[m]; }
  const std::vector<std::size_t> &descendants(std::size_t m) const { return descendants_[m]; }
  // Every parent precedes its children.
  const std::vector<std::size_t> &topological_order() const { return topo_; }

  bool has_edges() const { return has_edges_; }
  int total_packets() const;

  // Copy with every q multiplied by `scale`.
  ClassSet scaled(double scale) const;

 private:
  std::vector<ClassSpec> specs_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> ancestors_;
  std::vector<std::vector<std::size_t>> descendants_;
  std::vector<std::size_t> topo_;
  bool has_edges_ = false;
};

// Occupancy update (n - discards)(1 - permit) + arrivals, clamped to
// [0, n_max]. Sets the sticky delivered flag when a nonempty class is sent.
ClassState app_transition(const ClassState &state, bool permit,
                          int n_max = kDefaultMaxOccupancy);

// Next occupancy only; the same rule as app_transition.
int next_occupancy(int n, int discards, int arrivals, bool permit, int n_max);

// Q_m when every transitive ancestor is available, else 0.
double actual_distortion(const ClassSet &classes, std::size_t m,
                         std::span<const std::uint8_t> availability);

// Delivered classes plus nonempty classes granted by `action` this slot.
Mask effective_availability(std::span<const ClassState> states, const Action &action);

// Sum over classes of Q_act * N * pi (packet-count form).
double distortion_reduction(const ClassSet &classes, std::span<const ClassState> states,
                            const Action &action, std::span<const std::uint8_t> availability);

// Traveling-tree depths: delivered classes drop out of the graph, each
// remaining class sits one level below its deepest undelivered ancestor.
void recompute_depths(const ClassSet &classes, std::span<ClassState> states);

}  // namespace mediatcp

#endif  // MEDIATCP_MEDIA_MODEL_HPP_
