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

#ifndef MEDIATCP_SIM_ENGINE_HPP_
#define MEDIATCP_SIM_ENGINE_HPP_

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "mediatcp/controllers.hpp"
#include "mediatcp/fairness.hpp"
#include "mediatcp/fhmdp_solver.hpp"
#include "mediatcp/media_model.hpp"
#include "mediatcp/network_model.hpp"
#include "mediatcp/rng.hpp"

namespace mediatcp {

struct UserConfig {
  std::string name;
  ControllerKind controller = ControllerKind::kMediaTcp;
  std::vector<ClassSpec> classes;  // deadlines are derived from playback_delay
  int gop_slots = 4;
  double playback_delay = 0.266;   // seconds
  std::optional<double> lambda;    // unset: default_lambda on the learned chain
  double gamma = 0.8;
  int horizon = 4;
};

struct LinkConfig {
  double capacity = 0.0;  // packets per slot
  int buffer = 0;         // packets
};

struct BackgroundConfig {
  int count = 20;
  double a = 1.0;
  double b = 0.5;
  double initial_window = 16.0;
};

struct SimConfig {
  std::uint64_t seed = 1;
  int slots = 2000;
  double slot_duration = 0.133;  // seconds, one RTT
  int packet_size = 1000;        // bytes
  std::vector<UserConfig> users;
  BackgroundConfig background;
  LinkConfig link;
  double alpha = kDefaultLossSmoothing;
  double p_floor = kDefaultLossFloor;
  double initial_loss = 1.5 / 256.0;
  int w_max = kDefaultMaxWindow;
  int n_max = kDefaultMaxOccupancy;
  int chain_window = 200;        // W_TCP samples kept for chain estimation
  int fairness_slot = 500;       // slot at which the summary reads the fairness index
  int metric_sample_every = 0;   // >0: sample next-slot metrics against own window
  int friendliness_horizon = 4;

  // Q multiplier inside the solver: packet size in kbit.
  double utility_scale() const { return packet_size * 8.0 / 1000.0; }
};

// Throws ConfigError naming the offending field.
void validate(const SimConfig &cfg);

// Per-slot class events. arrivals[k][m] packets enter at the start of slot k;
// expiry[k][m] is set when an instance of class m hits its deadline at the
// start of slot k. Instances repeat every gop_slots.
struct WorkloadSchedule {
  std::vector<std::vector<int>> arrivals;
  std::vector<std::vector<std::uint8_t>> expiry;
  std::vector<int> arrival_offset;  // slot within the GOP
  std::vector<int> lifetime;        // slots between arrival and purge
};

// Arrival slot floor(t / T), purge slot floor((t + delay) / T). Throws
// ConfigError for a nonpositive delay or slot duration.
WorkloadSchedule build_schedule(const std::vector<ClassSpec> &specs, int gop_slots,
                                double playback_delay, double slot_duration, int slots);

// Converts seconds to whole slots, tolerant of the rounding in 0.133 * k.
int to_slots(double seconds, double slot_duration);

struct UserSlot {
  int window = 0;
  int w_tcp = 0;        // the estimate the decision used
  double p = 0.0;       // smoothed loss after the update
  double ratio = 0.0;   // window / w_tcp
  double quality = 0.0; // dB credited this slot
  std::string permissions;  // one char per class
  std::vector<double> metrics;
};

struct SlotRecord {
  int slot = 0;
  double p_hat = 0.0;
  double load = 0.0;
  double bg_mean_window = 0.0;
  std::optional<double> fairness;  // Jain index over running-mean quality of media users
  std::vector<UserSlot> users;
};

struct ClassCounters {
  long arrived = 0;
  long delivered = 0;
  long expired = 0;
  long lost = 0;
  long instances_completed = 0;
};

struct UserSummary {
  std::string name;
  std::string controller;
  double lambda = 0.0;  // last lambda used (mt)
  double mean_quality = 0.0;
  double mean_ratio = 0.0;
  double mean_window = 0.0;
  double friendliness_pass_rate = 0.0;
  std::vector<ClassCounters> classes;
};

struct RunSummary {
  bool no_data = false;
  int slots = 0;
  std::vector<UserSummary> users;
  double mean_p_hat = 0.0;
  double bg_mean_window = 0.0;
  std::optional<double> fairness_final;
  std::optional<double> fairness_at_slot;
  long lemma2_checks = 0;
  long lemma2_counterexamples = 0;
  std::size_t monotonicity_violations = 0;
  std::vector<MetricSamples> metric_samples;
};

struct RunResult {
  std::vector<SlotRecord> trace;
  RunSummary summary;
};

// Horizon-K rolling sums of the friendliness ratio. sums[i] covers slots
// i..i+K-1; pass[i] is sums[i] <= K (with a tiny tolerance).
struct FriendlinessReport {
  std::vector<double> sums;
  std::vector<std::uint8_t> pass;
  double pass_rate() const;
};
FriendlinessReport friendliness(const std::vector<double> &ratios, int horizon);

class Simulator {
 public:
  explicit Simulator(SimConfig cfg);

  const SimConfig &config() const { return cfg_; }
  int slot() const { return slot_; }
  SlotRecord step();
  RunSummary summarize(const std::vector<SlotRecord> &trace) const;

 private:
  struct Instance {
    int remaining = 0;
    int size = 0;
    int purge_slot = 0;
  };
  struct User {
    UserConfig cfg;
    ClassSet classes;        // raw dB units
    ClassSet solver_classes; // scaled for the solver
    WorkloadSchedule schedule;
    std::vector<std::deque<Instance>> buffers;
    std::vector<ClassState> states;
    NetState net;
    std::deque<int> history;
    NetChain chain;
    double lambda = 0.0;
    AimdAgent agent;  // pa only
    Stream rng;
    std::vector<ClassCounters> counters;
    double quality_sum = 0.0;
  };

  void begin_slot(User &u);
  SolverConfig solver_config(const User &u) const;
  std::vector<SlotSchedule> horizon_schedule(const User &u, int horizon) const;
  void refresh_chain(User &u);
  void apply(User &u, const Decision &d, double p_hat, UserSlot &out);
  void sample_metrics(const User &u, std::size_t index, double others_load);

  SimConfig cfg_;
  int slot_ = 0;
  std::vector<User> users_;
  std::vector<AimdAgent> background_;
  std::vector<Stream> background_rng_;
  std::size_t monotonicity_violations_ = 0;
  std::vector<MetricSamples> metric_samples_;
};

RunResult run(const SimConfig &cfg);

}  // namespace mediatcp

#endif  // MEDIATCP_SIM_ENGINE_HPP_
