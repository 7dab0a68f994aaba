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

#ifndef MEDIATCP_EXPERIMENTS_HPP_
#define MEDIATCP_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mediatcp/controllers.hpp"
#include "mediatcp/fairness.hpp"
#include "mediatcp/fhmdp_solver.hpp"
#include "mediatcp/joint_oracle.hpp"
#include "mediatcp/sim_engine.hpp"

namespace mediatcp {

// Runs job(i) for i in [0, count) on up to `parallelism` threads. Results are
// written by index, so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, int parallelism, const std::function<void(std::size_t)> &job);

struct Stat {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  std::vector<double> samples;
};
Stat make_stat(std::vector<double> samples);

// Mean over the users running `kind` (all users when none match).
double mean_user_quality(const RunSummary &s, std::optional<ControllerKind> kind = std::nullopt);

struct SweepRow {
  double lambda = 0.0;
  double gamma = 0.0;
  int horizon = 0;
  Stat quality;
  Stat ratio;
  Stat pass_rate;
};

// Every (lambda, gamma, K) combination applied to the media-TCP users of
// `base`, once per seed.
std::vector<SweepRow> run_sweep(const SimConfig &base, const std::vector<double> &lambdas,
                                const std::vector<double> &gammas, const std::vector<int> &horizons,
                                const std::vector<std::uint64_t> &seeds, int parallelism);

struct CompareRow {
  std::string controller;
  double delay = 0.0;  // seconds
  Stat quality;
  Stat ratio;
};

// Every user switched to each controller in turn, per playback delay.
std::vector<CompareRow> run_compare(const SimConfig &base,
                                    const std::vector<ControllerKind> &controllers,
                                    const std::vector<double> &delays,
                                    const std::vector<std::uint64_t> &seeds, int parallelism);

struct FairnessRow {
  int tcp_users = 0;
  std::vector<Stat> user_quality;
  Stat gap;             // |Q_0 - Q_1| of the first two users
  Stat fairness_final;
  Stat fairness_at_slot;
  Stat bg_mean_window;
  long lemma2_checks = 0;
  long lemma2_counterexamples = 0;
  ConvergenceReport conditions;
};

std::vector<FairnessRow> run_fairness(const SimConfig &base, const std::vector<int> &tcp_users,
                                      const std::vector<std::uint64_t> &seeds, int parallelism);

struct OracleCheckOptions {
  std::uint64_t seed = 1;
  int instances = 500;
  bool dag = false;       // random parents among lower-indexed classes
  int max_classes = 3;
  int max_occupancy = 3;
  int max_grid = 3;
  int max_horizon = 2;
};

// Random instance inside the oracle guard.
struct OracleInstance {
  ClassSet classes;
  SolverConfig cfg;
};
OracleInstance random_instance(Stream &rng, const OracleCheckOptions &opt);

struct OracleCheckReport {
  int instances = 0;
  long states = 0;
  long permission_mismatches = 0;
  long value_mismatches = 0;  // |J_oracle - Q(greedy action)| > 1e-9
  double max_value_gap = 0.0;
  double max_separability_gap = 0.0;  // independent instances only
  std::size_t monotonicity_violations = 0;
  std::vector<std::string> examples;  // first few disagreements
};

OracleCheckReport run_oracle_check(const OracleCheckOptions &opt);

// max over (w, n) of |J_joint - sum_m J_m - C(w)|, C(w) fitted as the mean
// residual at each window. Independent classes only.
double separability_gap(const ClassSet &classes, const SolverConfig &cfg);

nlohmann::json to_json(const Stat &s);
nlohmann::json to_json(const ConvergenceReport &r);

}  // namespace mediatcp

#endif  // MEDIATCP_EXPERIMENTS_HPP_
