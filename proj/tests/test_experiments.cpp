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

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mediatcp/errors.hpp"
#include "mediatcp/experiments.hpp"
#include "mediatcp/presets.hpp"

namespace mediatcp {
namespace {

SimConfig one_user(int slots) {
  SimConfig c = base_config();
  c.slots = slots;
  c.users.push_back(make_user("cg", ControllerKind::kMediaTcp, sequence_classes("coastguard", 0.133), 0.266));
  return c;
}

TEST(Stats, MeanAndStandardError) {
  Stat s = make_stat({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.se, std::sqrt(5.0 / 3.0 / 4.0), 1e-12);
  EXPECT_EQ(make_stat({7}).se, 0.0);
  EXPECT_EQ(make_stat({}).mean, 0.0);
}

TEST(ParallelFor, EveryIndexOnce) {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto &h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, 4, [&](std::size_t) { FAIL(); });
}

TEST(ParallelFor, PropagatesFailure) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Sweep, SingleCellMatchesRun) {
  SimConfig c = one_user(200);
  auto rows = run_sweep(c, {10}, {0.8}, {4}, {c.seed}, 1);
  ASSERT_EQ(rows.size(), 1u);
  RunResult r = run(c);
  EXPECT_DOUBLE_EQ(rows[0].quality.mean, r.summary.users[0].mean_quality);
  EXPECT_DOUBLE_EQ(rows[0].ratio.mean, r.summary.users[0].mean_ratio);
}

TEST(Sweep, ParallelismDoesNotChangeResults) {
  SimConfig c = one_user(150);
  auto a = run_sweep(c, {1, 20}, {0, 0.8}, {4}, {1, 2}, 1);
  auto b = run_sweep(c, {1, 20}, {0, 0.8}, {4}, {1, 2}, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].quality.samples, b[i].quality.samples);
    EXPECT_EQ(a[i].ratio.samples, b[i].ratio.samples);
  }
}

TEST(Sweep, HigherPriceSendsLess) {
  SimConfig c = one_user(600);
  auto rows = run_sweep(c, {1, 20}, {0.8}, {4}, {1, 2}, 0);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_GT(rows[0].ratio.mean, rows[1].ratio.mean);
  EXPECT_GT(rows[0].quality.mean, rows[1].quality.mean);
}

TEST(Sweep, EmptyGrid) {
  EXPECT_THROW(run_sweep(one_user(10), {}, {0.8}, {4}, {1}, 1), ConfigError);
}

TEST(Compare, SingleController) {
  SimConfig c = one_user(100);
  auto rows = run_compare(c, {ControllerKind::kPassive}, {0.266}, {1, 2}, 2);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].controller, "pa");
  EXPECT_EQ(rows[0].quality.samples.size(), 2u);
  EXPECT_THROW(run_compare(c, {}, {0.266}, {1}, 1), ConfigError);
}

TEST(Compare, LongDelaysNarrowTheGap) {
  SimConfig c = one_user(600);
  std::vector<ControllerKind> kinds{ControllerKind::kMediaTcp, ControllerKind::kPassive};
  auto rows = run_compare(c, kinds, {0.133, 1.33}, {1, 2, 3}, 0);
  const double short_gap = rows[0].quality.mean - rows[2].quality.mean;
  const double long_gap = std::abs(rows[1].quality.mean - rows[3].quality.mean);
  EXPECT_GT(short_gap, 0.0);
  EXPECT_LT(long_gap, short_gap);
}

TEST(Fairness, PassiveKeepsAGap) {
  SimConfig c = base_config();
  c.slots = 300;
  c.fairness_slot = 300;
  c.users.push_back(make_user("a", ControllerKind::kPassive, fairness_pair_classes(0, 0.133), 0.533));
  c.users.push_back(make_user("b", ControllerKind::kPassive, fairness_pair_classes(1, 0.133), 0.533));
  auto rows = run_fairness(c, {20}, {1, 2}, 2);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GT(rows[0].gap.mean, 0.1);
  EXPECT_LT(rows[0].fairness_at_slot.mean, 0.99);
  EXPECT_TRUE(rows[0].conditions.shared_q.pass);
}

TEST(Fairness, NeedsTwoUsers) {
  EXPECT_THROW(run_fairness(one_user(10), {20}, {1}, 1), ConfigError);
}

TEST(OracleCheck, BoundsGuard) {
  OracleCheckOptions opt;
  opt.max_classes = 6;
  EXPECT_THROW(run_oracle_check(opt), ConfigError);
}

TEST(OracleCheck, RandomInstancesRespectBounds) {
  Stream rng(4);
  OracleCheckOptions opt;
  opt.dag = true;
  for (int i = 0; i < 200; ++i) {
    OracleInstance inst = random_instance(rng, opt);
    EXPECT_LE(inst.classes.size(), 3u);
    EXPECT_LE(inst.cfg.n_max, 3);
    EXPECT_LE(inst.cfg.chain.size(), 3u);
    EXPECT_LE(inst.cfg.horizon, 2);
    EXPECT_NO_THROW(validate_solver_config(inst.cfg, inst.classes.size()));
  }
}

TEST(OracleCheck, SeparabilityGapRejectsDag) {
  Stream rng(8);
  OracleCheckOptions opt;
  opt.dag = true;
  opt.max_classes = 3;
  for (int i = 0; i < 50; ++i) {
    OracleInstance inst = random_instance(rng, opt);
    if (!inst.classes.has_edges()) continue;
    EXPECT_THROW(separability_gap(inst.classes, inst.cfg), PreconditionError);
    return;
  }
  FAIL() << "no DAG instance drawn";
}

}  // namespace
}  // namespace mediatcp
