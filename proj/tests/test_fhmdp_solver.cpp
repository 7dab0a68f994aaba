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

#include <cmath>
#include <vector>

#include "mediatcp/errors.hpp"
#include "mediatcp/experiments.hpp"
#include "mediatcp/fhmdp_solver.hpp"
#include "mediatcp/joint_oracle.hpp"
#include "mediatcp/rng.hpp"

namespace mediatcp {
namespace {

ClassSpec spec(int id, double q, int n0, std::vector<int> parents = {}) {
  ClassSpec s;
  s.id = id;
  s.q = q;
  s.n0 = n0;
  s.parents = std::move(parents);
  return s;
}

SolverConfig config(std::size_t m, int horizon, double lambda, double gamma, NetChain chain,
                    int n_max = 16, int arrivals = 0, int discards = 0) {
  SolverConfig c;
  c.lambda = lambda;
  c.gamma = gamma;
  c.horizon = horizon;
  c.chain = std::move(chain);
  c.n_max = n_max;
  for (int k = 0; k < horizon; ++k) {
    c.schedule.push_back(SlotSchedule{std::vector<int>(m, arrivals), std::vector<int>(m, discards)});
  }
  return c;
}

SystemState state_at(int w, std::vector<int> n) {
  SystemState s;
  s.net.w_tcp = w;
  for (int v : n) s.classes.push_back(ClassState{v});
  return s;
}

TEST(BackwardInduction, TerminalSlot) {
  SolverConfig c = config(1, 1, 10.0, 0.8, NetChain::self_loops({16}));
  ClassTables t = backward_induction_class(1.0, 0, c);
  EXPECT_NEAR(t.at(0, 0, 5), 1.875, 1e-12);
  EXPECT_EQ(t.at(1, 0, 5), 0.0);  // past the horizon
}

TEST(BackwardInduction, LowValueNeverSends) {
  SolverConfig c = config(1, 1, 10.0, 0.8, NetChain::self_loops({16}));
  ClassTables t = backward_induction_class(0.5, 0, c);
  for (int n = 0; n <= c.n_max; ++n) EXPECT_EQ(t.at(0, 0, n), 0.0);
}

TEST(BackwardInduction, ZeroDiscountEqualsTerminal) {
  NetChain chain({8, 16}, {0.5, 0.5, 0.25, 0.75});
  SolverConfig one = config(1, 1, 4.0, 0.0, chain, 8, 2, 1);
  SolverConfig four = config(1, 4, 4.0, 0.0, chain, 8, 2, 1);
  ClassTables a = backward_induction_class(0.7, 0, one);
  ClassTables b = backward_induction_class(0.7, 0, four);
  for (std::size_t w = 0; w < 2; ++w) {
    for (int n = 0; n <= 8; ++n) EXPECT_DOUBLE_EQ(a.at(0, w, n), b.at(0, w, n));
  }
}

TEST(BackwardInduction, HandComputedTwoSlot) {
  // w=10, q=2, lambda=10: unit gain 1. gamma=0.5, one arrival per slot, no discards.
  SolverConfig c = config(1, 2, 10.0, 0.5, NetChain::self_loops({10}), 8, 1, 0);
  ClassTables t = backward_induction_class(2.0, 0, c);
  // J_1(n) = n. J_0(n) = max(n + 0.5 * J_1(1), 0.5 * J_1(n + 1)) = n + 0.5.
  EXPECT_NEAR(t.at(1, 0, 3), 3.0, 1e-12);
  EXPECT_NEAR(t.at(0, 0, 3), 3.5, 1e-12);
  EXPECT_NEAR(t.at(0, 0, 0), 0.5, 1e-12);
}

TEST(BackwardInduction, ShortScheduleRejected) {
  SolverConfig c = config(1, 3, 1.0, 0.5, NetChain::self_loops({4}));
  c.schedule.pop_back();
  EXPECT_THROW(backward_induction_class(1.0, 0, c), ConfigError);
}

TEST(BackwardInduction, OriginPruningKeepsReachableEntries) {
  NetChain chain({4, 8, 16}, {0.5, 0.5, 0, 0.2, 0.6, 0.2, 0, 0.5, 0.5});
  SolverConfig c = config(1, 3, 6.0, 0.9, chain, 6, 2, 1);
  ClassTables full = backward_induction_class(1.3, 0, c);
  ClassTables pruned = backward_induction_class(1.3, 0, c, 0, -1, 0);
  for (int n = 0; n <= 6; ++n) EXPECT_DOUBLE_EQ(full.at(0, 0, n), pruned.at(0, 0, n));
  for (std::size_t w = 0; w < 2; ++w) {
    for (int n = 0; n <= 6; ++n) EXPECT_DOUBLE_EQ(full.at(1, w, n), pruned.at(1, w, n));
  }
}

TEST(PriorityMetric, MyopicTableTwoValue) {
  SolverConfig c = config(1, 4, 10.0, 0.0, NetChain::self_loops({16}), 64);
  SystemState s = state_at(16, {17});
  SolveResult r = solve_independent(ClassSet({spec(1, 0.154, 17)}), s, c);
  EXPECT_NEAR(r.metrics[0], -8.007, 1e-12);
  EXPECT_FALSE(r.permissions.permits(0));
}

TEST(PriorityMetric, BreakEvenIsZero) {
  SolverConfig c = config(1, 1, 8.0, 0.0, NetChain::self_loops({16}));
  SystemState s = state_at(16, {9});
  SolveResult r = solve_independent(ClassSet({spec(1, 0.5, 9)}), s, c);
  EXPECT_NEAR(r.metrics[0], 0.0, 1e-15);
  EXPECT_FALSE(r.permissions.permits(0));  // strict
}

TEST(SolveIndependent, AllNegative) {
  SolverConfig c = config(2, 2, 100.0, 0.8, NetChain::self_loops({4, 8}));
  SolveResult r = solve_independent(ClassSet({spec(1, 1, 3), spec(2, 2, 3)}), state_at(8, {3, 3}), c);
  EXPECT_EQ(r.window, 0);
  EXPECT_EQ(r.expected_quality, 0.0);
  EXPECT_EQ(r.permissions.granted(), 0u);
}

TEST(SolveIndependent, SingleClassTerminal) {
  SolverConfig c = config(1, 1, 2.0, 0.8, NetChain::self_loops({4}));
  SolveResult r = solve_independent(ClassSet({spec(1, 1.0, 6)}), state_at(4, {6}), c);
  EXPECT_TRUE(r.permissions.permits(0));
  EXPECT_EQ(r.window, 6);
  EXPECT_NEAR(r.metrics[0], 3.0, 1e-12);
}

TEST(SolveIndependent, EmptyClassNeverPermitted) {
  SolverConfig c = config(1, 1, 0.0, 0.0, NetChain::self_loops({4}));
  SolveResult r = solve_independent(ClassSet({spec(1, 1.0, 6)}), state_at(4, {0}), c);
  EXPECT_FALSE(r.permissions.permits(0));
}

TEST(SolveIndependent, RejectsEdges) {
  SolverConfig c = config(2, 1, 1.0, 0.0, NetChain::self_loops({4}));
  ClassSet dag({spec(1, 1, 1), spec(2, 1, 1, {1})});
  EXPECT_THROW(solve_independent(dag, state_at(4, {1, 1}), c), PreconditionError);
}

TEST(SolverConfigTest, Validation) {
  NetChain chain = NetChain::self_loops({4});
  SolverConfig ok = config(1, 2, 1.0, 0.5, chain);
  EXPECT_NO_THROW(validate_solver_config(ok, 1));
  SolverConfig bad = ok;
  bad.horizon = 0;
  EXPECT_THROW(validate_solver_config(bad, 1), ConfigError);
  bad = ok;
  bad.gamma = 1.5;
  EXPECT_THROW(validate_solver_config(bad, 1), ConfigError);
  bad = ok;
  bad.lambda = -1;
  EXPECT_THROW(validate_solver_config(bad, 1), ConfigError);
  bad = ok;
  bad.chain = NetChain();
  EXPECT_THROW(validate_solver_config(bad, 1), ConfigError);
  EXPECT_THROW(validate_solver_config(ok, 2), ConfigError);
}

TEST(SolveDag, DeniedRootBlocksDescendants) {
  ClassSet c({spec(1, 0.01, 4), spec(2, 3.0, 4, {1}), spec(3, 3.0, 4, {2})});
  SolverConfig cfg = config(3, 1, 4.0, 0.0, NetChain::self_loops({4}));
  SolveResult r = solve_dag(c, state_at(4, {4, 4, 4}), cfg);
  EXPECT_EQ(r.permissions.granted(), 0u);
  EXPECT_EQ(r.q_act[1], 0.0);
  EXPECT_LE(r.metrics[2], 0.0);
}

TEST(SolveDag, DeliveredRootUnblocks) {
  ClassSet c({spec(1, 0.01, 4), spec(2, 3.0, 4, {1})});
  SolverConfig cfg = config(2, 1, 4.0, 0.0, NetChain::self_loops({4}));
  SystemState s = state_at(4, {0, 4});
  s.classes[0].delivered = true;
  SolveResult r = solve_dag(c, s, cfg);
  EXPECT_TRUE(r.permissions.permits(1));
}

TEST(SolveDag, FlatGraphMatchesIndependent) {
  ClassSet c({spec(1, 0.3, 4), spec(2, 1.5, 4), spec(3, 0.9, 4)});
  NetChain chain({4, 8}, {0.7, 0.3, 0.4, 0.6});
  SolverConfig cfg = config(3, 3, 5.0, 0.8, chain, 6, 2, 1);
  for (int n = 0; n <= 6; ++n) {
    SystemState s = state_at(8, {n, 6 - n, n / 2});
    SolveResult a = solve_dag(c, s, cfg);
    SolveResult b = solve_independent(c, s, cfg);
    EXPECT_EQ(a.permissions, b.permissions);
    EXPECT_EQ(a.metrics, b.metrics);
  }
}

TEST(SolveDag, GreedyMissesJointlyProfitableChain) {
  // A cheap root with a valuable child: the root alone loses, both together win.
  ClassSet c({spec(1, 0.01, 1), spec(2, 1.0, 4, {1})});
  SolverConfig cfg = config(2, 1, 1.0, 0.0, NetChain::self_loops({4}), 4);
  SystemState s = state_at(4, {1, 4});
  SolveResult greedy = solve_dag(c, s, cfg);
  SolveResult best = solve_oracle(c, s, cfg);
  EXPECT_EQ(greedy.permissions.granted(), 0u);
  EXPECT_EQ(best.permissions, Action(Mask{1, 1}));
}

TEST(Oracle, GuardRejectsLargeInstances) {
  ClassSet c({spec(1, 1, 1), spec(2, 1, 1), spec(3, 1, 1), spec(4, 1, 1), spec(5, 1, 1)});
  SolverConfig cfg = config(5, 1, 1.0, 0.0, NetChain::self_loops({4}), 2);
  EXPECT_THROW(JointOracle(c, cfg), ConfigError);
  SolverConfig deep = config(1, 2, 1.0, 0.0, NetChain::self_loops({4}), 9);
  EXPECT_THROW(JointOracle(ClassSet({spec(1, 1, 1)}), deep), ConfigError);
}

TEST(Oracle, FreeTransmissionSendsEverythingUseful) {
  ClassSet c({spec(1, 0.5, 2), spec(2, 0.0, 2), spec(3, 1.0, 2)});
  SolverConfig cfg = config(3, 1, 0.0, 0.0, NetChain::self_loops({4}), 3);
  SolveResult r = solve_oracle(c, state_at(4, {2, 2, 0}), cfg);
  EXPECT_EQ(r.permissions, Action(Mask{1, 0, 0}));
}

TEST(Oracle, SingleClassAgreesEverywhere) {
  OracleCheckOptions opt;
  opt.instances = 60;
  opt.max_classes = 1;
  opt.seed = 11;
  OracleCheckReport rep = run_oracle_check(opt);
  EXPECT_GT(rep.states, 0);
  EXPECT_EQ(rep.permission_mismatches, 0);
  EXPECT_EQ(rep.value_mismatches, 0);
}

TEST(Oracle, IndependentInstancesAgree) {
  OracleCheckOptions opt;
  opt.instances = 80;
  opt.seed = 5;
  OracleCheckReport rep = run_oracle_check(opt);
  EXPECT_EQ(rep.permission_mismatches, 0);
  EXPECT_EQ(rep.value_mismatches, 0);
  EXPECT_LT(rep.max_separability_gap, 1e-9);
  EXPECT_EQ(rep.monotonicity_violations, 0u);
}

TEST(Oracle, TwoClassFixedGrid) {
  NetChain chain({4, 8}, {0.6, 0.4, 0.3, 0.7});
  ClassSet c({spec(1, 1.7, 3), spec(2, 0.6, 3)});
  SolverConfig cfg = config(2, 2, 6.0, 0.9, chain, 3);
  cfg.schedule[0] = SlotSchedule{{2, 1}, {1, 0}};
  cfg.schedule[1] = SlotSchedule{{0, 3}, {2, 1}};
  JointOracle oracle(c, cfg);
  for (int w : {4, 8}) {
    for (int a = 0; a <= 3; ++a) {
      for (int b = 0; b <= 3; ++b) {
        SystemState s = state_at(w, {a, b});
        SolveResult mine = solve_independent(c, s, cfg);
        std::vector<int> n{a, b};
        Mask none(2, 0);
        std::size_t wi = chain.index_of(w);
        EXPECT_EQ(mine.permissions, oracle.best_action(0, wi, n, none)) << w << " " << a << " " << b;
        EXPECT_NEAR(oracle.action_value(0, wi, n, none, mine.permissions), oracle.value(0, wi, n, none),
                    1e-9);
      }
    }
  }
}

TEST(Oracle, DagGreedyNeverBeatsOracle) {
  Stream rng(Stream::derive(3, 0));
  OracleCheckOptions opt;
  opt.dag = true;
  for (int i = 0; i < 40; ++i) {
    OracleInstance inst = random_instance(rng, opt);
    JointOracle oracle(inst.classes, inst.cfg);
    const std::size_t m = inst.classes.size();
    std::vector<int> n(m, inst.cfg.n_max);
    Mask none(m, 0);
    for (std::size_t w = 0; w < inst.cfg.chain.size(); ++w) {
      SystemState s = state_at(inst.cfg.chain.window(w), n);
      SolveResult r = solve_dag(inst.classes, s, inst.cfg);
      EXPECT_LE(oracle.action_value(0, w, n, none, r.permissions), oracle.value(0, w, n, none) + 1e-9);
    }
  }
}

TEST(DefaultLambda, Cases) {
  NetChain sixteen = NetChain::self_loops({16});
  EXPECT_NEAR(default_lambda(sixteen, ClassSet({spec(1, 0.1, 5)})), 1.6, 1e-12);
  EXPECT_NEAR(default_lambda(sixteen, ClassSet({spec(1, 0.2, 5), spec(2, 0.2, 50)})), 3.2, 1e-12);
  EXPECT_NEAR(default_lambda(NetChain::self_loops({1}), ClassSet({spec(1, 1.0, 1)})), 1.0, 1e-12);
  EXPECT_THROW(default_lambda(sixteen, ClassSet()), PreconditionError);
}

TEST(Tables, KeepTablesFillsEveryClass) {
  SolverConfig cfg = config(2, 3, 2.0, 0.8, NetChain({4, 8}, {0.5, 0.5, 0.5, 0.5}), 8, 1, 1);
  cfg.keep_tables = true;
  SolveResult r = solve_independent(ClassSet({spec(1, 1, 1), spec(2, 0, 1)}), state_at(4, {2, 0}), cfg);
  ASSERT_EQ(r.tables.classes.size(), 2u);
  EXPECT_EQ(r.tables.classes[0].horizon(), 3);
  EXPECT_EQ(r.monotonicity_violations, 0u);
}

}  // namespace
}  // namespace mediatcp
