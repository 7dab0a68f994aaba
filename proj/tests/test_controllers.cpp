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

#include <vector>

#include "mediatcp/controllers.hpp"
#include "mediatcp/presets.hpp"

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

SolverConfig config(std::size_t m, int horizon, double lambda, double gamma, int w) {
  SolverConfig c;
  c.lambda = lambda;
  c.gamma = gamma;
  c.horizon = horizon;
  c.chain = NetChain::self_loops({w});
  for (int k = 0; k < horizon; ++k) {
    c.schedule.push_back(SlotSchedule{std::vector<int>(m, 0), std::vector<int>(m, 0)});
  }
  return c;
}

std::vector<ClassState> buffers(std::vector<int> n) {
  std::vector<ClassState> out;
  for (int v : n) out.push_back(ClassState{v});
  return out;
}

TEST(ControllerNames, RoundTrip) {
  for (auto k : {ControllerKind::kMediaTcp, ControllerKind::kRateDistortion, ControllerKind::kPassive}) {
    EXPECT_EQ(parse_controller(to_string(k)), k);
  }
  EXPECT_FALSE(parse_controller("tfrc").has_value());
}

TEST(MtDecide, EmptyBuffers) {
  ClassSet c({spec(1, 2, 3), spec(2, 2, 3)});
  SystemState s{NetState{0.01, 8}, buffers({0, 0})};
  Decision d = mt_decide(c, s, config(2, 4, 1.0, 0.8, 8));
  EXPECT_EQ(d.window, 0);
  EXPECT_EQ(d.permissions.granted(), 0u);
}

TEST(MtDecide, OneSlotHorizonIsLagrangianThreshold) {
  ClassSet c({spec(1, 0.2, 5), spec(2, 0.9, 7), spec(3, 0.6, 2), spec(4, 0.5, 9)});
  SystemState s{NetState{0.01, 10}, buffers({5, 7, 2, 9})};
  Decision d = mt_decide(c, s, config(4, 1, 5.0, 0.8, 10));
  for (std::size_t m = 0; m < 4; ++m) {
    EXPECT_EQ(d.permissions.permits(m), c.spec(m).q > 0.5) << m;
  }
  EXPECT_EQ(d.window, 9);
  EXPECT_EQ(d.sent, (std::vector<int>{0, 7, 2, 0}));
}

TEST(MtDecide, CoastguardHigherValueFirst) {
  std::vector<ClassSpec> specs = sequence_classes("coastguard", 0.133);
  for (auto &s : specs) s.parents.clear();
  ClassSet c = ClassSet(specs).scaled(8.0);
  std::vector<int> n;
  for (const auto &s : specs) n.push_back(s.n0);
  SystemState st{NetState::from_loss(1.5 / 256.0), buffers(n)};
  Decision d = mt_decide(c, st, config(16, 4, 10.0, 0.8, 16));
  for (std::size_t a = 0; a < 16; ++a) {
    for (std::size_t b = 0; b < 16; ++b) {
      if (d.permissions.permits(b) && c.spec(a).q > c.spec(b).q) {
        EXPECT_TRUE(d.permissions.permits(a));
      }
    }
  }
  EXPECT_TRUE(d.permissions.permits(0));
  EXPECT_FALSE(d.permissions.permits(15));
}

TEST(MtDecide, WindowCapDropsLowestMetric) {
  ClassSet c({spec(1, 5, 30), spec(2, 2, 30), spec(3, 9, 30)});
  SystemState s{NetState{0.01, 8}, buffers({30, 30, 30})};
  Decision d = mt_decide(c, s, config(3, 1, 1.0, 0.0, 8), 64);
  EXPECT_EQ(d.permissions, Action(Mask{1, 0, 1}));
  EXPECT_EQ(d.window, 60);
}

TEST(MtDecide, WindowCapRevokesOrphans) {
  ClassSet c({spec(1, 1, 40), spec(2, 9, 20, {1})});
  SystemState s{NetState{0.01, 8}, buffers({40, 20})};
  Decision d = mt_decide(c, s, config(2, 1, 1.0, 0.0, 8), 50);
  EXPECT_EQ(d.permissions.granted(), 0u);
  EXPECT_EQ(d.window, 0);
}

TEST(RdDecide, LargeBudgetSendsAllUseful) {
  ClassSet c({spec(1, 0.3, 4), spec(2, 0.0, 4), spec(3, 0.1, 4, {1})});
  Decision d = rd_decide(c, buffers({4, 4, 4}), 100);
  EXPECT_EQ(d.permissions, Action(Mask{1, 0, 1}));
  EXPECT_EQ(d.window, 8);
}

TEST(RdDecide, ZeroBudget) {
  ClassSet c({spec(1, 0.3, 4)});
  Decision d = rd_decide(c, buffers({4}), 0);
  EXPECT_EQ(d.window, 0);
  EXPECT_EQ(d.permissions.granted(), 0u);
}

TEST(RdDecide, NoSplitting) {
  ClassSet c({spec(1, 0.154, 17), spec(2, 0.08, 12)});
  Decision d = rd_decide(c, buffers({17, 12}), 17);
  EXPECT_EQ(d.permissions, Action(Mask{1, 0}));
  EXPECT_EQ(d.window, 17);
}

TEST(RdDecide, SkipsTooLargeAndTakesNextFit) {
  ClassSet c({spec(1, 0.9, 20), spec(2, 0.5, 6), spec(3, 0.4, 6)});
  Decision d = rd_decide(c, buffers({20, 6, 6}), 12);
  EXPECT_EQ(d.permissions, Action(Mask{0, 1, 1}));
}

TEST(RdDecide, ChildNeedsParent) {
  ClassSet c({spec(1, 0.1, 20), spec(2, 0.9, 3, {1})});
  Decision d = rd_decide(c, buffers({20, 3}), 10);
  EXPECT_EQ(d.permissions.granted(), 0u);
}

TEST(PaDecide, WideWindowSendsEverything) {
  ClassSet c({spec(1, 0.1, 4), spec(2, 0.1, 3), spec(3, 0.1, 2)});
  Decision d = pa_decide(c, buffers({4, 3, 2}), 20.0);
  EXPECT_EQ(d.window, 9);
  EXPECT_EQ(d.permissions.granted(), 3u);
}

TEST(PaDecide, PartialHeadDrain) {
  ClassSet c({spec(1, 0.154, 17), spec(2, 0.09, 12, {1})});
  auto st = buffers({17, 12});
  st[1].depth = 1;
  Decision d = pa_decide(c, st, 5.0);
  EXPECT_EQ(d.sent, (std::vector<int>{5, 0}));
  EXPECT_EQ(d.permissions.granted(), 0u);
  EXPECT_EQ(d.window, 5);
}

TEST(PaDecide, FractionalWindowFloors) {
  ClassSet c({spec(1, 0.1, 4)});
  EXPECT_EQ(pa_decide(c, buffers({4}), 3.9).window, 3);
  EXPECT_EQ(pa_decide(c, buffers({4}), -2.0).window, 0);
}

}  // namespace
}  // namespace mediatcp
