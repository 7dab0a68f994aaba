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

#include "mediatcp/joint_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "mediatcp/errors.hpp"

namespace mediatcp {

namespace {

constexpr double kTieTol = 1e-12;

std::uint32_t to_bits(const Mask &mask, std::size_t m_count) {
  std::uint32_t bits = 0;
  for (std::size_t m = 0; m < m_count && m < mask.size(); ++m) {
    if (mask[m]) bits |= 1u << m;
  }
  return bits;
}

// true if permission vector a should be preferred to b at equal value
bool tie_prefers(std::uint32_t a, std::uint32_t b) {
  int ca = std::popcount(a);
  int cb = std::popcount(b);
  if (ca != cb) return ca < cb;
  // lexicographic on (pi_1, pi_2, ...): the first differing class decides
  std::uint32_t diff = a ^ b;
  if (diff == 0) return false;
  std::uint32_t low = diff & (~diff + 1);
  return (a & low) == 0;
}

}  // namespace

JointOracle::JointOracle(const ClassSet &classes, const SolverConfig &cfg, OracleLimits limits)
    : classes_(classes), cfg_(cfg), m_count_(classes.size()), horizon_(cfg.horizon),
      n_max_(cfg.n_max) {
  if (m_count_ == 0) throw ConfigError("oracle: no classes");
  if (m_count_ > limits.max_classes) {
    throw ConfigError("oracle guard: " + std::to_string(m_count_) + " classes exceed limit " +
                      std::to_string(limits.max_classes));
  }
  if (n_max_ > limits.max_occupancy) {
    throw ConfigError("oracle guard: n_max " + std::to_string(n_max_) + " exceeds limit " +
                      std::to_string(limits.max_occupancy));
  }
  if (cfg.chain.size() > limits.max_grid) {
    throw ConfigError("oracle guard: window grid of " + std::to_string(cfg.chain.size()) +
                      " points exceeds limit " + std::to_string(limits.max_grid));
  }
  if (horizon_ > limits.max_horizon) {
    throw ConfigError("oracle guard: horizon " + std::to_string(horizon_) + " exceeds limit " +
                      std::to_string(limits.max_horizon));
  }
  validate_solver_config(cfg, m_count_);

  for (std::size_t m = 0; m < m_count_; ++m) occ_states_ *= static_cast<std::size_t>(n_max_ + 1);
  ancestor_bits_.assign(m_count_, 0);
  for (std::size_t m = 0; m < m_count_; ++m) {
    for (std::size_t a : classes_.ancestors(m)) ancestor_bits_[m] |= 1u << a;
  }

  const std::size_t avail_states = std::size_t{1} << m_count_;
  const std::size_t total = cfg.chain.size() * occ_states_ * avail_states;
  j_.assign(static_cast<std::size_t>(horizon_), std::vector<double>(total, 0.0));
  std::vector<int> n(m_count_, 0);
  for (int k = horizon_ - 1; k >= 0; --k) {
    for (std::size_t w = 0; w < cfg.chain.size(); ++w) {
      for (std::size_t occ = 0; occ < occ_states_; ++occ) {
        std::size_t rest = occ;
        for (std::size_t m = 0; m < m_count_; ++m) {
          n[m] = static_cast<int>(rest % static_cast<std::size_t>(n_max_ + 1));
          rest /= static_cast<std::size_t>(n_max_ + 1);
        }
        for (std::uint32_t avail = 0; avail < avail_states; ++avail) {
          std::uint32_t a = best(k, w, n, avail);
          j_[static_cast<std::size_t>(k)][encode(w, n, avail)] = q_value(k, w, n, avail, a);
        }
      }
    }
  }
}

std::size_t JointOracle::encode(std::size_t w, std::span<const int> n, std::uint32_t avail) const {
  std::size_t occ = 0;
  for (std::size_t m = m_count_; m-- > 0;) {
    occ = occ * static_cast<std::size_t>(n_max_ + 1) +
          static_cast<std::size_t>(std::clamp(n[m], 0, n_max_));
  }
  return (w * occ_states_ + occ) * (std::size_t{1} << m_count_) + avail;
}

double JointOracle::instant(std::size_t w, std::span<const int> n, std::uint32_t avail,
                            std::uint32_t action, std::uint32_t &eff) const {
  std::uint32_t granted = 0;
  for (std::size_t m = 0; m < m_count_; ++m) {
    if ((action >> m & 1u) && n[m] > 0) granted |= 1u << m;
  }
  eff = avail | granted;
  double gain = 0.0;
  int window = 0;
  for (std::size_t m = 0; m < m_count_; ++m) {
    if (!(granted >> m & 1u)) continue;
    window += n[m];
    if ((eff & ancestor_bits_[m]) == ancestor_bits_[m]) gain += classes_.spec(m).q * n[m];
  }
  const double w_tcp = static_cast<double>(cfg_.chain.window(w));
  return gain - cfg_.lambda * (static_cast<double>(window) / w_tcp - 1.0);
}

double JointOracle::q_value(int k, std::size_t w, std::span<const int> n, std::uint32_t avail,
                            std::uint32_t action) const {
  std::uint32_t eff = 0;
  const double u = instant(w, n, avail, action, eff);
  if (k + 1 >= horizon_ || cfg_.gamma == 0.0) return u;

  const SlotSchedule &sched = cfg_.schedule[static_cast<std::size_t>(k)];
  std::vector<int> next(m_count_);
  for (std::size_t m = 0; m < m_count_; ++m) {
    next[m] = next_occupancy(n[m], sched.discards[m], sched.arrivals[m], (action >> m) & 1u,
                             n_max_);
  }
  const auto &table = j_[static_cast<std::size_t>(k + 1)];
  double future = 0.0;
  for (const auto &[w2, prob] : cfg_.chain.row(w)) future += prob * table[encode(w2, next, eff)];
  return u + cfg_.gamma * future;
}

std::uint32_t JointOracle::best(int k, std::size_t w, std::span<const int> n,
                                std::uint32_t avail) const {
  std::uint32_t arg = 0;
  double best_v = q_value(k, w, n, avail, 0);
  const std::uint32_t count = 1u << m_count_;
  for (std::uint32_t a = 1; a < count; ++a) {
    double v = q_value(k, w, n, avail, a);
    double tol = kTieTol * std::max(1.0, std::abs(best_v));
    if (v > best_v + tol || (std::abs(v - best_v) <= tol && tie_prefers(a, arg))) {
      if (v > best_v) best_v = v;
      arg = a;
    }
  }
  return arg;
}

double JointOracle::value(int k, std::size_t w, std::span<const int> n,
                          const Mask &available) const {
  if (k >= horizon_) return 0.0;
  return j_[static_cast<std::size_t>(k)][encode(w, n, to_bits(available, m_count_))];
}

double JointOracle::action_value(int k, std::size_t w, std::span<const int> n,
                                 const Mask &available, const Action &action) const {
  return q_value(k, w, n, to_bits(available, m_count_), to_bits(action.permissions, m_count_));
}

Action JointOracle::best_action(int k, std::size_t w, std::span<const int> n,
                                const Mask &available) const {
  std::uint32_t a = best(k, w, n, to_bits(available, m_count_));
  Action out(m_count_);
  for (std::size_t m = 0; m < m_count_; ++m) out.permissions[m] = (a >> m) & 1u;
  return out;
}

double JointOracle::utility(std::size_t w, std::span<const int> n, const Mask &available,
                            const Action &action) const {
  std::uint32_t eff = 0;
  return instant(w, n, to_bits(available, m_count_), to_bits(action.permissions, m_count_), eff);
}

SolveResult solve_oracle(const ClassSet &classes, const SystemState &state,
                         const SolverConfig &cfg, OracleLimits limits) {
  JointOracle oracle(classes, cfg, limits);
  const std::size_t m_count = classes.size();
  const std::size_t w = cfg.chain.index_of(state.net.w_tcp);
  std::vector<int> n(m_count);
  Mask avail(m_count, 0);
  for (std::size_t m = 0; m < m_count; ++m) {
    n[m] = std::clamp(state.classes[m].n, 0, cfg.n_max);
    avail[m] = state.classes[m].delivered ? 1 : 0;
  }
  SolveResult out;
  out.permissions = oracle.best_action(0, w, n, avail);
  const double best_v = oracle.action_value(0, w, n, avail, out.permissions);
  out.metrics.assign(m_count, 0.0);
  out.q_act.assign(m_count, 0.0);
  Mask eff = effective_availability(state.classes, out.permissions);
  for (std::size_t m = 0; m < m_count; ++m) {
    Action toggled = out.permissions;
    toggled.permissions[m] ^= 1;
    out.metrics[m] = best_v - oracle.action_value(0, w, n, avail, toggled);
    out.q_act[m] = actual_distortion(classes, m, eff);
    if (out.permissions.permits(m) && n[m] > 0) {
      out.window += n[m];
      out.expected_quality += out.q_act[m] * n[m];
    }
  }
  return out;
}

}  // namespace mediatcp
