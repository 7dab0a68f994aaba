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

#include "mediatcp/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mediatcp/errors.hpp"

namespace mediatcp {

namespace {

std::string user_field(std::size_t u, const std::string &field) {
  return "users[" + std::to_string(u) + "]." + field;
}

std::vector<ClassSpec> with_deadlines(std::vector<ClassSpec> specs, double delay) {
  for (auto &s : specs) s.deadline = s.arrival_time + delay;
  return specs;
}

bool arrives_at(int slot, int offset, int gop) {
  return slot >= offset && (slot - offset) % gop == 0;
}

}  // namespace

int to_slots(double seconds, double slot_duration) {
  return static_cast<int>(std::floor(seconds / slot_duration + 1e-6));
}

void validate(const SimConfig &cfg) {
  if (cfg.slots < 0) throw ConfigError("slots: must be nonnegative");
  if (!(cfg.slot_duration > 0.0)) throw ConfigError("slot_duration: must be positive");
  if (cfg.packet_size <= 0) throw ConfigError("packet_size: must be positive");
  if (!(cfg.link.capacity > 0.0)) throw ConfigError("link.capacity: must be positive");
  if (cfg.link.buffer < 1) throw ConfigError("link.buffer: must be at least 1");
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw ConfigError("alpha: must lie in [0, 1]");
  if (!(cfg.p_floor > 0.0 && cfg.p_floor < 1.0)) throw ConfigError("p_floor: must lie in (0, 1)");
  if (!(cfg.initial_loss > 0.0 && cfg.initial_loss <= 1.0)) {
    throw ConfigError("initial_loss: must lie in (0, 1]");
  }
  if (cfg.w_max < 1) throw ConfigError("w_max: must be at least 1");
  if (cfg.n_max < 1) throw ConfigError("n_max: must be at least 1");
  if (cfg.chain_window < 2) throw ConfigError("chain_window: must be at least 2");
  if (cfg.friendliness_horizon < 1) throw ConfigError("friendliness_horizon: must be at least 1");
  if (cfg.background.count < 0) throw ConfigError("background.count: must be nonnegative");
  if (!(cfg.background.a > 0.0)) throw ConfigError("background.a: must be positive");
  if (!(cfg.background.b > 0.0 && cfg.background.b < 1.0)) {
    throw ConfigError("background.b: must lie in (0, 1)");
  }
  if (!(cfg.background.initial_window >= 1.0)) {
    throw ConfigError("background.initial_window: must be at least 1");
  }
  for (std::size_t u = 0; u < cfg.users.size(); ++u) {
    const UserConfig &user = cfg.users[u];
    if (user.classes.empty()) throw ConfigError(user_field(u, "classes") + ": empty");
    if (user.gop_slots < 1) throw ConfigError(user_field(u, "gop_slots") + ": must be at least 1");
    if (!(user.playback_delay > 0.0)) {
      throw ConfigError(user_field(u, "playback_delay") + ": must be positive");
    }
    if (to_slots(user.playback_delay, cfg.slot_duration) < 1) {
      throw ConfigError(user_field(u, "playback_delay") + ": shorter than one slot");
    }
    if (!(user.gamma >= 0.0 && user.gamma <= 1.0)) {
      throw ConfigError(user_field(u, "gamma") + ": must lie in [0, 1]");
    }
    if (user.horizon < 1) throw ConfigError(user_field(u, "horizon") + ": must be at least 1");
    if (user.lambda && !(*user.lambda >= 0.0)) {
      throw ConfigError(user_field(u, "lambda") + ": must be nonnegative");
    }
    try {
      ClassSet check(with_deadlines(user.classes, user.playback_delay));
    } catch (const ConfigError &e) {
      throw ConfigError(user_field(u, "classes") + ": " + e.what());
    }
    for (const auto &s : user.classes) {
      if (s.arrival_time < 0.0) {
        throw ConfigError(user_field(u, "classes") + ": class " + std::to_string(s.id) +
                          " has a negative arrival_time");
      }
    }
  }
}

WorkloadSchedule build_schedule(const std::vector<ClassSpec> &specs, int gop_slots,
                                double playback_delay, double slot_duration, int slots) {
  if (!(slot_duration > 0.0)) throw ConfigError("build_schedule: slot duration must be positive");
  if (!(playback_delay > 0.0)) throw ConfigError("build_schedule: playback delay must be positive");
  if (gop_slots < 1) throw ConfigError("build_schedule: GOP must span at least one slot");
  const std::size_t m_count = specs.size();
  WorkloadSchedule ws;
  ws.arrival_offset.resize(m_count);
  ws.lifetime.resize(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    const ClassSpec &s = specs[m];
    double deadline = s.arrival_time + playback_delay;
    if (deadline < s.arrival_time) throw ConfigError("build_schedule: deadline before arrival");
    ws.arrival_offset[m] = to_slots(s.arrival_time, slot_duration);
    ws.lifetime[m] = to_slots(deadline, slot_duration) - ws.arrival_offset[m];
    if (ws.lifetime[m] < 1) {
      throw ConfigError("build_schedule: class " + std::to_string(s.id) +
                        " expires in the slot it arrives");
    }
  }
  const std::size_t n_slots = static_cast<std::size_t>(std::max(0, slots));
  ws.arrivals.assign(n_slots, std::vector<int>(m_count, 0));
  ws.expiry.assign(n_slots, std::vector<std::uint8_t>(m_count, 0));
  for (std::size_t k = 0; k < n_slots; ++k) {
    for (std::size_t m = 0; m < m_count; ++m) {
      const int slot = static_cast<int>(k);
      if (arrives_at(slot, ws.arrival_offset[m], gop_slots)) ws.arrivals[k][m] = specs[m].n0;
      if (arrives_at(slot - ws.lifetime[m], ws.arrival_offset[m], gop_slots)) ws.expiry[k][m] = 1;
    }
  }
  return ws;
}

double FriendlinessReport::pass_rate() const {
  if (pass.empty()) return 1.0;
  long ok = std::count(pass.begin(), pass.end(), std::uint8_t{1});
  return static_cast<double>(ok) / static_cast<double>(pass.size());
}

FriendlinessReport friendliness(const std::vector<double> &ratios, int horizon) {
  if (horizon < 1) throw ConfigError("friendliness: horizon must be at least 1");
  FriendlinessReport rep;
  const std::size_t k = static_cast<std::size_t>(horizon);
  if (ratios.size() < k) return rep;
  double sum = std::accumulate(ratios.begin(), ratios.begin() + static_cast<long>(k), 0.0);
  for (std::size_t i = 0;; ++i) {
    rep.sums.push_back(sum);
    rep.pass.push_back(sum <= static_cast<double>(horizon) + 1e-9 ? 1 : 0);
    if (i + k >= ratios.size()) break;
    sum += ratios[i + k] - ratios[i];
    // resum now and then so the rolling total does not drift
    if ((i & 255) == 255) {
      sum = std::accumulate(ratios.begin() + static_cast<long>(i + 1),
                            ratios.begin() + static_cast<long>(i + 1 + k), 0.0);
    }
  }
  return rep;
}

Simulator::Simulator(SimConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);
  const double scale = cfg_.utility_scale();
  const NetState start = NetState::from_loss(cfg_.initial_loss, cfg_.w_max);
  for (std::size_t i = 0; i < cfg_.users.size(); ++i) {
    const UserConfig &uc = cfg_.users[i];
    User u;
    u.cfg = uc;
    u.classes = ClassSet(with_deadlines(uc.classes, uc.playback_delay));
    u.solver_classes = u.classes.scaled(scale);
    u.schedule = build_schedule(u.classes.specs(), uc.gop_slots, uc.playback_delay,
                                cfg_.slot_duration, 0);
    u.buffers.assign(u.classes.size(), {});
    u.states.assign(u.classes.size(), ClassState{});
    u.net = start;
    u.chain = NetChain::self_loops(NetChain::full_grid(cfg_.w_max));
    u.agent = AimdAgent{cfg_.background.a, cfg_.background.b,
                        std::min<double>(cfg_.w_max, std::max(1, start.w_tcp))};
    u.rng = Stream(Stream::derive(cfg_.seed, i));
    u.counters.assign(u.classes.size(), {});
    refresh_chain(u);
    users_.push_back(std::move(u));
  }
  for (int b = 0; b < cfg_.background.count; ++b) {
    background_.push_back(AimdAgent{cfg_.background.a, cfg_.background.b,
                                    std::min<double>(cfg_.w_max, cfg_.background.initial_window)});
    background_rng_.emplace_back(Stream::derive(cfg_.seed, 1000003ULL + static_cast<unsigned>(b)));
  }
}

void Simulator::refresh_chain(User &u) {
  if (u.history.size() >= 2) {
    std::vector<int> trace(u.history.begin(), u.history.end());
    u.chain = estimate_chain(trace, cfg_.w_max);
  }
  if (u.cfg.controller != ControllerKind::kMediaTcp) return;
  if (u.cfg.lambda) {
    u.lambda = *u.cfg.lambda;
  } else if (u.history.size() >= 2) {
    u.lambda = default_lambda(u.chain, u.solver_classes);
  } else {
    NetChain point = NetChain::self_loops({u.net.w_tcp});
    u.lambda = default_lambda(point, u.solver_classes);
  }
}

std::vector<SlotSchedule> Simulator::horizon_schedule(const User &u, int horizon) const {
  const std::size_t m_count = u.classes.size();
  const int gop = u.cfg.gop_slots;
  std::vector<SlotSchedule> out(static_cast<std::size_t>(horizon));
  for (int j = 0; j < horizon; ++j) {
    const int target = slot_ + j + 1;
    SlotSchedule &s = out[static_cast<std::size_t>(j)];
    s.arrivals.assign(m_count, 0);
    s.discards.assign(m_count, 0);
    for (std::size_t m = 0; m < m_count; ++m) {
      const int offset = u.schedule.arrival_offset[m];
      const int life = u.schedule.lifetime[m];
      if (arrives_at(target, offset, gop)) s.arrivals[m] = u.classes.spec(m).n0;
      int d = 0;
      for (const Instance &inst : u.buffers[m]) {
        if (inst.purge_slot == target) d += inst.remaining;
      }
      // instances that arrive after this slot and expire at `target`
      const int arrival = target - life;
      if (arrival > slot_ && arrival < target && arrives_at(arrival, offset, gop)) {
        d += u.classes.spec(m).n0;
      }
      s.discards[m] = d;
    }
  }
  return out;
}

SolverConfig Simulator::solver_config(const User &u) const {
  SolverConfig sc;
  sc.lambda = u.lambda;
  sc.gamma = u.cfg.gamma;
  sc.horizon = u.cfg.horizon;
  sc.chain = u.chain;
  sc.schedule = horizon_schedule(u, u.cfg.horizon);
  sc.n_max = cfg_.n_max;
  return sc;
}

void Simulator::begin_slot(User &u) {
  const std::size_t m_count = u.classes.size();
  for (std::size_t m = 0; m < m_count; ++m) {
    auto &buf = u.buffers[m];
    while (!buf.empty() && buf.front().purge_slot <= slot_) {
      if (buf.front().remaining > 0) {
        u.counters[m].expired += buf.front().remaining;
        if (!u.states[m].delivered) u.states[m].expired = true;
      }
      buf.pop_front();
    }
  }
  if (slot_ % u.cfg.gop_slots == 0) {
    for (auto &s : u.states) {
      s.delivered = false;
      s.expired = false;
    }
  }
  for (std::size_t m = 0; m < m_count; ++m) {
    const int offset = u.schedule.arrival_offset[m];
    if (!arrives_at(slot_, offset, u.cfg.gop_slots)) continue;
    const int n0 = u.classes.spec(m).n0;
    if (n0 == 0) continue;
    u.counters[m].arrived += n0;
    int held = 0;
    for (const Instance &inst : u.buffers[m]) held += inst.remaining;
    int room = std::max(0, cfg_.n_max - held);
    int admitted = std::min(room, n0);
    u.counters[m].expired += n0 - admitted;
    u.buffers[m].push_back(Instance{admitted, n0, slot_ + u.schedule.lifetime[m]});
  }
  for (std::size_t m = 0; m < m_count; ++m) {
    int n = 0;
    for (const Instance &inst : u.buffers[m]) n += inst.remaining;
    u.states[m].n = n;
  }
  recompute_depths(u.classes, u.states);
}

void Simulator::apply(User &u, const Decision &d, double p_hat, UserSlot &out) {
  const std::size_t m_count = u.classes.size();
  const bool passive = u.cfg.controller == ControllerKind::kPassive;

  Mask avail(m_count, 0);
  for (std::size_t m = 0; m < m_count; ++m) {
    bool granted = !passive && d.permissions.permits(m) && u.states[m].n > 0;
    avail[m] = (u.states[m].delivered || granted) ? 1 : 0;
  }

  std::vector<std::size_t> order(m_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return u.states[a].depth < u.states[b].depth;
  });

  int lost_total = 0;
  for (std::size_t m : order) {
    const int sent = d.sent[m];
    if (sent <= 0) continue;
    const int lost = u.rng.binomial(sent, p_hat);
    int ok = sent - lost;
    lost_total += lost;
    u.counters[m].lost += lost;
    u.counters[m].delivered += ok;
    const double q_act = actual_distortion(u.classes, m, avail);
    if (!passive) {
      out.quality += q_act * ok;
      u.states[m].delivered = true;
    }
    auto &buf = u.buffers[m];
    for (auto it = buf.begin(); it != buf.end() && ok > 0;) {
      int take = std::min(ok, it->remaining);
      it->remaining -= take;
      ok -= take;
      if (it->remaining == 0) {
        ++u.counters[m].instances_completed;
        if (passive) {
          out.quality += q_act * it->size;
          u.states[m].delivered = true;
          avail[m] = 1;
        }
        it = buf.erase(it);
      } else {
        ++it;
      }
    }
  }

  if (passive) {
    const int cap = static_cast<int>(std::floor(u.agent.w));
    if (lost_total > 0) {
      u.agent = aimd_step(u.agent, true);
    } else if (d.window >= cap) {
      u.agent = aimd_step(u.agent, false);
    }
    u.agent.w = std::min<double>(u.agent.w, cfg_.w_max);
  }
  for (std::size_t m = 0; m < m_count; ++m) {
    int n = 0;
    for (const Instance &inst : u.buffers[m]) n += inst.remaining;
    u.states[m].n = n;
  }
}

void Simulator::sample_metrics(const User &u, std::size_t index, double others_load) {
  SolverConfig sc = solver_config(u);
  std::vector<MetricSamples> rows(u.classes.size());
  for (std::size_t m = 0; m < rows.size(); ++m) {
    rows[m].user = index;
    rows[m].cls = m;
  }
  const int step = std::max(1, cfg_.w_max / 16);
  for (int w = 0; w <= cfg_.w_max; w += step) {
    double p_hat = bottleneck_loss(others_load + w, cfg_.link.capacity, cfg_.link.buffer,
                                   cfg_.p_floor);
    double p = smooth_loss(u.net.p, p_hat, cfg_.alpha, cfg_.p_floor);
    SystemState st{NetState::from_loss(p, cfg_.w_max), u.states};
    SolveResult r = solve_dag(u.solver_classes, st, sc);
    for (std::size_t m = 0; m < rows.size(); ++m) {
      rows[m].windows.push_back(w);
      rows[m].metrics.push_back(r.metrics[m]);
    }
  }
  for (auto &r : rows) metric_samples_.push_back(std::move(r));
}

SlotRecord Simulator::step() {
  SlotRecord rec;
  rec.slot = slot_;
  rec.users.resize(users_.size());

  std::vector<Decision> decisions(users_.size());
  for (std::size_t i = 0; i < users_.size(); ++i) {
    User &u = users_[i];
    begin_slot(u);
    switch (u.cfg.controller) {
      case ControllerKind::kMediaTcp: {
        SystemState st{u.net, u.states};
        decisions[i] = mt_decide(u.solver_classes, st, solver_config(u), cfg_.w_max);
        monotonicity_violations_ += decisions[i].monotonicity_violations;
        break;
      }
      case ControllerKind::kRateDistortion:
        decisions[i] = rd_decide(u.classes, u.states, u.net.w_tcp, cfg_.w_max);
        break;
      case ControllerKind::kPassive:
        decisions[i] = pa_decide(u.classes, u.states, u.agent.w, cfg_.w_max);
        break;
    }
  }

  double load = 0.0;
  for (const Decision &d : decisions) load += d.window;
  double bg_sum = 0.0;
  for (const AimdAgent &a : background_) {
    load += a.w;
    bg_sum += a.w;
  }
  rec.load = load;
  rec.bg_mean_window = background_.empty() ? 0.0 : bg_sum / static_cast<double>(background_.size());
  const double p_hat = bottleneck_loss(load, cfg_.link.capacity, cfg_.link.buffer, cfg_.p_floor);
  rec.p_hat = p_hat;

  if (cfg_.metric_sample_every > 0 && slot_ % cfg_.metric_sample_every == 0) {
    for (std::size_t i = 0; i < users_.size(); ++i) {
      if (users_[i].cfg.controller != ControllerKind::kMediaTcp) continue;
      sample_metrics(users_[i], i, load - decisions[i].window);
    }
  }

  for (std::size_t b = 0; b < background_.size(); ++b) {
    double p_event = 1.0 - std::pow(1.0 - p_hat, background_[b].w);
    background_[b] = aimd_step(background_[b], background_rng_[b].bernoulli(p_event));
    background_[b].w = std::min<double>(background_[b].w, cfg_.w_max);
  }

  for (std::size_t i = 0; i < users_.size(); ++i) {
    User &u = users_[i];
    const Decision &d = decisions[i];
    UserSlot &out = rec.users[i];
    out.window = d.window;
    if (u.cfg.controller == ControllerKind::kPassive) {
      out.w_tcp = static_cast<int>(std::floor(u.agent.w));
    } else {
      out.w_tcp = u.net.w_tcp;
    }
    out.ratio = static_cast<double>(d.window) / std::max(1, out.w_tcp);
    out.permissions.resize(u.classes.size());
    for (std::size_t m = 0; m < u.classes.size(); ++m) {
      out.permissions[m] = d.permissions.permits(m) ? '1' : '0';
    }
    out.metrics = d.metrics;
    apply(u, d, p_hat, out);

    u.net.p = smooth_loss(u.net.p, p_hat, cfg_.alpha, cfg_.p_floor);
    u.net.w_tcp = quantize_window(tcp_response_window(u.net.p), cfg_.w_max);
    out.p = u.net.p;
    u.history.push_back(u.net.w_tcp);
    while (static_cast<int>(u.history.size()) > cfg_.chain_window) u.history.pop_front();
    if ((slot_ + 1) % u.cfg.horizon == 0) refresh_chain(u);
    u.quality_sum += out.quality;
  }

  if (!users_.empty()) {
    std::vector<double> means(users_.size());
    for (std::size_t i = 0; i < users_.size(); ++i) {
      means[i] = users_[i].quality_sum / static_cast<double>(slot_ + 1);
    }
    rec.fairness = jain_index(means);
  }
  ++slot_;
  return rec;
}

RunSummary Simulator::summarize(const std::vector<SlotRecord> &trace) const {
  RunSummary s;
  s.slots = static_cast<int>(trace.size());
  s.no_data = trace.empty();
  s.monotonicity_violations = monotonicity_violations_;
  s.metric_samples = metric_samples_;
  s.users.resize(users_.size());
  for (std::size_t i = 0; i < users_.size(); ++i) {
    UserSummary &us = s.users[i];
    us.name = users_[i].cfg.name;
    us.controller = to_string(users_[i].cfg.controller);
    us.lambda = users_[i].lambda;
    us.classes = users_[i].counters;
  }
  if (trace.empty()) return s;

  const double n = static_cast<double>(trace.size());
  std::vector<std::vector<double>> ratios(users_.size());
  for (const SlotRecord &r : trace) {
    s.mean_p_hat += r.p_hat / n;
    s.bg_mean_window += r.bg_mean_window / n;
    for (std::size_t i = 0; i < r.users.size(); ++i) {
      s.users[i].mean_quality += r.users[i].quality / n;
      s.users[i].mean_ratio += r.users[i].ratio / n;
      s.users[i].mean_window += r.users[i].window / n;
      ratios[i].push_back(r.users[i].ratio);
    }
  }
  for (std::size_t i = 0; i < users_.size(); ++i) {
    s.users[i].friendliness_pass_rate = friendliness(ratios[i], cfg_.friendliness_horizon).pass_rate();
  }
  s.fairness_final = trace.back().fairness;
  if (cfg_.fairness_slot >= 1 && static_cast<std::size_t>(cfg_.fairness_slot) <= trace.size()) {
    s.fairness_at_slot = trace[static_cast<std::size_t>(cfg_.fairness_slot - 1)].fairness;
  }

  // Fairness-step condition on cumulative quality; Jain is scale-free so the trace index applies.
  if (users_.size() >= 2) {
    std::vector<double> cum(users_.size(), 0.0), delta(users_.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
      for (std::size_t i = 0; i < users_.size(); ++i) delta[i] = trace[k].users[i].quality;
      if (k > 0 && trace[k - 1].fairness && trace[k].fairness && lemma2_condition(cum, delta)) {
        ++s.lemma2_checks;
        if (*trace[k].fairness < *trace[k - 1].fairness - 1e-9) ++s.lemma2_counterexamples;
      }
      for (std::size_t i = 0; i < users_.size(); ++i) cum[i] += delta[i];
    }
  }
  return s;
}

RunResult run(const SimConfig &cfg) {
  Simulator sim(cfg);
  RunResult out;
  out.trace.reserve(static_cast<std::size_t>(cfg.slots));
  for (int k = 0; k < cfg.slots; ++k) out.trace.push_back(sim.step());
  out.summary = sim.summarize(out.trace);
  return out;
}

}  // namespace mediatcp
