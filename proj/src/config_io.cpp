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

#include "mediatcp/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "mediatcp/errors.hpp"
#include "mediatcp/presets.hpp"

namespace mediatcp {

using nlohmann::json;

namespace {

// Typed access to one JSON object with the field path kept for messages.
class Section {
 public:
  Section(const json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(label() + ": expected an object");
  }

  std::string field(const std::string &key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  bool has(const std::string &key) const { return obj_.contains(key); }

  const json &require(const std::string &key) const {
    seen_.insert(key);
    if (!obj_.contains(key)) throw ConfigError(field(key) + ": missing");
    return obj_.at(key);
  }

  double number(const std::string &key, double fallback, bool required = false) const {
    seen_.insert(key);
    if (!obj_.contains(key)) {
      if (required) throw ConfigError(field(key) + ": missing");
      return fallback;
    }
    const json &v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    return v.get<double>();
  }

  long integer(const std::string &key, long fallback, bool required = false) const {
    seen_.insert(key);
    if (!obj_.contains(key)) {
      if (required) throw ConfigError(field(key) + ": missing");
      return fallback;
    }
    const json &v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
    return v.get<long>();
  }

  std::string text(const std::string &key, const std::string &fallback) const {
    seen_.insert(key);
    if (!obj_.contains(key)) return fallback;
    const json &v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    return v.get<std::string>();
  }

  Section child(const std::string &key) const {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(obj_.contains(key) ? obj_.at(key) : empty, field(key));
  }

  void reject_unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()) + ": unknown field");
    }
  }

 private:
  std::string label() const { return path_.empty() ? "config" : path_; }

  const json &obj_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

std::vector<ClassSpec> parse_classes(const json &arr, const std::string &path) {
  if (!arr.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<ClassSpec> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Section c(arr[i], path + "[" + std::to_string(i) + "]");
    ClassSpec s;
    s.id = static_cast<int>(c.integer("id", static_cast<long>(i) + 1));
    s.q = c.number("q", 0.0, true);
    s.n0 = static_cast<int>(c.integer("n0", 0, true));
    s.arrival_time = c.number("arrival_time", 0.0);
    if (c.has("parents")) {
      const json &p = c.require("parents");
      if (!p.is_array()) throw ConfigError(c.field("parents") + ": expected an array");
      for (const json &v : p) {
        if (!v.is_number_integer()) throw ConfigError(c.field("parents") + ": expected ids");
        s.parents.push_back(v.get<int>());
      }
    }
    c.reject_unknown();
    s.deadline = s.arrival_time;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ClassSpec> named_workload(const std::string &name, double slot_duration,
                                      const std::string &path) {
  if (name == "fairness-a") return fairness_pair_classes(0, slot_duration);
  if (name == "fairness-b") return fairness_pair_classes(1, slot_duration);
  for (const auto &s : sequence_names()) {
    if (s == name) return sequence_classes(name, slot_duration);
  }
  throw ConfigError(path + ": unknown workload '" + name + "'");
}

}  // namespace

SimConfig parse_config(const json &doc) {
  Section root(doc, "");
  SimConfig cfg;
  cfg.seed = static_cast<std::uint64_t>(root.integer("seed", 1));
  cfg.slots = static_cast<int>(root.integer("slots", cfg.slots));
  cfg.slot_duration = root.number("slot_duration", cfg.slot_duration);
  cfg.packet_size = static_cast<int>(root.integer("packet_size", cfg.packet_size));
  cfg.n_max = static_cast<int>(root.integer("n_max", cfg.n_max));
  cfg.fairness_slot = static_cast<int>(root.integer("fairness_slot", cfg.fairness_slot));
  cfg.metric_sample_every =
      static_cast<int>(root.integer("metric_sample_every", cfg.metric_sample_every));
  cfg.friendliness_horizon =
      static_cast<int>(root.integer("friendliness_horizon", cfg.friendliness_horizon));

  Section link(root.require("link"), "link");
  cfg.link.capacity = link.number("capacity", 0.0, true);
  cfg.link.buffer = static_cast<int>(link.integer("buffer", 0, true));
  link.reject_unknown();

  Section bg = root.child("background");
  cfg.background.count = static_cast<int>(bg.integer("count", cfg.background.count));
  cfg.background.a = bg.number("a", cfg.background.a);
  cfg.background.b = bg.number("b", cfg.background.b);
  cfg.background.initial_window = bg.number("initial_window", cfg.background.initial_window);
  bg.reject_unknown();

  Section net = root.child("network");
  cfg.alpha = net.number("alpha", cfg.alpha);
  cfg.p_floor = net.number("p_floor", cfg.p_floor);
  cfg.initial_loss = net.number("initial_loss", cfg.initial_loss);
  cfg.w_max = static_cast<int>(net.integer("w_max", cfg.w_max));
  cfg.chain_window = static_cast<int>(net.integer("chain_window", cfg.chain_window));
  net.reject_unknown();

  const json &users = root.require("users");
  if (!users.is_array()) throw ConfigError("users: expected an array");
  for (std::size_t i = 0; i < users.size(); ++i) {
    const std::string path = "users[" + std::to_string(i) + "]";
    Section u(users[i], path);
    UserConfig uc;
    uc.name = u.text("name", "user" + std::to_string(i));
    std::string kind = u.text("controller", "mt");
    auto parsed = parse_controller(kind);
    if (!parsed) throw ConfigError(u.field("controller") + ": unknown controller '" + kind + "'");
    uc.controller = *parsed;
    const bool has_workload = u.has("workload");
    const bool has_classes = u.has("classes");
    if (has_workload == has_classes) {
      throw ConfigError(path + ": give exactly one of 'workload' or 'classes'");
    }
    if (has_workload) {
      uc.classes = named_workload(u.text("workload", ""), cfg.slot_duration, u.field("workload"));
    } else {
      uc.classes = parse_classes(u.require("classes"), u.field("classes"));
    }
    uc.gop_slots = static_cast<int>(u.integer("gop_slots", uc.gop_slots));
    uc.playback_delay = u.number("playback_delay", uc.playback_delay);
    if (u.has("lambda")) {
      const json &l = u.require("lambda");
      if (l.is_null() || (l.is_string() && l.get<std::string>() == "auto")) {
        uc.lambda.reset();
      } else if (l.is_number()) {
        uc.lambda = l.get<double>();
      } else {
        throw ConfigError(u.field("lambda") + ": expected a number, null or \"auto\"");
      }
    } else {
      uc.lambda = 10.0;
    }
    uc.gamma = u.number("gamma", uc.gamma);
    uc.horizon = static_cast<int>(u.integer("horizon", uc.horizon));
    u.reject_unknown();
    cfg.users.push_back(std::move(uc));
  }
  root.reject_unknown();
  validate(cfg);
  return cfg;
}

SimConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const SimConfig &cfg) {
  json users = json::array();
  for (const UserConfig &u : cfg.users) {
    json classes = json::array();
    for (const ClassSpec &s : u.classes) {
      classes.push_back({{"id", s.id},
                         {"q", s.q},
                         {"n0", s.n0},
                         {"parents", s.parents},
                         {"arrival_time", s.arrival_time}});
    }
    users.push_back({{"name", u.name},
                     {"controller", to_string(u.controller)},
                     {"classes", classes},
                     {"gop_slots", u.gop_slots},
                     {"playback_delay", u.playback_delay},
                     {"lambda", u.lambda ? json(*u.lambda) : json(nullptr)},
                     {"gamma", u.gamma},
                     {"horizon", u.horizon}});
  }
  return json{{"seed", cfg.seed},
              {"slots", cfg.slots},
              {"slot_duration", cfg.slot_duration},
              {"packet_size", cfg.packet_size},
              {"n_max", cfg.n_max},
              {"fairness_slot", cfg.fairness_slot},
              {"metric_sample_every", cfg.metric_sample_every},
              {"friendliness_horizon", cfg.friendliness_horizon},
              {"link", {{"capacity", cfg.link.capacity}, {"buffer", cfg.link.buffer}}},
              {"background",
               {{"count", cfg.background.count},
                {"a", cfg.background.a},
                {"b", cfg.background.b},
                {"initial_window", cfg.background.initial_window}}},
              {"network",
               {{"alpha", cfg.alpha},
                {"p_floor", cfg.p_floor},
                {"initial_loss", cfg.initial_loss},
                {"w_max", cfg.w_max},
                {"chain_window", cfg.chain_window}}},
              {"users", users}};
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<std::string> trace_columns(const SimConfig &cfg) {
  std::vector<std::string> cols = {"slot", "p_hat", "load", "bg_mean_window", "fairness"};
  for (std::size_t i = 0; i < cfg.users.size(); ++i) {
    const std::string p = "u" + std::to_string(i) + "_";
    for (const char *c : {"window", "w_tcp", "p", "ratio", "quality", "permissions"}) {
      cols.push_back(p + c);
    }
  }
  return cols;
}

void write_trace_csv(std::ostream &os, const SimConfig &cfg, const std::vector<SlotRecord> &trace) {
  const auto cols = trace_columns(cfg);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const SlotRecord &r : trace) {
    os << r.slot << "," << format_number(r.p_hat) << "," << format_number(r.load) << ","
       << format_number(r.bg_mean_window) << ","
       << (r.fairness ? format_number(*r.fairness) : std::string("")) << "";
    for (const UserSlot &u : r.users) {
      os << "," << u.window << "," << u.w_tcp << "," << format_number(u.p) << ","
         << format_number(u.ratio) << "," << format_number(u.quality) << "," << u.permissions;
    }
    os << "\n";
  }
}

json summary_json(const SimConfig &cfg, const RunSummary &s) {
  auto opt = [](const std::optional<double> &v) { return v ? json(*v) : json(nullptr); };
  json users = json::array();
  for (const UserSummary &u : s.users) {
    json classes = json::array();
    for (std::size_t m = 0; m < u.classes.size(); ++m) {
      const ClassCounters &c = u.classes[m];
      classes.push_back({{"id", m + 1},
                         {"arrived", c.arrived},
                         {"delivered", c.delivered},
                         {"expired", c.expired},
                         {"lost", c.lost},
                         {"instances_completed", c.instances_completed}});
    }
    users.push_back({{"name", u.name},
                     {"controller", u.controller},
                     {"lambda", u.lambda},
                     {"mean_quality", u.mean_quality},
                     {"mean_ratio", u.mean_ratio},
                     {"mean_window", u.mean_window},
                     {"friendliness_pass_rate", u.friendliness_pass_rate},
                     {"classes", classes}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"quality_unit", kQualityUnit},
              {"config", to_json(cfg)},
              {"summary",
               {{"no_data", s.no_data},
                {"slots", s.slots},
                {"mean_p_hat", s.mean_p_hat},
                {"bg_mean_window", s.bg_mean_window},
                {"fairness_final", opt(s.fairness_final)},
                {"fairness_at_slot", opt(s.fairness_at_slot)},
                {"lemma2_checks", s.lemma2_checks},
                {"lemma2_counterexamples", s.lemma2_counterexamples},
                {"monotonicity_violations", s.monotonicity_violations},
                {"users", users}}}};
}

void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

}  // namespace mediatcp
