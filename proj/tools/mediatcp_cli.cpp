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

// mediatcp: experiment runner.
//   mediatcp run --config cfg.json --out dir
//   mediatcp sweep --config cfg.json --lambda-grid 1,5,10,20 --gamma-grid 0,0.5,0.8
//   mediatcp compare --config cfg.json --controllers mt,rd,pa --delay-grid 133,266,400
//   mediatcp fairness --config pair.json --tcp-users-grid 10,20
//   mediatcp oracle-check --instances 500 [--dag]

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mediatcp/config_io.hpp"
#include "mediatcp/errors.hpp"
#include "mediatcp/experiments.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mediatcp;

namespace {

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out = "out";
  std::string lambda_grid = "1,5,10,20";
  std::string gamma_grid = "0,0.5,0.8";
  std::string k_grid = "4";
  std::string delay_grid = "133,266,400,533";
  std::string tcp_users_grid = "20";
  std::string controllers = "mt,rd,pa";
  int parallelism = 0;
  int replicates = 1;
  int instances = 500;
  bool dag = false;
};

std::vector<std::string> split(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> number_grid(const std::string &text, const std::string &flag) {
  std::vector<double> out;
  for (const auto &s : split(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception &) {
      throw ConfigError(flag + ": '" + s + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(flag + ": empty grid");
  return out;
}

std::vector<int> int_grid(const std::string &text, const std::string &flag) {
  std::vector<int> out;
  for (double v : number_grid(text, flag)) {
    if (v != static_cast<int>(v)) throw ConfigError(flag + ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

SimConfig load(const Options &opt) {
  if (opt.config.empty()) throw ConfigError("--config is required");
  SimConfig cfg = load_config(opt.config);
  if (opt.seed_set) cfg.seed = opt.seed;
  return cfg;
}

std::vector<std::uint64_t> seeds_of(const SimConfig &cfg, const Options &opt) {
  if (opt.replicates < 1) throw ConfigError("--replicates: must be at least 1");
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < opt.replicates; ++r) seeds.push_back(cfg.seed + static_cast<std::uint64_t>(r));
  return seeds;
}

json header(const SimConfig &cfg, const std::string &command) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"quality_unit", kQualityUnit},
              {"config", to_json(cfg)}};
}

void write_json(const std::string &dir, const std::string &name, const json &doc) {
  fs::create_directories(dir);
  write_text_file((fs::path(dir) / name).string(), doc.dump(2) + "\n");
}

int cmd_run(const Options &opt) {
  SimConfig cfg = load(opt);
  RunResult res = run(cfg);
  fs::create_directories(opt.out);
  std::ostringstream csv;
  write_trace_csv(csv, cfg, res.trace);
  write_text_file((fs::path(opt.out) / "trace.csv").string(), csv.str());
  write_json(opt.out, "summary.json", summary_json(cfg, res.summary));
  std::cout << "wrote " << res.trace.size() << " slots to " << opt.out << "\n";
  return 0;
}

int cmd_sweep(const Options &opt) {
  SimConfig cfg = load(opt);
  auto lambdas = number_grid(opt.lambda_grid, "--lambda-grid");
  auto gammas = number_grid(opt.gamma_grid, "--gamma-grid");
  auto ks = int_grid(opt.k_grid, "--k-grid");
  auto seeds = seeds_of(cfg, opt);
  auto rows = run_sweep(cfg, lambdas, gammas, ks, seeds, opt.parallelism);
  json doc = header(cfg, "sweep");
  doc["seeds"] = seeds;
  json table = json::array();
  std::ostringstream csv;
  csv << "lambda,gamma,horizon,mean_quality,quality_se,mean_ratio,ratio_se,pass_rate\n";
  for (const SweepRow &r : rows) {
    table.push_back({{"lambda", r.lambda},
                     {"gamma", r.gamma},
                     {"horizon", r.horizon},
                     {"quality", to_json(r.quality)},
                     {"ratio", to_json(r.ratio)},
                     {"pass_rate", to_json(r.pass_rate)}});
    csv << format_number(r.lambda) << "," << format_number(r.gamma) << "," << r.horizon << ","
        << format_number(r.quality.mean) << "," << format_number(r.quality.se) << ","
        << format_number(r.ratio.mean) << "," << format_number(r.ratio.se) << ","
        << format_number(r.pass_rate.mean) << "\n";
  }
  doc["rows"] = table;
  write_json(opt.out, "sweep.json", doc);
  write_text_file((fs::path(opt.out) / "sweep.csv").string(), csv.str());
  std::cout << csv.str();
  return 0;
}

int cmd_compare(const Options &opt) {
  SimConfig cfg = load(opt);
  std::vector<ControllerKind> kinds;
  for (const auto &name : split(opt.controllers)) {
    auto k = parse_controller(name);
    if (!k) throw ConfigError("--controllers: unknown controller '" + name + "'");
    kinds.push_back(*k);
  }
  std::vector<double> delays;
  for (double ms : number_grid(opt.delay_grid, "--delay-grid")) delays.push_back(ms / 1000.0);
  auto seeds = seeds_of(cfg, opt);
  auto rows = run_compare(cfg, kinds, delays, seeds, opt.parallelism);
  json doc = header(cfg, "compare");
  doc["seeds"] = seeds;
  json table = json::array();
  std::ostringstream csv;
  csv << "controller,delay_ms,mean_quality,quality_se,mean_ratio\n";
  for (const CompareRow &r : rows) {
    table.push_back({{"controller", r.controller},
                     {"delay_ms", r.delay * 1000.0},
                     {"quality", to_json(r.quality)},
                     {"ratio", to_json(r.ratio)}});
    csv << r.controller << "," << format_number(r.delay * 1000.0) << ","
        << format_number(r.quality.mean) << "," << format_number(r.quality.se) << ","
        << format_number(r.ratio.mean) << "\n";
  }
  doc["rows"] = table;
  write_json(opt.out, "compare.json", doc);
  write_text_file((fs::path(opt.out) / "compare.csv").string(), csv.str());
  std::cout << csv.str();
  return 0;
}

int cmd_fairness(const Options &opt) {
  SimConfig cfg = load(opt);
  auto counts = int_grid(opt.tcp_users_grid, "--tcp-users-grid");
  auto seeds = seeds_of(cfg, opt);
  auto rows = run_fairness(cfg, counts, seeds, opt.parallelism);
  json doc = header(cfg, "fairness");
  doc["seeds"] = seeds;
  json table = json::array();
  for (const FairnessRow &r : rows) {
    json users = json::array();
    for (const Stat &s : r.user_quality) users.push_back(to_json(s));
    table.push_back({{"tcp_users", r.tcp_users},
                     {"user_quality", users},
                     {"gap", to_json(r.gap)},
                     {"fairness_final", to_json(r.fairness_final)},
                     {"fairness_at_slot", to_json(r.fairness_at_slot)},
                     {"bg_mean_window", to_json(r.bg_mean_window)},
                     {"lemma2_checks", r.lemma2_checks},
                     {"lemma2_counterexamples", r.lemma2_counterexamples},
                     {"conditions", to_json(r.conditions)}});
    std::cout << "tcp_users=" << r.tcp_users << " gap=" << format_number(r.gap.mean)
              << " jain@" << cfg.fairness_slot << "=" << format_number(r.fairness_at_slot.mean)
              << " conditions=" << (r.conditions.all() ? "pass" : "fail") << "\n";
  }
  doc["rows"] = table;
  write_json(opt.out, "fairness.json", doc);
  return 0;
}

int cmd_oracle_check(const Options &opt) {
  OracleCheckOptions o;
  o.seed = opt.seed_set ? opt.seed : 1;
  o.instances = opt.instances;
  o.dag = opt.dag;
  OracleCheckReport rep = run_oracle_check(o);
  json doc{{"schema_version", kSchemaVersion},
           {"command", "oracle-check"},
           {"options",
            {{"seed", o.seed},
             {"instances", o.instances},
             {"dag", o.dag},
             {"max_classes", o.max_classes},
             {"max_occupancy", o.max_occupancy},
             {"max_grid", o.max_grid},
             {"max_horizon", o.max_horizon}}},
           {"instances", rep.instances},
           {"states", rep.states},
           {"permission_mismatches", rep.permission_mismatches},
           {"value_mismatches", rep.value_mismatches},
           {"max_value_gap", rep.max_value_gap},
           {"max_separability_gap", rep.max_separability_gap},
           {"monotonicity_violations", rep.monotonicity_violations},
           {"examples", rep.examples}};
  write_json(opt.out, "oracle_check.json", doc);
  std::cout << "instances=" << rep.instances << " states=" << rep.states
            << " permission_mismatches=" << rep.permission_mismatches
            << " value_mismatches=" << rep.value_mismatches << "\n";
  return (rep.permission_mismatches == 0 && rep.value_mismatches == 0) ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"media-TCP simulator and FHMDP solver"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App *sub, bool needs_config) {
    auto *c = sub->add_option("--config", opt.config, "JSON experiment config");
    if (needs_config) c->required();
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t &v) { opt.seed = v; opt.seed_set = true; },
        "override the config seed");
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    sub->add_option("--parallelism", opt.parallelism, "worker threads (0 = all cores)");
  };

  auto *run_cmd = app.add_subcommand("run", "simulate one config, write trace.csv and summary.json");
  common(run_cmd, true);

  auto *sweep = app.add_subcommand("sweep", "lambda x gamma x K tradeoff table");
  common(sweep, true);
  sweep->add_option("--lambda-grid", opt.lambda_grid)->capture_default_str();
  sweep->add_option("--gamma-grid", opt.gamma_grid)->capture_default_str();
  sweep->add_option("--k-grid", opt.k_grid)->capture_default_str();
  sweep->add_option("--replicates", opt.replicates, "seeds seed..seed+R-1")->capture_default_str();

  auto *compare = app.add_subcommand("compare", "quality versus playback delay per controller");
  common(compare, true);
  compare->add_option("--controllers", opt.controllers)->capture_default_str();
  compare->add_option("--delay-grid", opt.delay_grid, "playback delays in ms")->capture_default_str();
  compare->add_option("--replicates", opt.replicates)->capture_default_str();

  auto *fair = app.add_subcommand("fairness", "quality fairness across media users");
  common(fair, true);
  fair->add_option("--tcp-users-grid", opt.tcp_users_grid)->capture_default_str();
  fair->add_option("--replicates", opt.replicates)->capture_default_str();

  auto *oracle = app.add_subcommand("oracle-check", "solver against the exhaustive joint oracle");
  common(oracle, false);
  oracle->add_option("--instances", opt.instances)->capture_default_str();
  oracle->add_flag("--dag", opt.dag, "random dependency graphs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (compare->parsed()) return cmd_compare(opt);
    if (fair->parsed()) return cmd_fairness(opt);
    if (oracle->parsed()) return cmd_oracle_check(opt);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
