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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "mediatcp/config_io.hpp"
#include "mediatcp/errors.hpp"

namespace mediatcp {
namespace {

using nlohmann::json;

json minimal() {
  return json::parse(R"({
    "link": {"capacity": 420, "buffer": 20},
    "slots": 30,
    "users": [{"workload": "coastguard"}]
  })");
}

std::string error_of(const json &doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return "";
}

TEST(ParseConfig, MinimalDefaults) {
  SimConfig c = parse_config(minimal());
  EXPECT_EQ(c.slots, 30);
  EXPECT_EQ(c.seed, 1u);
  ASSERT_EQ(c.users.size(), 1u);
  EXPECT_EQ(c.users[0].classes.size(), 16u);
  EXPECT_EQ(c.users[0].controller, ControllerKind::kMediaTcp);
  ASSERT_TRUE(c.users[0].lambda.has_value());
  EXPECT_DOUBLE_EQ(*c.users[0].lambda, 10.0);
  EXPECT_EQ(c.background.count, 20);
}

TEST(ParseConfig, MissingCapacity) {
  json d = minimal();
  d["link"].erase("capacity");
  EXPECT_EQ(error_of(d), "link.capacity: missing");
  d.erase("link");
  EXPECT_EQ(error_of(d), "link: missing");
}

TEST(ParseConfig, UnknownFieldsRejected) {
  json d = minimal();
  d["capacity"] = 3;
  EXPECT_EQ(error_of(d), "capacity: unknown field");
  d = minimal();
  d["users"][0]["lamda"] = 3;
  EXPECT_EQ(error_of(d), "users[0].lamda: unknown field");
}

TEST(ParseConfig, TypeErrors) {
  json d = minimal();
  d["slots"] = "many";
  EXPECT_EQ(error_of(d), "slots: expected an integer");
  d = minimal();
  d["users"][0]["controller"] = "bbr";
  EXPECT_NE(error_of(d).find("users[0].controller"), std::string::npos);
  d = minimal();
  d["users"][0]["workload"] = "akiyo";
  EXPECT_NE(error_of(d).find("unknown workload"), std::string::npos);
}

TEST(ParseConfig, WorkloadOrClasses) {
  json d = minimal();
  d["users"][0]["classes"] = json::array();
  EXPECT_NE(error_of(d).find("exactly one"), std::string::npos);
  d["users"][0].erase("workload");
  d["users"][0]["classes"] = json::parse(R"([{"q": 0.1, "n0": 3}, {"q": 0.05, "n0": 2, "parents": [1]}])");
  SimConfig c = parse_config(d);
  ASSERT_EQ(c.users[0].classes.size(), 2u);
  EXPECT_EQ(c.users[0].classes[1].parents, (std::vector<int>{1}));
  d["users"][0]["classes"][0].erase("q");
  EXPECT_EQ(error_of(d), "users[0].classes[0].q: missing");
}

TEST(ParseConfig, LambdaForms) {
  json d = minimal();
  d["users"][0]["lambda"] = "auto";
  EXPECT_FALSE(parse_config(d).users[0].lambda.has_value());
  d["users"][0]["lambda"] = nullptr;
  EXPECT_FALSE(parse_config(d).users[0].lambda.has_value());
  d["users"][0]["lambda"] = 2.5;
  EXPECT_DOUBLE_EQ(*parse_config(d).users[0].lambda, 2.5);
  d["users"][0]["lambda"] = "big";
  EXPECT_NE(error_of(d).find("users[0].lambda"), std::string::npos);
}

TEST(ParseConfig, SemanticValidationRuns) {
  json d = minimal();
  d["users"][0]["gamma"] = 1.2;
  EXPECT_NE(error_of(d).find("users[0].gamma"), std::string::npos);
}

TEST(ParseConfig, RoundTrip) {
  json d = minimal();
  d["users"][0]["lambda"] = "auto";
  SimConfig a = parse_config(d);
  SimConfig b = parse_config(to_json(a));
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_EQ(b.users[0].classes, a.users[0].classes);
}

TEST(LoadConfig, MissingFileAndBadJson) {
  EXPECT_THROW(load_config("/nonexistent/cfg.json"), ConfigError);
  const std::string path = ::testing::TempDir() + "bad.json";
  write_text_file(path, "{ not json");
  EXPECT_THROW(load_config(path), ConfigError);
}

TEST(TraceCsv, HeaderAndRows) {
  SimConfig c = parse_config(minimal());
  RunResult r = run(c);
  std::ostringstream os;
  write_trace_csv(os, c, r.trace);
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "slot,p_hat,load,bg_mean_window,fairness,u0_window,u0_w_tcp,u0_p,u0_ratio,u0_quality,u0_permissions");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
  }
  EXPECT_EQ(rows, 30);
}

TEST(SummaryJson, Stamped) {
  SimConfig c = parse_config(minimal());
  RunResult r = run(c);
  json s = summary_json(c, r.summary);
  EXPECT_EQ(s["schema_version"], kSchemaVersion);
  EXPECT_TRUE(s.contains("config"));
  EXPECT_TRUE(s.contains("summary"));
  EXPECT_EQ(s["summary"]["users"].size(), 1u);
}

TEST(FormatNumber, Stable) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333");
  EXPECT_EQ(format_number(NAN), "nan");
}

}  // namespace
}  // namespace mediatcp
