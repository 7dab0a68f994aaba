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

#ifndef MEDIATCP_CONFIG_IO_HPP_
#define MEDIATCP_CONFIG_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mediatcp/sim_engine.hpp"

namespace mediatcp {

inline constexpr const char *kSchemaVersion = "1.0";
inline constexpr const char *kQualityUnit = "dB distortion reduction per slot";

// Parses and validates a config document. Errors are ConfigError messages
// that name the field path, e.g. "link.capacity: missing".
SimConfig parse_config(const nlohmann::json &doc);
SimConfig load_config(const std::string &path);

// Fully resolved config, every default spelled out.
nlohmann::json to_json(const SimConfig &cfg);

// One row per slot; columns documented in docs/schema.md.
std::vector<std::string> trace_columns(const SimConfig &cfg);
void write_trace_csv(std::ostream &os, const SimConfig &cfg, const std::vector<SlotRecord> &trace);

nlohmann::json summary_json(const SimConfig &cfg, const RunSummary &summary);

// Fixed-format number for CSV cells.
std::string format_number(double v);

void write_text_file(const std::string &path, const std::string &text);

}  // namespace mediatcp

#endif  // MEDIATCP_CONFIG_IO_HPP_
