// Copyright 2026 The skymr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "skymr/metering/amdahl.hpp"
#include "skymr/metering/meter.hpp"

namespace skymr::metering {

/// Everything persisted about one CLI run. The Amdahl table is derived from
/// the snapshot and work model, so it is recomputed on load.
struct RunReport {
  std::string runId;
  std::string command;
  std::map<std::string, std::string> config;
  MeterSnapshot meter;
  WorkModel workModel;
  double wallSeconds = 0.0;
  std::optional<double> watts;
  AmdahlReport amdahl;
  nlohmann::json details = nlohmann::json::object();

  /// Recomputes `amdahl` (and energy when watts is set).
  void refresh_amdahl();
};

nlohmann::json to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::json& doc);

/// Column order of the flat CSV rendering.
inline constexpr const char* kCsvHeader =
    "row,name,disk_read_bytes,disk_write_bytes,net_local_bytes,net_remote_bytes,work_units,"
    "wall_seconds,instr_rate_mips,disk_bit_rate,net_bit_rate,ad,adn,joules";

/// One row per phase, one per task class, and an energy row when watts is set.
std::string to_csv(const RunReport& report);

}  // namespace skymr::metering
