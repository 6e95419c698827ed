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

#include "skymr/metering/amdahl.hpp"

#include <cmath>
#include <string>

#include "skymr/common/error.hpp"

namespace skymr::metering {

AmdahlNumbers amdahl_numbers(double instrRateMips, double diskBytesPerSec, double netBytesPerSec) {
  if (instrRateMips < 0.0 || diskBytesPerSec < 0.0 || netBytesPerSec < 0.0)
    throw Error(ErrorCode::kOutOfRange, "rates must be non-negative");
  if (diskBytesPerSec == 0.0) throw Error(ErrorCode::kUndefinedRatio, "disk rate is zero");
  const double instrPerSec = instrRateMips * 1e6;
  return {instrPerSec / (diskBytesPerSec * 8.0),
          instrPerSec / ((diskBytesPerSec + netBytesPerSec) * 8.0)};
}

double instr_rate(double freqRatio, double nominalHz, double ipc, double cores) {
  if (!(freqRatio > 0.0 && freqRatio <= 1.0) || !(nominalHz > 0.0) || !(ipc > 0.0) || !(cores > 0.0))
    throw Error(ErrorCode::kOutOfRange, "instr_rate inputs must be positive with freqRatio <= 1");
  return freqRatio * nominalHz * ipc * cores / 1e6;
}

std::uint32_t cores_needed(double diskBitsPerSec, double netLinkBitsPerSec, double duplexFactor,
                           double ipc, double coreHz) {
  if (diskBitsPerSec < 0.0 || netLinkBitsPerSec < 0.0 || duplexFactor < 0.0 || !(ipc > 0.0) ||
      !(coreHz > 0.0))
    throw Error(ErrorCode::kOutOfRange, "cores_needed inputs out of range");
  const double cores = (diskBitsPerSec + duplexFactor * netLinkBitsPerSec) / (ipc * coreHz);
  // Tolerance keeps exact ratios like 4.0 from rounding up to 5.
  return static_cast<std::uint32_t>(std::max(1.0, std::ceil(cores - 1e-9)));
}

std::string_view to_string(TaskClass cls) {
  switch (cls) {
    case TaskClass::kMapper: return "mapper";
    case TaskClass::kReducer: return "reducer";
    case TaskClass::kDfsRead: return "dfs-read";
    case TaskClass::kDfsWrite: return "dfs-write";
  }
  return "?";
}

std::vector<Phase> phases_of(TaskClass cls) {
  switch (cls) {
    case TaskClass::kMapper: return {Phase::kMap};
    case TaskClass::kReducer: return {Phase::kShuffle, Phase::kReduce};
    case TaskClass::kDfsRead: return {Phase::kDfsRead};
    case TaskClass::kDfsWrite: return {Phase::kDfsWrite};
  }
  return {};
}

const AmdahlRow& AmdahlReport::row(TaskClass cls) const {
  for (const auto& r : rows)
    if (r.taskClass == cls) return r;
  throw Error(ErrorCode::kNotFound, "no Amdahl row for " + std::string(to_string(cls)));
}

AmdahlReport job_amdahl_report(const MeterSnapshot& snapshot, const WorkModel& model,
                               const AmdahlOptions& options) {
  AmdahlReport report;
  for (TaskClass cls : kAllTaskClasses) {
    AmdahlRow row;
    row.taskClass = cls;
    for (Phase p : phases_of(cls)) row.counters += snapshot[p];
    row.workUnits = row.counters.work_units(model);
    const double wall = row.counters.wallSeconds;
    if (!row.counters.idle()) {
      if (!(wall > 0.0))
        throw Error(ErrorCode::kMalformedInput,
                    "missing phase timing for task class " + std::string(to_string(cls)));
      row.instrRateMips = model.instrRateOverrideMips.value_or(row.workUnits / wall / 1e6);
      const double diskRate = static_cast<double>(row.counters.disk_bytes()) / wall;
      const double netRate = static_cast<double>(row.counters.net_bytes()) / wall;
      row.diskBitRate = diskRate * 8.0;
      row.netBitRate = netRate * 8.0;
      if (diskRate > 0.0) {
        const auto n = amdahl_numbers(row.instrRateMips, diskRate, netRate);
        row.ad = n.ad;
        row.adn = n.adn;
      }
    }
    report.rows.push_back(row);
  }
  if (options.watts)
    report.energy = Energy{*options.watts, options.wallSeconds, *options.watts * options.wallSeconds};
  return report;
}

}  // namespace skymr::metering
