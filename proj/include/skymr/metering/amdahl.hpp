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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "skymr/metering/meter.hpp"

namespace skymr::metering {

/// Amdahl numbers as instructions per bit of I/O: larger means more
/// compute-bound, 1 is balanced.
struct AmdahlNumbers {
  double ad = 0.0;   // disk only
  double adn = 0.0;  // disk plus network
};

/// Throws kUndefinedRatio when the disk rate is zero and kOutOfRange on
/// negative rates.
AmdahlNumbers amdahl_numbers(double instrRateMips, double diskBytesPerSec, double netBytesPerSec);

/// Million instructions per second from frequency ratio, nominal clock, IPC
/// and core count.
double instr_rate(double freqRatio, double nominalHz, double ipc, double cores);

/// Cores needed to execute one instruction per I/O bit, counting the network
/// link duplexFactor times.
std::uint32_t cores_needed(double diskBitsPerSec, double netLinkBitsPerSec, double duplexFactor,
                           double ipc, double coreHz);

enum class TaskClass : std::uint8_t { kMapper, kReducer, kDfsRead, kDfsWrite };
inline constexpr std::array<TaskClass, 4> kAllTaskClasses{TaskClass::kMapper, TaskClass::kReducer,
                                                          TaskClass::kDfsRead, TaskClass::kDfsWrite};
std::string_view to_string(TaskClass cls);
/// Phases whose counters make up a task class.
std::vector<Phase> phases_of(TaskClass cls);

struct AmdahlRow {
  TaskClass taskClass = TaskClass::kMapper;
  PhaseCounters counters;  // summed over the class's phases
  double workUnits = 0.0;
  double instrRateMips = 0.0;
  double diskBitRate = 0.0;
  double netBitRate = 0.0;
  std::optional<double> ad;   // empty when the class did no disk I/O
  std::optional<double> adn;
};

struct Energy {
  double watts = 0.0;
  double wallSeconds = 0.0;
  double joules = 0.0;
};

struct AmdahlReport {
  std::vector<AmdahlRow> rows;
  std::optional<Energy> energy;

  const AmdahlRow& row(TaskClass cls) const;
};

struct AmdahlOptions {
  std::optional<double> watts;
  double wallSeconds = 0.0;  // whole-run wall time, used for energy
};

/// Per-class rates over each class's own wall time. Throws kMalformedInput
/// when a class has activity but no recorded wall time.
AmdahlReport job_amdahl_report(const MeterSnapshot& snapshot, const WorkModel& model,
                               const AmdahlOptions& options = {});

}  // namespace skymr::metering
