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
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string_view>

namespace skymr::metering {

enum class Phase : std::uint8_t { kMap, kShuffle, kReduce, kDfsRead, kDfsWrite, kBench };
inline constexpr std::size_t kPhaseCount = 6;
inline constexpr std::array<Phase, kPhaseCount> kAllPhases{Phase::kMap,     Phase::kShuffle,
                                                          Phase::kReduce,  Phase::kDfsRead,
                                                          Phase::kDfsWrite, Phase::kBench};
std::string_view to_string(Phase phase);
std::optional<Phase> phase_from_string(std::string_view name);

/// Countable events. The first four are byte lanes; the rest feed the work
/// model only.
enum class Counter : std::uint8_t {
  kDiskRead,
  kDiskWrite,
  kNetLocal,
  kNetRemote,
  kChecksumBytes,
  kCodecBytes,
  kKeyComparisons,
  kDistanceEvaluations,
};
inline constexpr std::size_t kCounterCount = 8;
std::string_view to_string(Counter counter);

/// Work-unit weights standing in for an instruction count.
struct WorkModel {
  double perChecksumByte = 1.0;
  double perCodecByte = 1.0;
  double perLaneByte = 0.5;
  double perKeyComparison = 20.0;
  double perDistanceEvaluation = 50.0;
  std::optional<double> instrRateOverrideMips;
};

struct PhaseCounters {
  std::array<std::uint64_t, kCounterCount> counts{};
  double wallSeconds = 0.0;

  std::uint64_t operator[](Counter c) const { return counts[static_cast<std::size_t>(c)]; }
  std::uint64_t& operator[](Counter c) { return counts[static_cast<std::size_t>(c)]; }

  std::uint64_t disk_bytes() const { return (*this)[Counter::kDiskRead] + (*this)[Counter::kDiskWrite]; }
  std::uint64_t net_bytes() const { return (*this)[Counter::kNetLocal] + (*this)[Counter::kNetRemote]; }
  double work_units(const WorkModel& model) const;
  bool idle() const;

  PhaseCounters& operator+=(const PhaseCounters& other);
};

struct MeterSnapshot {
  std::array<PhaseCounters, kPhaseCount> phases{};

  const PhaseCounters& operator[](Phase p) const { return phases[static_cast<std::size_t>(p)]; }
  PhaseCounters& operator[](Phase p) { return phases[static_cast<std::size_t>(p)]; }

  /// Sum over every phase of one counter.
  std::uint64_t total(Counter c) const;
  MeterSnapshot& operator+=(const MeterSnapshot& other);
  /// Equality of all event counters; wall time is excluded.
  bool same_counts(const MeterSnapshot& other) const;
};

/// Thread-safe accumulator. Increments and snapshots are serialized by one
/// mutex, so a snapshot always sees whole updates.
class Meter {
 public:
  void add(Phase phase, Counter counter, std::uint64_t amount);
  void add_wall(Phase phase, double seconds);
  void merge(const MeterSnapshot& delta);
  MeterSnapshot snapshot() const;

 private:
  mutable std::mutex mu_;
  MeterSnapshot totals_;
};

/// Adds the elapsed wall time of its scope to one phase.
class ScopedPhaseTimer {
 public:
  ScopedPhaseTimer(Meter& meter, Phase phase)
      : meter_(meter), phase_(phase), start_(std::chrono::steady_clock::now()) {}
  ~ScopedPhaseTimer() {
    meter_.add_wall(phase_, std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count());
  }
  ScopedPhaseTimer(const ScopedPhaseTimer&) = delete;
  ScopedPhaseTimer& operator=(const ScopedPhaseTimer&) = delete;

 private:
  Meter& meter_;
  Phase phase_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace skymr::metering
