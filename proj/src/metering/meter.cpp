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

#include "skymr/metering/meter.hpp"

namespace skymr::metering {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kMap: return "map";
    case Phase::kShuffle: return "shuffle";
    case Phase::kReduce: return "reduce";
    case Phase::kDfsRead: return "dfs_read";
    case Phase::kDfsWrite: return "dfs_write";
    case Phase::kBench: return "bench";
  }
  return "?";
}

std::optional<Phase> phase_from_string(std::string_view name) {
  for (Phase p : kAllPhases)
    if (to_string(p) == name) return p;
  return std::nullopt;
}

std::string_view to_string(Counter counter) {
  switch (counter) {
    case Counter::kDiskRead: return "disk_read_bytes";
    case Counter::kDiskWrite: return "disk_write_bytes";
    case Counter::kNetLocal: return "net_local_bytes";
    case Counter::kNetRemote: return "net_remote_bytes";
    case Counter::kChecksumBytes: return "checksum_bytes";
    case Counter::kCodecBytes: return "codec_bytes";
    case Counter::kKeyComparisons: return "key_comparisons";
    case Counter::kDistanceEvaluations: return "distance_evaluations";
  }
  return "?";
}

double PhaseCounters::work_units(const WorkModel& m) const {
  return m.perChecksumByte * static_cast<double>((*this)[Counter::kChecksumBytes]) +
         m.perCodecByte * static_cast<double>((*this)[Counter::kCodecBytes]) +
         m.perLaneByte * static_cast<double>(disk_bytes() + net_bytes()) +
         m.perKeyComparison * static_cast<double>((*this)[Counter::kKeyComparisons]) +
         m.perDistanceEvaluation * static_cast<double>((*this)[Counter::kDistanceEvaluations]);
}

bool PhaseCounters::idle() const {
  for (auto c : counts)
    if (c != 0) return false;
  return true;
}

PhaseCounters& PhaseCounters::operator+=(const PhaseCounters& other) {
  for (std::size_t i = 0; i < kCounterCount; ++i) counts[i] += other.counts[i];
  wallSeconds += other.wallSeconds;
  return *this;
}

std::uint64_t MeterSnapshot::total(Counter c) const {
  std::uint64_t sum = 0;
  for (const auto& p : phases) sum += p[c];
  return sum;
}

MeterSnapshot& MeterSnapshot::operator+=(const MeterSnapshot& other) {
  for (std::size_t i = 0; i < kPhaseCount; ++i) phases[i] += other.phases[i];
  return *this;
}

bool MeterSnapshot::same_counts(const MeterSnapshot& other) const {
  for (std::size_t i = 0; i < kPhaseCount; ++i)
    if (phases[i].counts != other.phases[i].counts) return false;
  return true;
}

void Meter::add(Phase phase, Counter counter, std::uint64_t amount) {
  std::lock_guard lock(mu_);
  totals_[phase][counter] += amount;
}

void Meter::add_wall(Phase phase, double seconds) {
  std::lock_guard lock(mu_);
  totals_[phase].wallSeconds += seconds;
}

void Meter::merge(const MeterSnapshot& delta) {
  std::lock_guard lock(mu_);
  totals_ += delta;
}

MeterSnapshot Meter::snapshot() const {
  std::lock_guard lock(mu_);
  return totals_;
}

}  // namespace skymr::metering
