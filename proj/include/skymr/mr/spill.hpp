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

#include <cstdint>

namespace skymr::mr {

inline constexpr std::uint64_t kMetaBytesPerRecord = 16;  // four 32-bit integers

/// Map-side sort buffer sizing, the analog of io.sort.mb,
/// io.sort.record.percent and io.sort.spill.percent.
struct SpillConfig {
  std::uint64_t totalBufferBytes = 125ULL << 20;
  double recordPercent = 0.2;
  double spillPercent = 0.8;

  std::uint64_t data_capacity() const;  // bytes
  std::uint64_t meta_capacity() const;  // records
  /// Throws Error(kInvalidConfig).
  void validate() const;
};

struct SpillRecommendation {
  std::uint64_t records = 0;
  std::uint64_t dataNeedBytes = 0;
  std::uint64_t metaNeedBytes = 0;
  std::uint64_t totalBufferBytes = 0;  // whole MiB
  double recordPercent = 0.0;

  SpillConfig config(double spillPercent) const { return {totalBufferBytes, recordPercent, spillPercent}; }
};

/// Smallest whole-MiB buffer whose data and metadata regions both stay below
/// their spill thresholds for one split's worth of map output, so the task
/// writes to disk once.
SpillRecommendation recommend_spill_config(std::uint64_t splitBytes, std::uint64_t inRecordBytes,
                                           std::uint64_t outRecordBytes, double recordGrowthFactor,
                                           double spillPercent);

}  // namespace skymr::mr
