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

#include "skymr/mr/spill.hpp"

#include <algorithm>
#include <cmath>

#include "skymr/common/error.hpp"

namespace skymr::mr {

std::uint64_t SpillConfig::data_capacity() const {
  return static_cast<std::uint64_t>(std::floor(static_cast<double>(totalBufferBytes) * (1.0 - recordPercent)));
}

std::uint64_t SpillConfig::meta_capacity() const {
  return static_cast<std::uint64_t>(
      std::floor(static_cast<double>(totalBufferBytes) * recordPercent / kMetaBytesPerRecord));
}

void SpillConfig::validate() const {
  if (!(recordPercent > 0.0 && recordPercent < 1.0))
    throw Error(ErrorCode::kInvalidConfig, "io.sort.record.percent must be in (0, 1)");
  if (!(spillPercent > 0.0 && spillPercent <= 1.0))
    throw Error(ErrorCode::kInvalidConfig, "io.sort.spill.percent must be in (0, 1]");
  if (data_capacity() == 0 || meta_capacity() == 0)
    throw Error(ErrorCode::kInvalidConfig, "sort buffer too small for its record percent");
  if (data_capacity() > 0xFFFFFFFFULL)
    throw Error(ErrorCode::kInvalidConfig, "sort buffer data region must fit 32-bit offsets");
}

SpillRecommendation recommend_spill_config(std::uint64_t splitBytes, std::uint64_t inRecordBytes,
                                           std::uint64_t outRecordBytes, double recordGrowthFactor,
                                           double spillPercent) {
  if (splitBytes == 0 || inRecordBytes == 0 || outRecordBytes == 0 || !(recordGrowthFactor >= 1.0) ||
      !(spillPercent > 0.0 && spillPercent <= 1.0))
    throw Error(ErrorCode::kInvalidConfig, "spill recommendation inputs out of range");

  SpillRecommendation rec;
  rec.records = static_cast<std::uint64_t>(
      std::floor(static_cast<double>(splitBytes / inRecordBytes) * recordGrowthFactor));
  rec.dataNeedBytes = rec.records * outRecordBytes;
  rec.metaNeedBytes = rec.records * kMetaBytesPerRecord;
  const double share = static_cast<double>(rec.metaNeedBytes) /
                       static_cast<double>(rec.dataNeedBytes + rec.metaNeedBytes);
  rec.recordPercent = std::clamp(std::round(share * 100.0) / 100.0, 0.01, 0.99);

  constexpr std::uint64_t kMiB = 1ULL << 20;
  for (std::uint64_t mib = 1;; ++mib) {
    const SpillConfig cfg{mib * kMiB, rec.recordPercent, spillPercent};
    const bool dataFits = spillPercent * static_cast<double>(cfg.data_capacity()) >= static_cast<double>(rec.dataNeedBytes);
    const bool metaFits = spillPercent * static_cast<double>(cfg.meta_capacity() * kMetaBytesPerRecord) >=
                          static_cast<double>(rec.metaNeedBytes);
    if (dataFits && metaFits) {
      rec.totalBufferBytes = cfg.totalBufferBytes;
      return rec;
    }
  }
}

}  // namespace skymr::mr
