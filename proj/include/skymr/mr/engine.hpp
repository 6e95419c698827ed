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
#include <filesystem>
#include <string>
#include <vector>

#include "skymr/dfs/block_store.hpp"
#include "skymr/metering/meter.hpp"
#include "skymr/mr/job.hpp"

namespace skymr::mr {

struct MapTaskResult {
  SegmentRef segment;
  TaskReport report;
};

/// Reads the split, maps it through the sort buffer, spills and merges. The
/// final segment lands at workDir/map-<index>.seg; spills use the same dir.
/// All reads and writes are metered into `meter`.
MapTaskResult run_map_task(const InputSplit& split, std::uint32_t node, const JobSpec& spec,
                           const dfs::BlockStore& store, const std::filesystem::path& workDir,
                           metering::Meter& meter);

struct ShuffleResult {
  std::vector<KeyValue> records;  // merged, sorted; ties keep map order
  std::uint64_t fetchedBytes = 0;
};

/// Pulls one partition from every segment and merges. Throws
/// Error(kFetchError) when a segment is missing.
ShuffleResult shuffle_fetch(std::uint32_t reducerIndex, std::uint32_t reducerNode,
                            const std::vector<SegmentRef>& segments, const JobSpec& spec,
                            metering::Meter& meter);

struct ReduceTaskResult {
  dfs::StoredFile output;
  TaskReport report;
  std::uint64_t digest = 0;
};

/// Shuffle plus grouped reduce; writes <outputPrefix>/part-NNNNN.
ReduceTaskResult run_reduce_task(std::uint32_t reducerIndex, std::uint32_t node,
                                 const std::vector<SegmentRef>& segments, const JobSpec& spec,
                                 dfs::BlockStore& store, metering::Meter& meter);

std::string part_path(const std::string& outputPrefix, std::uint32_t reducerIndex);

struct EngineOptions {
  std::size_t workers = 1;
  bool keepIntermediate = false;
};

/// Locality-aware map placement: for each split, the least-loaded node among
/// those holding all of its blocks (else any replica holder), ties to the
/// lowest node id.
std::vector<std::uint32_t> schedule_maps(const std::vector<InputSplit>& splits, std::uint32_t nodeCount);

/// Plans, schedules and runs a job. Map tasks finish before any reducer
/// starts. Output is independent of the worker count.
JobReport run_job(const JobSpec& spec, dfs::BlockStore& store, const EngineOptions& options,
                  metering::Meter& meter);

}  // namespace skymr::mr
