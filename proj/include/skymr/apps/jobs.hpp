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
#include <string>
#include <vector>

#include "skymr/dfs/block_store.hpp"
#include "skymr/geometry/block_grid.hpp"
#include "skymr/geometry/pair_search.hpp"
#include "skymr/metering/meter.hpp"
#include "skymr/mr/engine.hpp"
#include "skymr/mr/job.hpp"

namespace skymr::apps {

struct SkyJobOptions {
  std::string catalog;       // store path of the 57-byte records
  std::string outputPrefix;  // store path prefix for job output
  geo::BlockConfig blocks;   // theta lives here
  std::uint32_t reducers = 8;
  std::uint64_t splitBytes = 64 * dfs::kMiB;
  mr::SpillConfig spill;
  dfs::WriteOptions output;
};

/// Partition by (zone * 2654435761 + block) mod R.
std::uint32_t block_partition(ByteView key, std::uint32_t reducers);

/// Mapper shared by both workloads: one (BlockKey, record) per assignment.
mr::Mapper block_assignment_mapper(const geo::BlockConfig& cfg);

/// Every pair within theta, 24 bytes each, one batched write per block.
mr::JobSpec neighbor_search_job(const SkyJobOptions& options);

/// Step one: a histogram line per block. Step two: one reducer folds them
/// into the "-1 -1" total line. Step two's inputs are filled in from step
/// one's outputs by run_neighbor_stats.
struct StatsJobs {
  mr::JobSpec perBlock;
  mr::JobSpec combine;
};
StatsJobs neighbor_stats_jobs(const SkyJobOptions& options);

struct SearchRun {
  mr::JobReport job;
  std::uint64_t pairs = 0;
};
SearchRun run_neighbor_search(const SkyJobOptions& options, dfs::BlockStore& store,
                              const mr::EngineOptions& engine, metering::Meter& meter);

struct StatsRun {
  mr::JobReport perBlock;
  mr::JobReport combine;
  geo::PairHistogram histogram;
};
StatsRun run_neighbor_stats(const SkyJobOptions& options, dfs::BlockStore& store,
                            const mr::EngineOptions& engine, metering::Meter& meter);

/// Pairs from every part file under a prefix, in part then record order.
std::vector<geo::PairRecord> read_pairs(const dfs::BlockStore& store, const std::string& prefix,
                                        metering::Meter& meter);

}  // namespace skymr::apps
