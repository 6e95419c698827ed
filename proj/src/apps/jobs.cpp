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

#include "skymr/apps/jobs.hpp"

#include <memory>

#include "skymr/apps/records.hpp"
#include "skymr/common/error.hpp"

namespace skymr::apps {

using metering::Counter;

std::uint32_t block_partition(ByteView key, std::uint32_t reducers) {
  const geo::BlockKey k = decode_block_key(key);
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(k.zone) * 2654435761ULL + k.block) % reducers);
}

mr::Mapper block_assignment_mapper(const geo::BlockConfig& cfg) {
  auto grid = std::make_shared<const geo::BlockGrid>(cfg);
  return [grid](ByteView rec, mr::MapContext& ctx) {
    const geo::SkyObject obj = decode_catalog_record(rec);
    for (const auto& a : grid->assignments(obj)) {
      const auto key = encode_block_key(a.key);
      ctx.emit(key, rec);
    }
  };
}

namespace {

// Members of one block, with the native flag recomputed from the key.
std::vector<geo::BlockMember> block_members(const geo::BlockGrid& grid, ByteView key,
                                            const std::vector<ByteView>& values) {
  const geo::BlockKey block = decode_block_key(key);
  std::vector<geo::BlockMember> members;
  members.reserve(values.size());
  for (auto v : values) {
    const geo::SkyObject obj = decode_catalog_record(v);
    members.push_back({obj, grid.home_block(obj) == block});
  }
  return members;
}

mr::JobSpec sky_job(const SkyJobOptions& o, const std::string& name, const std::string& prefix) {
  o.blocks.validate();
  mr::JobSpec spec;
  spec.name = name;
  spec.inputs = {o.catalog};
  spec.format = mr::InputFormat::kFixedRecords;
  spec.recordBytes = kCatalogRecordBytes;
  spec.splitBytes = o.splitBytes;
  spec.numReducers = o.reducers;
  spec.outputPrefix = prefix;
  spec.spill = o.spill;
  spec.outputOptions = o.output;
  spec.partitioner = block_partition;
  spec.mapper = block_assignment_mapper(o.blocks);
  return spec;
}

std::string join(const std::string& prefix, const std::string& leaf) {
  std::string p = prefix;
  while (p.size() > 1 && p.back() == '/') p.pop_back();
  return p + "/" + leaf;
}

}  // namespace

mr::JobSpec neighbor_search_job(const SkyJobOptions& options) {
  mr::JobSpec spec = sky_job(options, "neighbor-search", options.outputPrefix);
  auto grid = std::make_shared<const geo::BlockGrid>(options.blocks);
  spec.reducer = [grid](ByteView key, const std::vector<ByteView>& values, mr::ReduceContext& ctx) {
    const auto members = block_members(*grid, key, values);
    geo::PairSearchStats stats;
    const auto pairs = geo::pairs_in_block(members, grid->config(), &stats);
    ctx.count(Counter::kDistanceEvaluations, stats.distanceEvaluations);
    if (pairs.empty()) return;
    // One write per block rather than per pair keeps the checksum path
    // seeing large buffers.
    Bytes batch(pairs.size() * kPairRecordBytes);
    for (std::size_t i = 0; i < pairs.size(); ++i) encode_pair(pairs[i], batch.data() + i * kPairRecordBytes);
    ctx.write(batch);
  };
  return spec;
}

StatsJobs neighbor_stats_jobs(const SkyJobOptions& options) {
  StatsJobs jobs;
  jobs.perBlock = sky_job(options, "neighbor-stats-blocks", join(options.outputPrefix, "blocks"));
  auto grid = std::make_shared<const geo::BlockGrid>(options.blocks);
  jobs.perBlock.reducer = [grid](ByteView key, const std::vector<ByteView>& values, mr::ReduceContext& ctx) {
    const auto members = block_members(*grid, key, values);
    geo::PairSearchStats stats;
    const auto pairs = geo::pairs_in_block(members, grid->config(), &stats);
    ctx.count(Counter::kDistanceEvaluations, stats.distanceEvaluations);
    const geo::BlockKey k = decode_block_key(key);
    ctx.write(as_bytes(format_histogram_line({k.zone, k.block, geo::histogram(pairs)})));
  };

  mr::JobSpec& c = jobs.combine;
  c.name = "neighbor-stats-combine";
  c.format = mr::InputFormat::kTextLines;
  c.numReducers = 1;
  c.outputPrefix = join(options.outputPrefix, "final");
  c.spill = options.spill;
  c.outputOptions = options.output;
  c.mapper = [](ByteView line, mr::MapContext& ctx) {
    if (line.empty()) return;
    const HistogramLine h =
        parse_histogram_line(as_chars(line), "histogram line " + std::to_string(ctx.record_index() + 1));
    Bytes value;
    value.reserve(8 * geo::kHistogramBins);
    for (auto n : h.histogram.counts) append_le(value, n);
    static constexpr std::uint8_t kTotalKey[1] = {'*'};
    ctx.emit(kTotalKey, value);
  };
  c.reducer = [](ByteView, const std::vector<ByteView>& values, mr::ReduceContext& ctx) {
    HistogramLine total;
    for (auto v : values)
      for (std::size_t b = 0; b < geo::kHistogramBins; ++b) total.histogram.counts[b] += get_le<std::uint64_t>(v.data() + 8 * b);
    ctx.write(as_bytes(format_histogram_line(total)));
  };
  // No histogram lines at all still yields an all-zero total.
  c.reduceCleanup = [](std::uint64_t groups, mr::ReduceContext& ctx) {
    if (groups == 0) ctx.write(as_bytes(format_histogram_line({})));
  };
  return jobs;
}

SearchRun run_neighbor_search(const SkyJobOptions& options, dfs::BlockStore& store,
                              const mr::EngineOptions& engine, metering::Meter& meter) {
  SearchRun run;
  run.job = mr::run_job(neighbor_search_job(options), store, engine, meter);
  for (const auto& f : run.job.outputs) run.pairs += f.length / kPairRecordBytes;
  return run;
}

StatsRun run_neighbor_stats(const SkyJobOptions& options, dfs::BlockStore& store,
                            const mr::EngineOptions& engine, metering::Meter& meter) {
  StatsJobs jobs = neighbor_stats_jobs(options);
  StatsRun run;
  run.perBlock = mr::run_job(jobs.perBlock, store, engine, meter);
  for (const auto& f : run.perBlock.outputs) jobs.combine.inputs.push_back(f.path);
  run.combine = mr::run_job(jobs.combine, store, engine, meter);
  const Bytes text = store.read_file(run.combine.outputs.at(0).path, 0, meter);
  const HistogramLine total = parse_histogram_line(as_chars(text), run.combine.outputs.at(0).path);
  if (total.zone != -1 || total.block != -1)
    throw Error(ErrorCode::kParseError, "final histogram line lacks the -1 -1 marker");
  run.histogram = total.histogram;
  return run;
}

std::vector<geo::PairRecord> read_pairs(const dfs::BlockStore& store, const std::string& prefix,
                                        metering::Meter& meter) {
  std::vector<geo::PairRecord> out;
  for (const auto& f : store.list(join(prefix, "part-"))) {
    const auto part = decode_pairs(store.read_file(f.path, 0, meter));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace skymr::apps
