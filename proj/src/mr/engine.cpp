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

#include "skymr/mr/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <limits>
#include <queue>

#include "skymr/common/error.hpp"
#include "skymr/common/worker_pool.hpp"
#include "skymr/mr/segment.hpp"

namespace skymr::mr {

using metering::Counter;
using metering::Meter;
using metering::Phase;
namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string task_name(const char* kind, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%05zu", kind, index);
  return buf;
}

// Comparator wrapper that tallies every call.
struct CountingCompare {
  const Comparator& cmp;
  std::uint64_t calls = 0;
  int operator()(ByteView a, ByteView b) {
    ++calls;
    return cmp(a, b);
  }
};

// One sorted run per input, merged record by record. Ties go to the lower
// run index, which keeps duplicate keys in input order.
template <typename Emit>
void merge_runs(std::vector<RecordCursor>& runs, CountingCompare& cmp, Emit&& emit) {
  struct Head {
    SegmentRecord rec;
    std::size_t run;
  };
  std::vector<Head> heads;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    SegmentRecord r;
    if (runs[i].next(r)) heads.push_back({r, i});
  }
  auto after = [&cmp](const Head& a, const Head& b) {
    if (a.rec.partition != b.rec.partition) return a.rec.partition > b.rec.partition;
    const int c = cmp(a.rec.key, b.rec.key);
    return c != 0 ? c > 0 : a.run > b.run;
  };
  std::priority_queue<Head, std::vector<Head>, decltype(after)> heap(after, std::move(heads));
  while (!heap.empty()) {
    Head h = heap.top();
    heap.pop();
    emit(h.rec);
    if (runs[h.run].next(h.rec)) heap.push(h);
  }
}

// Map-side buffer pair: raw key/value bytes plus four integers per record.
class SortBuffer final : public MapContext {
 public:
  SortBuffer(const JobSpec& spec, const fs::path& workDir, std::size_t mapIndex, Meter& meter,
             TaskReport& report)
      : spec_(spec),
        workDir_(workDir),
        mapIndex_(mapIndex),
        meter_(meter),
        report_(report),
        dataCap_(spec.spill.data_capacity()),
        metaCap_(spec.spill.meta_capacity()),
        dataTrigger_(spec.spill.spillPercent * static_cast<double>(dataCap_)),
        metaTrigger_(spec.spill.spillPercent * static_cast<double>(metaCap_)) {
    if (dataCap_ > std::numeric_limits<std::uint32_t>::max())
      throw Error(ErrorCode::kInvalidConfig, "sort buffer data region exceeds 32-bit offsets");
  }

  void emit(ByteView key, ByteView value) override {
    if (key.empty()) throw Error(ErrorCode::kMalformedInput, "map output key must not be empty");
    const std::uint64_t size = key.size() + value.size();
    if (size > dataCap_)
      throw Error(ErrorCode::kRecordTooLarge, "map output record of " + std::to_string(size) +
                                                  " bytes exceeds the sort buffer (" +
                                                  std::to_string(dataCap_) + " bytes)");
    if (!meta_.empty() && (data_.size() + size > dataCap_ || meta_.size() + 1 > metaCap_)) spill();

    const std::uint32_t partition = spec_.partitioner(key, spec_.numReducers);
    if (partition >= spec_.numReducers)
      throw Error(ErrorCode::kOutOfRange, "partitioner returned " + std::to_string(partition));
    const auto keyStart = static_cast<std::uint32_t>(data_.size());
    data_.insert(data_.end(), key.begin(), key.end());
    const auto valueStart = static_cast<std::uint32_t>(data_.size());
    data_.insert(data_.end(), value.begin(), value.end());
    meta_.push_back({partition, keyStart, valueStart, static_cast<std::uint32_t>(data_.size())});
    ++report_.outputRecords;
    report_.payloadBytes += size;

    if (static_cast<double>(data_.size()) >= dataTrigger_ || static_cast<double>(meta_.size()) >= metaTrigger_)
      spill();
  }

  void count(Counter counter, std::uint64_t n) override { meter_.add(Phase::kMap, counter, n); }
  std::uint64_t record_index() const override { return report_.inputRecords; }

  /// Final flush, then the merge pass when more than one spill exists.
  fs::path finish() {
    if (!meta_.empty() || spills_.empty()) spill();
    const fs::path out = workDir_ / (task_name("map", mapIndex_) + ".seg");
    if (spills_.size() == 1) {
      fs::rename(spills_.front(), out);
      return out;
    }
    merge_spills(out);
    return out;
  }

 private:
  struct MetaEntry {
    std::uint32_t partition;
    std::uint32_t keyStart;
    std::uint32_t valueStart;
    std::uint32_t recordEnd;
  };

  ByteView key_of(const MetaEntry& m) const { return {data_.data() + m.keyStart, m.valueStart - m.keyStart}; }
  ByteView value_of(const MetaEntry& m) const {
    return {data_.data() + m.valueStart, m.recordEnd - m.valueStart};
  }

  void spill() {
    CountingCompare cmp{spec_.comparator};
    std::stable_sort(meta_.begin(), meta_.end(), [&](const MetaEntry& a, const MetaEntry& b) {
      if (a.partition != b.partition) return a.partition < b.partition;
      return cmp(key_of(a), key_of(b)) < 0;
    });
    const fs::path path = workDir_ / (task_name("map", mapIndex_) + ".spill" + std::to_string(spills_.size()));
    SegmentWriter w(path, spec_.numReducers);
    for (const auto& m : meta_) w.add(m.partition, key_of(m), value_of(m));
    const std::uint64_t fileBytes = w.finish();
    meter_.add(Phase::kMap, Counter::kKeyComparisons, cmp.calls);
    meter_.add(Phase::kMap, Counter::kDiskWrite, fileBytes);
    report_.bytesSorted += w.record_bytes();
    ++report_.spillCount;
    spills_.push_back(path);
    data_.clear();
    meta_.clear();
  }

  void merge_spills(const fs::path& out) {
    std::vector<Bytes> images;
    std::vector<RecordCursor> runs;
    images.reserve(spills_.size());
    for (const auto& p : spills_) {
      images.push_back(read_all(p));
      meter_.add(Phase::kMap, Counter::kDiskRead, images.back().size());
      const SegmentIndex idx = parse_segment_index(images.back());
      runs.emplace_back(ByteView(images.back()).first(idx.record_bytes()));
    }
    CountingCompare cmp{spec_.comparator};
    SegmentWriter w(out, spec_.numReducers);
    merge_runs(runs, cmp, [&](const SegmentRecord& r) { w.add(r.partition, r.key, r.value); });
    const std::uint64_t fileBytes = w.finish();
    meter_.add(Phase::kMap, Counter::kKeyComparisons, cmp.calls);
    meter_.add(Phase::kMap, Counter::kDiskWrite, fileBytes);
    report_.merged = true;
    report_.bytesMerged = w.record_bytes();
    for (const auto& p : spills_) fs::remove(p);
  }

  const JobSpec& spec_;
  fs::path workDir_;
  std::size_t mapIndex_;
  Meter& meter_;
  TaskReport& report_;
  std::uint64_t dataCap_;
  std::uint64_t metaCap_;
  double dataTrigger_;
  double metaTrigger_;
  Bytes data_;
  std::vector<MetaEntry> meta_;
  std::vector<fs::path> spills_;
};

class OutputCollector final : public ReduceContext {
 public:
  explicit OutputCollector(Meter& meter) : meter_(meter) {}
  void write(ByteView bytes) override {
    out.insert(out.end(), bytes.begin(), bytes.end());
    ++records;
  }
  void count(Counter counter, std::uint64_t n) override { meter_.add(Phase::kReduce, counter, n); }

  Bytes out;
  std::uint64_t records = 0;

 private:
  Meter& meter_;
};

Error with_task(const std::string& task, const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return Error(err->code(), task + ": " + err->what());
  return Error(ErrorCode::kTaskFailed, task + ": " + e.what());
}

}  // namespace

MapTaskResult run_map_task(const InputSplit& split, std::uint32_t node, const JobSpec& spec,
                           const dfs::BlockStore& store, const fs::path& workDir, Meter& meter) {
  MapTaskResult result;
  TaskReport& report = result.report;
  report.taskId = task_name("map", split.index);
  report.phase = TaskPhase::kMap;
  report.node = node;
  report.dataLocal = std::find(split.localHosts.begin(), split.localHosts.end(), node) != split.localHosts.end();
  const auto t0 = std::chrono::steady_clock::now();

  const Bytes input = split.wholeFile ? store.read_file(split.path, node, meter)
                                      : store.read_range(split.path, split.offset, split.length, node, meter);
  fs::create_directories(workDir);
  {
    metering::ScopedPhaseTimer timer(meter, Phase::kMap);
    SortBuffer buffer(spec, workDir, split.index, meter, report);
    if (spec.format == InputFormat::kFixedRecords) {
      if (input.size() % spec.recordBytes != 0)
        throw Error(ErrorCode::kMalformedInput, split.path + ": length is not a multiple of the record size");
      for (std::size_t off = 0; off < input.size(); off += spec.recordBytes) {
        spec.mapper(ByteView(input).subspan(off, spec.recordBytes), buffer);
        ++report.inputRecords;
      }
    } else {
      std::size_t start = 0;
      while (start < input.size()) {
        const auto* nl = static_cast<const std::uint8_t*>(
            std::memchr(input.data() + start, '\n', input.size() - start));
        const std::size_t end = nl ? static_cast<std::size_t>(nl - input.data()) : input.size();
        spec.mapper(ByteView(input).subspan(start, end - start), buffer);
        ++report.inputRecords;
        start = end + 1;
      }
    }
    result.segment.path = buffer.finish();
  }
  result.segment.mapIndex = split.index;
  result.segment.node = node;
  report.outputBytes = read_segment_index(result.segment.path).record_bytes();
  report.wallSeconds = seconds_since(t0);
  report.meter = meter.snapshot();
  return result;
}

ShuffleResult shuffle_fetch(std::uint32_t reducerIndex, std::uint32_t reducerNode,
                            const std::vector<SegmentRef>& segments, const JobSpec& spec, Meter& meter) {
  metering::ScopedPhaseTimer timer(meter, Phase::kShuffle);
  ShuffleResult result;
  std::vector<Bytes> regions;
  regions.reserve(segments.size());
  for (const auto& seg : segments) {
    if (!fs::exists(seg.path))
      throw Error(ErrorCode::kFetchError, "segment of " + task_name("map", seg.mapIndex) + " missing at " +
                                              seg.path.string());
    const SegmentIndex idx = read_segment_index(seg.path);
    if (reducerIndex >= idx.partitions())
      throw Error(ErrorCode::kFetchError, "segment of " + task_name("map", seg.mapIndex) + " has only " +
                                              std::to_string(idx.partitions()) + " partitions");
    regions.push_back(read_partition(seg.path, idx, reducerIndex));
    const std::uint64_t n = regions.back().size();
    meter.add(Phase::kShuffle, Counter::kDiskRead, n);
    meter.add(Phase::kShuffle, seg.node == reducerNode ? Counter::kNetLocal : Counter::kNetRemote, n);
    result.fetchedBytes += n;
  }
  std::vector<RecordCursor> runs;
  runs.reserve(regions.size());
  for (const auto& r : regions) runs.emplace_back(r);
  CountingCompare cmp{spec.comparator};
  merge_runs(runs, cmp, [&](const SegmentRecord& r) {
    if (r.partition != reducerIndex) throw Error(ErrorCode::kParseError, "record filed under the wrong partition");
    result.records.push_back({Bytes(r.key.begin(), r.key.end()), Bytes(r.value.begin(), r.value.end())});
  });
  meter.add(Phase::kShuffle, Counter::kKeyComparisons, cmp.calls);
  return result;
}

std::string part_path(const std::string& outputPrefix, std::uint32_t reducerIndex) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "/part-%05u", reducerIndex);
  std::string prefix = outputPrefix;
  while (prefix.size() > 1 && prefix.back() == '/') prefix.pop_back();
  return prefix + buf;
}

ReduceTaskResult run_reduce_task(std::uint32_t reducerIndex, std::uint32_t node,
                                 const std::vector<SegmentRef>& segments, const JobSpec& spec,
                                 dfs::BlockStore& store, Meter& meter) {
  ReduceTaskResult result;
  TaskReport& report = result.report;
  report.taskId = task_name("reduce", reducerIndex);
  report.phase = TaskPhase::kReduce;
  report.node = node;
  const auto t0 = std::chrono::steady_clock::now();

  ShuffleResult shuffled = shuffle_fetch(reducerIndex, node, segments, spec, meter);
  report.inputRecords = shuffled.records.size();
  report.bytesMerged = shuffled.fetchedBytes;

  OutputCollector out(meter);
  {
    metering::ScopedPhaseTimer timer(meter, Phase::kReduce);
    CountingCompare cmp{spec.comparator};
    const auto& recs = shuffled.records;
    std::vector<ByteView> values;
    std::uint64_t groups = 0;
    for (std::size_t i = 0; i < recs.size();) {
      std::size_t j = i + 1;
      while (j < recs.size() && cmp(recs[i].key, recs[j].key) == 0) ++j;
      values.clear();
      for (std::size_t k = i; k < j; ++k) values.emplace_back(recs[k].value);
      try {
        spec.reducer(recs[i].key, values, out);
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        throw Error(ErrorCode::kTaskFailed, std::string("reducer threw: ") + e.what());
      }
      ++groups;
      i = j;
    }
    if (spec.reduceCleanup) spec.reduceCleanup(groups, out);
    meter.add(Phase::kReduce, Counter::kKeyComparisons, cmp.calls);
  }
  report.outputRecords = out.records;
  report.outputBytes = out.out.size();
  result.digest = fnv1a64(out.out);
  result.output = store.write_file(part_path(spec.outputPrefix, reducerIndex), out.out, node, spec.outputOptions, meter);
  report.wallSeconds = seconds_since(t0);
  report.meter = meter.snapshot();
  return result;
}

std::vector<std::uint32_t> schedule_maps(const std::vector<InputSplit>& splits, std::uint32_t nodeCount) {
  std::vector<std::uint32_t> load(nodeCount, 0);
  std::vector<std::uint32_t> placement;
  placement.reserve(splits.size());
  for (const auto& s : splits) {
    std::vector<std::uint32_t> candidates = !s.localHosts.empty() ? s.localHosts : s.hosts;
    std::erase_if(candidates, [&](std::uint32_t n) { return n >= nodeCount; });
    if (candidates.empty())
      for (std::uint32_t n = 0; n < nodeCount; ++n) candidates.push_back(n);
    std::uint32_t best = candidates.front();
    for (std::uint32_t n : candidates)
      if (load[n] < load[best] || (load[n] == load[best] && n < best)) best = n;
    ++load[best];
    placement.push_back(best);
  }
  return placement;
}

JobReport run_job(const JobSpec& spec, dfs::BlockStore& store, const EngineOptions& options, Meter& meter) {
  spec.validate();
  const std::uint32_t nodes = store.cluster().nodeCount;
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<InputSplit> splits;
  for (const auto& path : spec.inputs) {
    const auto file = store.stat(path);
    if (!file) throw Error(ErrorCode::kNotFound, spec.name + ": input " + path + " not found");
    if (spec.format == InputFormat::kTextLines) {
      splits.push_back(whole_file_split(*file));
    } else {
      for (auto& s : plan_splits(*file, spec.splitBytes, spec.recordBytes)) splits.push_back(std::move(s));
    }
  }
  for (std::size_t i = 0; i < splits.size(); ++i) splits[i].index = i;
  const std::vector<std::uint32_t> placement = schedule_maps(splits, nodes);

  const std::string tag = spec.name + "-" + hex64(fnv1a64(as_bytes(spec.outputPrefix)));
  std::vector<fs::path> workDirs;
  for (std::uint32_t n = 0; n < nodes; ++n) {
    workDirs.push_back(store.node_dir(n) / "local" / tag);
    fs::remove_all(workDirs.back());
  }
  auto cleanup = [&] {
    if (options.keepIntermediate) return;
    std::error_code ec;
    for (const auto& d : workDirs) fs::remove_all(d, ec);
  };

  JobReport report;
  report.name = spec.name;
  try {
    std::vector<MapTaskResult> maps(splits.size());
    parallel_for(splits.size(), options.workers, [&](std::size_t i) {
      Meter taskMeter;
      try {
        maps[i] = run_map_task(splits[i], placement[i], spec, store, workDirs[placement[i]], taskMeter);
      } catch (const std::exception& e) {
        throw with_task(task_name("map", i), e);
      }
    });
    report.mapWallSeconds = seconds_since(t0);

    std::vector<SegmentRef> segments;
    for (auto& m : maps) {
      segments.push_back(m.segment);
      report.mapOutputBytes += m.report.outputBytes;
      report.meter += m.report.meter;
      report.mapTasks.push_back(std::move(m.report));
    }

    const auto t1 = std::chrono::steady_clock::now();
    std::vector<ReduceTaskResult> reduces(spec.numReducers);
    parallel_for(spec.numReducers, options.workers, [&](std::size_t r) {
      Meter taskMeter;
      const auto idx = static_cast<std::uint32_t>(r);
      try {
        reduces[r] = run_reduce_task(idx, idx % nodes, segments, spec, store, taskMeter);
      } catch (const std::exception& e) {
        throw with_task(task_name("reduce", r), e);
      }
    });
    report.reduceWallSeconds = seconds_since(t1);

    Bytes digests;
    for (auto& r : reduces) {
      report.reduceInputBytes += r.report.bytesMerged;
      report.meter += r.report.meter;
      append_le(digests, r.digest);
      report.outputs.push_back(std::move(r.output));
      report.reduceTasks.push_back(std::move(r.report));
    }
    report.outputDigest = fnv1a64(digests);
  } catch (...) {
    cleanup();
    throw;
  }
  cleanup();
  report.wallSeconds = seconds_since(t0);
  meter.merge(report.meter);
  return report;
}

}  // namespace skymr::mr
