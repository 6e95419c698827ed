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
#include <functional>
#include <string>
#include <vector>

#include "skymr/common/bytes.hpp"
#include "skymr/dfs/block_store.hpp"
#include "skymr/metering/meter.hpp"
#include "skymr/mr/spill.hpp"

namespace skymr::mr {

struct KeyValue {
  Bytes key;
  Bytes value;

  friend bool operator==(const KeyValue&, const KeyValue&) = default;
};

enum class InputFormat { kFixedRecords, kTextLines };

struct InputSplit {
  std::size_t index = 0;
  std::string path;
  std::uint64_t offset = 0;  // logical bytes
  std::uint64_t length = 0;
  bool wholeFile = false;    // compressed or text input: read through read_file
  std::vector<std::uint32_t> hosts;       // replicas of the first block touched
  std::vector<std::uint32_t> localHosts;  // nodes holding every block touched
};

/// Fixed-size records: contiguous record-aligned splits. Compressed files are
/// not splittable and come back as one split. Throws Error(kMalformedInput)
/// when the length is not a multiple of recordBytes and Error(kInvalidConfig)
/// for a split size that is not a positive multiple of it.
std::vector<InputSplit> plan_splits(const dfs::StoredFile& file, std::uint64_t splitBytes,
                                    std::uint64_t recordBytes);
/// Text input: one split per file.
InputSplit whole_file_split(const dfs::StoredFile& file);

class MapContext {
 public:
  virtual ~MapContext() = default;
  virtual void emit(ByteView key, ByteView value) = 0;
  /// Zero-based index of the current record within its split.
  virtual std::uint64_t record_index() const = 0;
  /// Work the mapper did beyond the engine's own accounting.
  virtual void count(metering::Counter counter, std::uint64_t n) = 0;
};

class ReduceContext {
 public:
  virtual ~ReduceContext() = default;
  virtual void write(ByteView bytes) = 0;
  virtual void count(metering::Counter counter, std::uint64_t n) = 0;
};

using Mapper = std::function<void(ByteView record, MapContext&)>;
using Reducer = std::function<void(ByteView key, const std::vector<ByteView>& values, ReduceContext&)>;
/// Runs once per reduce task after the last group, like Hadoop's cleanup().
using ReduceCleanup = std::function<void(std::uint64_t groups, ReduceContext&)>;
using Partitioner = std::function<std::uint32_t(ByteView key, std::uint32_t numReducers)>;
/// Three-way: negative, zero, positive.
using Comparator = std::function<int(ByteView a, ByteView b)>;

/// 8-byte keys are read as a big-endian (zone, block) pair and spread with a
/// multiplicative hash; other keys are folded with FNV-1a.
std::uint32_t default_partition(ByteView key, std::uint32_t numReducers);
int lexicographic_compare(ByteView a, ByteView b);

struct JobSpec {
  std::string name = "job";
  std::vector<std::string> inputs;
  InputFormat format = InputFormat::kFixedRecords;
  std::uint64_t recordBytes = 1;
  std::uint64_t splitBytes = 64 * dfs::kMiB;
  Mapper mapper;
  Reducer reducer;
  ReduceCleanup reduceCleanup;
  Partitioner partitioner = default_partition;
  Comparator comparator = lexicographic_compare;
  std::uint32_t numReducers = 1;
  std::string outputPrefix;
  SpillConfig spill;
  dfs::WriteOptions outputOptions;

  /// Throws Error(kInvalidConfig).
  void validate() const;
};

enum class TaskPhase { kMap, kShuffle, kReduce };
std::string_view to_string(TaskPhase phase);

struct TaskReport {
  std::string taskId;
  TaskPhase phase = TaskPhase::kMap;
  std::uint32_t node = 0;
  std::uint32_t spillCount = 0;
  bool merged = false;
  bool dataLocal = false;
  std::uint64_t inputRecords = 0;
  std::uint64_t outputRecords = 0;
  std::uint64_t payloadBytes = 0;  // key + value bytes, without framing
  std::uint64_t bytesSorted = 0;   // framed bytes spilled
  std::uint64_t bytesMerged = 0;   // framed bytes through the merge pass
  std::uint64_t outputBytes = 0;   // map: framed segment records; reduce: bytes written
  double wallSeconds = 0.0;
  metering::MeterSnapshot meter;
};

/// A finished map task's sorted output on its node's local disk.
struct SegmentRef {
  std::size_t mapIndex = 0;
  std::uint32_t node = 0;
  std::filesystem::path path;
};

struct JobReport {
  std::string name;
  std::vector<TaskReport> mapTasks;
  std::vector<TaskReport> reduceTasks;
  std::vector<dfs::StoredFile> outputs;
  metering::MeterSnapshot meter;
  double mapWallSeconds = 0.0;
  double reduceWallSeconds = 0.0;
  double wallSeconds = 0.0;
  std::uint64_t mapOutputBytes = 0;
  std::uint64_t reduceInputBytes = 0;
  std::uint64_t outputDigest = 0;  // FNV-1a over every part in order
};

}  // namespace skymr::mr
