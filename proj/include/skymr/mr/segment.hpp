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
#include <fstream>
#include <string>
#include <vector>

#include "skymr/common/bytes.hpp"

namespace skymr::mr {

// Map output segment file:
//   records  [partition u32][keyLen u32][valLen u32][key][value]   (LE)
//   footer   [offset u64] x (partitions + 1) [partitions u32] "SEGF"
// Records are sorted by (partition, key); offset p is the first byte of
// partition p and the last offset is the end of the record area.

inline constexpr std::uint64_t kRecordHeaderBytes = 12;
inline constexpr char kSegmentMagic[4] = {'S', 'E', 'G', 'F'};

struct SegmentRecord {
  std::uint32_t partition = 0;
  ByteView key;
  ByteView value;

  std::uint64_t framed_bytes() const { return kRecordHeaderBytes + key.size() + value.size(); }
};

/// Streams records (partition-ordered) to a file and writes the footer.
class SegmentWriter {
 public:
  SegmentWriter(const std::filesystem::path& path, std::uint32_t partitions);
  ~SegmentWriter();
  SegmentWriter(const SegmentWriter&) = delete;
  SegmentWriter& operator=(const SegmentWriter&) = delete;

  void add(std::uint32_t partition, ByteView key, ByteView value);
  /// Returns total file bytes, footer included.
  std::uint64_t finish();

  std::uint64_t record_bytes() const noexcept { return pos_; }

 private:
  void put(const void* data, std::size_t n);

  std::filesystem::path path_;
  std::ofstream out_;
  std::uint32_t partitions_;
  std::uint32_t current_ = 0;
  std::uint64_t pos_ = 0;
  std::vector<std::uint64_t> offsets_;
  bool finished_ = false;
};

struct SegmentIndex {
  std::vector<std::uint64_t> offsets;  // partitions + 1 entries

  std::uint32_t partitions() const { return static_cast<std::uint32_t>(offsets.size() - 1); }
  std::uint64_t partition_bytes(std::uint32_t p) const { return offsets[p + 1] - offsets[p]; }
  std::uint64_t record_bytes() const { return offsets.back(); }
};

/// Footer of a whole segment image. Throws Error(kParseError).
SegmentIndex parse_segment_index(ByteView file);
/// Footer read straight from disk.
SegmentIndex read_segment_index(const std::filesystem::path& path);
/// Raw record bytes of one partition.
Bytes read_partition(const std::filesystem::path& path, const SegmentIndex& index, std::uint32_t partition);

/// Walks framed records in a record area.
class RecordCursor {
 public:
  explicit RecordCursor(ByteView records) : data_(records) {}
  /// Throws Error(kParseError) on a truncated record.
  bool next(SegmentRecord& out);

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace skymr::mr
