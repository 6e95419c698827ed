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
#include <map>
#include <mutex>
#include <set>
#include <optional>
#include <string>
#include <vector>

#include "skymr/common/bytes.hpp"
#include "skymr/common/error.hpp"
#include "skymr/dfs/direct_io.hpp"
#include "skymr/dfs/lz_codec.hpp"
#include "skymr/metering/meter.hpp"

namespace skymr::dfs {

inline constexpr std::uint64_t kMiB = 1ULL << 20;

struct ClusterSpec {
  std::uint32_t nodeCount = 8;
  std::uint32_t replication = 3;
  std::uint64_t blockBytes = 64 * kMiB;
  std::uint32_t bytesPerChecksum = 4096;
  std::filesystem::path rootDir;

  /// Throws Error(kInvalidConfig).
  void validate() const;
};

/// Pipeline order for one block: the writer first, then a deterministic
/// rotation over the other nodes.
std::vector<std::uint32_t> place_replicas(std::uint64_t blockIndex, std::uint32_t writerNode,
                                          std::uint32_t nodeCount, std::uint32_t replication);

struct BlockInfo {
  std::string id;
  std::uint64_t offset = 0;  // within the stored (post-codec) byte stream
  std::uint64_t length = 0;
  std::vector<std::uint32_t> replicas;
};

struct StoredFile {
  std::string path;
  std::uint64_t length = 0;        // logical bytes as written by the caller
  std::uint64_t storedLength = 0;  // bytes after the codec
  Codec codec = Codec::kNone;
  WriteMode writeMode = WriteMode::kBuffered;
  bool unbufferedFallback = false;
  std::uint32_t replication = 1;
  std::uint32_t bytesPerChecksum = 4096;
  std::vector<BlockInfo> blocks;

  /// Nodes holding a replica of the block that contains stored offset `off`.
  const BlockInfo& block_at(std::uint64_t off) const;
};

struct WriteOptions {
  Codec codec = Codec::kNone;
  WriteMode writeMode = WriteMode::kBuffered;
  std::optional<std::uint32_t> replication;  // cluster default when empty
};

/// Raised when a stored chunk fails CRC verification.
class IntegrityError : public Error {
 public:
  IntegrityError(std::string blockId, std::uint64_t chunkIndex, std::uint32_t expected, std::uint32_t actual);

  const std::string& block_id() const noexcept { return blockId_; }
  std::uint64_t chunk_index() const noexcept { return chunkIndex_; }
  std::uint32_t expected() const noexcept { return expected_; }
  std::uint32_t actual() const noexcept { return actual_; }

 private:
  std::string blockId_;
  std::uint64_t chunkIndex_;
  std::uint32_t expected_;
  std::uint32_t actual_;
};

/// HDFS-style block store over logical nodes, each a directory under the
/// root:
///   <root>/store.conf                 cluster geometry
///   <root>/node<k>/<blockId>.blk      block payload
///   <root>/node<k>/<blockId>.csum     checksum sidecar
///   <root>/namespace/<hash>.manifest  one per stored file
/// Files are immutable once written. All reads and writes are metered in the
/// dfs_read / dfs_write phases of the caller's meter.
class BlockStore {
 public:
  /// Opens the store at spec.rootDir, creating it when absent. An existing
  /// store keeps its recorded node count, block size and chunk size; the
  /// cluster's default replication always applies.
  explicit BlockStore(ClusterSpec spec);

  BlockStore(const BlockStore&) = delete;
  BlockStore& operator=(const BlockStore&) = delete;

  const ClusterSpec& cluster() const noexcept { return spec_; }

  StoredFile write_file(const std::string& path, ByteView data, std::uint32_t writerNode,
                        const WriteOptions& options, metering::Meter& meter);
  Bytes read_file(const std::string& path, std::uint32_t readerNode, metering::Meter& meter) const;
  /// Byte range of an uncompressed file; only the overlapping chunks are read
  /// and verified.
  Bytes read_range(const std::string& path, std::uint64_t offset, std::uint64_t length,
                   std::uint32_t readerNode, metering::Meter& meter) const;

  std::optional<StoredFile> stat(const std::string& path) const;
  bool exists(const std::string& path) const { return stat(path).has_value(); }
  /// Files whose path starts with prefix, in path order.
  std::vector<StoredFile> list(const std::string& prefix) const;
  void remove(const std::string& path);

  std::filesystem::path node_dir(std::uint32_t node) const;
  std::filesystem::path block_path(std::uint32_t node, const std::string& blockId) const;
  std::filesystem::path sidecar_path(std::uint32_t node, const std::string& blockId) const;

 private:
  std::filesystem::path manifest_path(const std::string& path) const;
  void persist_manifest(const StoredFile& file) const;
  void load_manifests();
  StoredFile require(const std::string& path) const;
  Bytes read_block_range(const StoredFile& file, const BlockInfo& block, std::uint64_t from,
                         std::uint64_t to, std::uint32_t readerNode, metering::Meter& meter) const;

  ClusterSpec spec_;
  mutable std::mutex mu_;
  std::map<std::string, StoredFile> files_;
  std::set<std::string> pending_;
};

std::string serialize_manifest(const StoredFile& file);
/// Throws Error(kParseError).
StoredFile parse_manifest(std::string_view text);

}  // namespace skymr::dfs
