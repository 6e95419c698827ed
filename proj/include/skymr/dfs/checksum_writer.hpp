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
#include <vector>

#include "skymr/common/bytes.hpp"
#include "skymr/dfs/crc32.hpp"

namespace skymr::dfs {

inline constexpr char kSidecarMagic[4] = {'C', 'S', 'U', 'M'};
inline constexpr std::size_t kSidecarHeaderBytes = 8;

/// Streams bytes through to an optional downstream sink while computing one
/// CRC-32 per bytesPerChecksum chunk. The checksum sequence depends only on
/// the content and chunk size, never on how callers slice their writes.
class ChunkedChecksumWriter {
 public:
  using Sink = std::function<void(ByteView)>;

  explicit ChunkedChecksumWriter(std::uint32_t bytesPerChecksum, Sink downstream = {});

  /// Throws Error(kWriteAfterClose) once closed.
  void write(ByteView data);
  /// Finalizes the partial tail chunk, if any. Idempotent.
  void close();

  bool closed() const noexcept { return closed_; }
  std::uint32_t bytes_per_checksum() const noexcept { return bytesPerChecksum_; }
  std::uint64_t bytes_written() const noexcept { return bytesWritten_; }
  const std::vector<std::uint32_t>& checksums() const noexcept { return checksums_; }
  std::uint64_t finalizations() const noexcept { return checksums_.size(); }
  /// Number of CRC update invocations; this is what small writes inflate.
  std::uint64_t update_calls() const noexcept { return updateCalls_; }

  /// Serialized sidecar: magic, u32 bytesPerChecksum, one u32 CRC per chunk.
  Bytes sidecar() const;

 private:
  std::uint32_t bytesPerChecksum_;
  Sink downstream_;
  Crc32 crc_;
  std::uint32_t inChunk_ = 0;
  std::uint64_t bytesWritten_ = 0;
  std::uint64_t updateCalls_ = 0;
  std::vector<std::uint32_t> checksums_;
  bool closed_ = false;
};

struct Sidecar {
  std::uint32_t bytesPerChecksum = 0;
  std::vector<std::uint32_t> checksums;
};

Bytes encode_sidecar(std::uint32_t bytesPerChecksum, const std::vector<std::uint32_t>& checksums);
/// Throws Error(kIntegrity) on a malformed sidecar.
Sidecar decode_sidecar(ByteView bytes);

/// Bytes of CRC payload (excluding the header) for a block of blockLen bytes.
constexpr std::uint64_t sidecar_crc_bytes(std::uint64_t blockLen, std::uint32_t bytesPerChecksum) {
  return 4 * ((blockLen + bytesPerChecksum - 1) / bytesPerChecksum);
}

}  // namespace skymr::dfs
