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

#include "skymr/dfs/checksum_writer.hpp"

#include <algorithm>
#include <cstring>

#include "skymr/common/error.hpp"

namespace skymr::dfs {

ChunkedChecksumWriter::ChunkedChecksumWriter(std::uint32_t bytesPerChecksum, Sink downstream)
    : bytesPerChecksum_(bytesPerChecksum), downstream_(std::move(downstream)) {
  if (bytesPerChecksum_ == 0) throw Error(ErrorCode::kInvalidConfig, "bytesPerChecksum must be positive");
}

void ChunkedChecksumWriter::write(ByteView data) {
  if (closed_) throw Error(ErrorCode::kWriteAfterClose, "write to a closed checksum writer");
  if (downstream_ && !data.empty()) downstream_(data);
  bytesWritten_ += data.size();
  while (!data.empty()) {
    const std::size_t take = std::min<std::size_t>(data.size(), bytesPerChecksum_ - inChunk_);
    crc_.update(data.first(take));
    ++updateCalls_;
    inChunk_ += static_cast<std::uint32_t>(take);
    data = data.subspan(take);
    if (inChunk_ == bytesPerChecksum_) {
      checksums_.push_back(crc_.value());
      crc_.reset();
      inChunk_ = 0;
    }
  }
}

void ChunkedChecksumWriter::close() {
  if (closed_) return;
  if (inChunk_ > 0) {
    checksums_.push_back(crc_.value());
    crc_.reset();
    inChunk_ = 0;
  }
  closed_ = true;
}

Bytes ChunkedChecksumWriter::sidecar() const { return encode_sidecar(bytesPerChecksum_, checksums_); }

Bytes encode_sidecar(std::uint32_t bytesPerChecksum, const std::vector<std::uint32_t>& checksums) {
  Bytes out(kSidecarMagic, kSidecarMagic + 4);
  out.reserve(kSidecarHeaderBytes + 4 * checksums.size());
  append_le(out, bytesPerChecksum);
  for (auto c : checksums) append_le(out, c);
  return out;
}

Sidecar decode_sidecar(ByteView bytes) {
  if (bytes.size() < kSidecarHeaderBytes || std::memcmp(bytes.data(), kSidecarMagic, 4) != 0 ||
      (bytes.size() - kSidecarHeaderBytes) % 4 != 0)
    throw Error(ErrorCode::kIntegrity, "malformed checksum sidecar");
  Sidecar s;
  s.bytesPerChecksum = get_le<std::uint32_t>(bytes.data() + 4);
  if (s.bytesPerChecksum == 0) throw Error(ErrorCode::kIntegrity, "sidecar has zero chunk size");
  for (std::size_t off = kSidecarHeaderBytes; off < bytes.size(); off += 4)
    s.checksums.push_back(get_le<std::uint32_t>(bytes.data() + off));
  return s;
}

}  // namespace skymr::dfs
