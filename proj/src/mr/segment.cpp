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

#include "skymr/mr/segment.hpp"

#include <cstring>

#include "skymr/common/error.hpp"

namespace skymr::mr {

SegmentWriter::SegmentWriter(const std::filesystem::path& path, std::uint32_t partitions)
    : path_(path), partitions_(partitions), offsets_(partitions + 1, 0) {
  if (partitions == 0) throw Error(ErrorCode::kInvalidConfig, "segment needs at least one partition");
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::kIoError, "cannot create segment " + path.string());
}

SegmentWriter::~SegmentWriter() = default;

void SegmentWriter::put(const void* data, std::size_t n) {
  out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  pos_ += n;
}

void SegmentWriter::add(std::uint32_t partition, ByteView key, ByteView value) {
  if (finished_) throw Error(ErrorCode::kWriteAfterClose, "segment already finished");
  if (partition >= partitions_ || partition < current_)
    throw Error(ErrorCode::kOutOfRange, "segment records must be partition-ordered");
  while (current_ < partition) offsets_[++current_] = pos_;
  std::uint8_t hdr[kRecordHeaderBytes];
  put_le(hdr, partition);
  put_le(hdr + 4, static_cast<std::uint32_t>(key.size()));
  put_le(hdr + 8, static_cast<std::uint32_t>(value.size()));
  put(hdr, sizeof hdr);
  put(key.data(), key.size());
  put(value.data(), value.size());
}

std::uint64_t SegmentWriter::finish() {
  if (finished_) throw Error(ErrorCode::kWriteAfterClose, "segment already finished");
  finished_ = true;
  while (current_ < partitions_) offsets_[++current_] = pos_;
  for (std::uint64_t off : offsets_) {
    std::uint8_t b[8];
    put_le(b, off);
    put(b, 8);
  }
  std::uint8_t b[4];
  put_le(b, partitions_);
  put(b, 4);
  put(kSegmentMagic, 4);
  out_.close();
  if (!out_) throw Error(ErrorCode::kIoError, "failed writing segment " + path_.string());
  return pos_;
}

namespace {

SegmentIndex parse_tail(ByteView tail, std::uint64_t fileBytes, std::uint32_t partitions) {
  SegmentIndex idx;
  idx.offsets.resize(partitions + 1);
  for (std::uint32_t i = 0; i <= partitions; ++i) idx.offsets[i] = get_le<std::uint64_t>(tail.data() + 8 * i);
  const std::uint64_t footer = 8ULL * (partitions + 1) + 8;
  for (std::uint32_t i = 0; i < partitions; ++i)
    if (idx.offsets[i] > idx.offsets[i + 1]) throw Error(ErrorCode::kParseError, "segment offsets not monotone");
  if (idx.offsets.front() != 0 || idx.offsets.back() + footer != fileBytes)
    throw Error(ErrorCode::kParseError, "segment footer inconsistent with file size");
  return idx;
}

std::uint32_t parse_trailer(const std::uint8_t* trailer) {
  if (std::memcmp(trailer + 4, kSegmentMagic, 4) != 0) throw Error(ErrorCode::kParseError, "bad segment magic");
  const auto partitions = get_le<std::uint32_t>(trailer);
  if (partitions == 0) throw Error(ErrorCode::kParseError, "segment with zero partitions");
  return partitions;
}

}  // namespace

SegmentIndex parse_segment_index(ByteView file) {
  if (file.size() < 8) throw Error(ErrorCode::kParseError, "segment too short");
  const std::uint32_t partitions = parse_trailer(file.data() + file.size() - 8);
  const std::uint64_t footer = 8ULL * (partitions + 1) + 8;
  if (footer > file.size()) throw Error(ErrorCode::kParseError, "segment footer truncated");
  return parse_tail(file.subspan(file.size() - footer), file.size(), partitions);
}

SegmentIndex read_segment_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "segment " + path.string() + " not found");
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::uint64_t>(in.tellg());
  if (size < 8) throw Error(ErrorCode::kParseError, "segment too short");
  std::uint8_t trailer[8];
  in.seekg(static_cast<std::streamoff>(size - 8));
  in.read(reinterpret_cast<char*>(trailer), 8);
  const std::uint32_t partitions = parse_trailer(trailer);
  const std::uint64_t footer = 8ULL * (partitions + 1) + 8;
  if (footer > size) throw Error(ErrorCode::kParseError, "segment footer truncated");
  Bytes tail(footer);
  in.seekg(static_cast<std::streamoff>(size - footer));
  in.read(reinterpret_cast<char*>(tail.data()), static_cast<std::streamsize>(footer));
  if (!in) throw Error(ErrorCode::kIoError, "failed reading segment footer " + path.string());
  return parse_tail(tail, size, partitions);
}

Bytes read_partition(const std::filesystem::path& path, const SegmentIndex& index, std::uint32_t partition) {
  if (partition >= index.partitions()) throw Error(ErrorCode::kOutOfRange, "partition out of range");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "segment " + path.string() + " not found");
  Bytes out(index.partition_bytes(partition));
  in.seekg(static_cast<std::streamoff>(index.offsets[partition]));
  in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!in && !out.empty()) throw Error(ErrorCode::kIoError, "failed reading segment " + path.string());
  return out;
}

bool RecordCursor::next(SegmentRecord& out) {
  if (pos_ == data_.size()) return false;
  if (data_.size() - pos_ < kRecordHeaderBytes) throw Error(ErrorCode::kParseError, "truncated segment record");
  const std::uint8_t* p = data_.data() + pos_;
  out.partition = get_le<std::uint32_t>(p);
  const auto kl = get_le<std::uint32_t>(p + 4);
  const auto vl = get_le<std::uint32_t>(p + 8);
  if (data_.size() - pos_ - kRecordHeaderBytes < static_cast<std::uint64_t>(kl) + vl)
    throw Error(ErrorCode::kParseError, "truncated segment record");
  out.key = data_.subspan(pos_ + kRecordHeaderBytes, kl);
  out.value = data_.subspan(pos_ + kRecordHeaderBytes + kl, vl);
  pos_ += kRecordHeaderBytes + kl + vl;
  return true;
}

}  // namespace skymr::mr
