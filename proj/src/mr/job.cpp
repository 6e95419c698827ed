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

#include "skymr/mr/job.hpp"

#include <algorithm>
#include <cstring>

#include "skymr/common/error.hpp"

namespace skymr::mr {
namespace {

// Replicas shared by every block overlapping [from, to) of the stored stream.
std::vector<std::uint32_t> common_hosts(const dfs::StoredFile& file, std::uint64_t from, std::uint64_t to) {
  std::vector<std::uint32_t> common;
  bool first = true;
  for (const auto& b : file.blocks) {
    if (b.offset + b.length <= from || b.offset >= to) continue;
    std::vector<std::uint32_t> r = b.replicas;
    std::sort(r.begin(), r.end());
    if (first) {
      common = std::move(r);
      first = false;
    } else {
      std::vector<std::uint32_t> both;
      std::set_intersection(common.begin(), common.end(), r.begin(), r.end(), std::back_inserter(both));
      common = std::move(both);
    }
  }
  return common;
}

}  // namespace

std::vector<InputSplit> plan_splits(const dfs::StoredFile& file, std::uint64_t splitBytes,
                                    std::uint64_t recordBytes) {
  if (recordBytes == 0 || splitBytes == 0 || splitBytes % recordBytes != 0)
    throw Error(ErrorCode::kInvalidConfig, "split size must be a positive multiple of the record size");
  if (file.length % recordBytes != 0)
    throw Error(ErrorCode::kMalformedInput, file.path + ": length " + std::to_string(file.length) +
                                                " is not a multiple of the record size " +
                                                std::to_string(recordBytes));
  std::vector<InputSplit> splits;
  if (file.length == 0) return splits;
  if (file.codec != dfs::Codec::kNone) {
    splits.push_back(whole_file_split(file));
    return splits;
  }
  for (std::uint64_t off = 0; off < file.length; off += splitBytes) {
    InputSplit s;
    s.index = splits.size();
    s.path = file.path;
    s.offset = off;
    s.length = std::min(splitBytes, file.length - off);
    s.hosts = file.block_at(off).replicas;
    s.localHosts = common_hosts(file, off, off + s.length);
    splits.push_back(std::move(s));
  }
  return splits;
}

InputSplit whole_file_split(const dfs::StoredFile& file) {
  InputSplit s;
  s.path = file.path;
  s.length = file.length;
  s.wholeFile = true;
  if (!file.blocks.empty()) {
    s.hosts = file.blocks.front().replicas;
    s.localHosts = common_hosts(file, 0, file.storedLength);
  }
  return s;
}

std::uint32_t default_partition(ByteView key, std::uint32_t numReducers) {
  if (numReducers == 0) throw Error(ErrorCode::kInvalidConfig, "numReducers must be positive");
  if (key.size() == 8) {
    const std::uint64_t zone = get_be<std::uint32_t>(key.data());
    const std::uint64_t block = get_be<std::uint32_t>(key.data() + 4);
    return static_cast<std::uint32_t>((zone * 2654435761ULL + block) % numReducers);
  }
  return static_cast<std::uint32_t>(fnv1a64(key) % numReducers);
}

int lexicographic_compare(ByteView a, ByteView b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n > 0) {
    const int c = std::memcmp(a.data(), b.data(), n);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}

void JobSpec::validate() const {
  if (!mapper || !reducer || !partitioner || !comparator)
    throw Error(ErrorCode::kInvalidConfig, name + ": mapper, reducer, partitioner and comparator are required");
  if (numReducers == 0) throw Error(ErrorCode::kInvalidConfig, name + ": numReducers must be positive");
  if (inputs.empty()) throw Error(ErrorCode::kInvalidConfig, name + ": no input paths");
  if (outputPrefix.empty() || outputPrefix.front() != '/')
    throw Error(ErrorCode::kInvalidConfig, name + ": output prefix must be an absolute store path");
  if (format == InputFormat::kFixedRecords && (recordBytes == 0 || splitBytes == 0 || splitBytes % recordBytes != 0))
    throw Error(ErrorCode::kInvalidConfig, name + ": split size must be a positive multiple of the record size");
  spill.validate();
}

std::string_view to_string(TaskPhase phase) {
  switch (phase) {
    case TaskPhase::kMap: return "map";
    case TaskPhase::kShuffle: return "shuffle";
    case TaskPhase::kReduce: return "reduce";
  }
  return "?";
}

}  // namespace skymr::mr
