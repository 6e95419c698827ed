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
#include <string>
#include <string_view>

#include "skymr/dfs/block_store.hpp"
#include "skymr/mr/spill.hpp"

namespace skymr::cli {

/// Effective configuration: built-in defaults, then the config file, then
/// command-line flags. Keys follow the Hadoop parameter names where one
/// exists.
struct Settings {
  std::filesystem::path store = "skymr-store";
  std::uint32_t nodes = 8;
  std::uint32_t replication = 3;
  std::uint64_t blockBytes = 64 * dfs::kMiB;
  std::uint32_t bytesPerChecksum = 4096;
  std::uint64_t sortMb = 125;
  double recordPercent = 0.2;
  double spillPercent = 0.8;
  std::uint32_t reducersMax = 2;  // reduce slots per node
  std::uint32_t mappersMax = 3;   // map slots per node
  std::uint64_t splitBytes = 0;   // 0: one split per block
  std::size_t workers = 1;
  dfs::Codec codec = dfs::Codec::kNone;
  dfs::WriteMode writeMode = dfs::WriteMode::kBuffered;
  double recordGrowth = 1.10;

  /// Throws Error(kInvalidConfig) for unknown keys or bad values.
  void apply(const std::string& key, const std::string& value);
  void validate() const;

  dfs::ClusterSpec cluster() const;
  mr::SpillConfig spill() const;
  std::uint64_t split_bytes() const { return splitBytes ? splitBytes : blockBytes; }
  std::uint32_t default_reducers() const { return nodes * reducersMax; }
  dfs::WriteOptions write_options() const { return {codec, writeMode, replication}; }

  std::map<std::string, std::string> to_map() const;
};

/// `key = value` lines; blank lines and `#` comments are skipped. Throws
/// Error(kParseError) naming the source and line.
std::map<std::string, std::string> parse_config(std::string_view text, const std::string& source);

/// Byte counts such as "4096", "64MiB", "1.5GB" (binary units throughout).
std::uint64_t parse_size(const std::string& text);

}  // namespace skymr::cli
