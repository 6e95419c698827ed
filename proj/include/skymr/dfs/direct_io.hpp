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
#include <optional>
#include <string_view>

#include "skymr/common/bytes.hpp"

namespace skymr::dfs {

enum class WriteMode : std::uint8_t { kBuffered, kUnbuffered };
std::string_view to_string(WriteMode mode);
std::optional<WriteMode> write_mode_from_string(std::string_view name);

inline constexpr std::size_t kDirectAlignment = 4096;
inline constexpr std::size_t kDirectStagingBytes = 1 << 20;

/// Writes through the page-cache bypassing path (O_DIRECT), staging data in a
/// pre-allocated aligned buffer and trimming the padded tail afterwards.
/// Returns false without side effects beyond a removed partial file when the
/// platform or filesystem refuses direct I/O; throws Error(kIoError) on other
/// failures.
bool write_unbuffered(const std::filesystem::path& path, ByteView data);

/// Ordinary cached write.
void write_buffered(const std::filesystem::path& path, ByteView data);

/// Writes with the requested mode; returns true when an unbuffered request
/// had to fall back to the cached path.
bool write_with_mode(const std::filesystem::path& path, ByteView data, WriteMode mode);

}  // namespace skymr::dfs
