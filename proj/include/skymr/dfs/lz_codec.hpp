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

#include <optional>
#include <string_view>

#include "skymr/common/bytes.hpp"

namespace skymr::dfs {

enum class Codec : std::uint8_t { kNone, kLz };
std::string_view to_string(Codec codec);
std::optional<Codec> codec_from_string(std::string_view name);

// Framed LZ77 stream:
//   "SKLZ"
//   repeated { u32 rawLen | u32 storedLen | u8 kind (0 stored, 1 lz) | payload }
//   terminator block with rawLen = storedLen = 0
// Each block covers at most kLzBlockBytes of input and is compressed
// independently with a 64 KiB window. The lz payload is a sequence of
//   token (hi nibble literal count, lo nibble match length - 4, 15 = extended)
//   [extra literal count bytes] literals [u16 offset] [extra match bytes]
// where the final sequence of a block carries literals only.
inline constexpr std::size_t kLzBlockBytes = 1 << 20;

Bytes lz_compress(ByteView input);
/// Throws Error(kCodecFormat) on any malformed or truncated frame.
Bytes lz_decompress(ByteView frame);

}  // namespace skymr::dfs
