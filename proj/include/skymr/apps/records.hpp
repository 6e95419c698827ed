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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "skymr/common/bytes.hpp"
#include "skymr/geometry/block_grid.hpp"
#include "skymr/geometry/pair_search.hpp"
#include "skymr/geometry/sky_object.hpp"

namespace skymr::apps {

// Catalog record, 57 bytes little-endian:
//   id u64 | ra f64 | dec f64 | photometry 4 x f64 | objType u8
inline constexpr std::size_t kCatalogRecordBytes = 57;
// Map key: zone u32 BE | block u32 BE, so byte order is (zone, block) order.
inline constexpr std::size_t kBlockKeyBytes = 8;
// Pair output: idA u64 | idB u64 | distArcsec f64, little-endian.
inline constexpr std::size_t kPairRecordBytes = 24;

void encode_catalog_record(const geo::SkyObject& obj, std::uint8_t* out);
Bytes encode_catalog_record(const geo::SkyObject& obj);
/// Throws Error(kMalformedInput) on a wrong size or out-of-range position.
geo::SkyObject decode_catalog_record(ByteView rec);

std::array<std::uint8_t, kBlockKeyBytes> encode_block_key(geo::BlockKey key);
geo::BlockKey decode_block_key(ByteView key);

void encode_pair(const geo::PairRecord& pair, std::uint8_t* out);
Bytes encode_pair(const geo::PairRecord& pair);
geo::PairRecord decode_pair(ByteView rec);
/// Concatenated pair records. Throws Error(kMalformedInput) on a ragged tail.
std::vector<geo::PairRecord> decode_pairs(ByteView data);

/// "<zone> <block> c1 ... c60". The job-wide total uses zone = block = -1.
struct HistogramLine {
  std::int64_t zone = -1;
  std::int64_t block = -1;
  geo::PairHistogram histogram;

  friend bool operator==(const HistogramLine& a, const HistogramLine& b) {
    return a.zone == b.zone && a.block == b.block && a.histogram.counts == b.histogram.counts;
  }
};

std::string format_histogram_line(const HistogramLine& line);  // newline-terminated
/// Throws Error(kParseError) naming `where` when the line is malformed.
HistogramLine parse_histogram_line(std::string_view text, const std::string& where = "histogram line");

}  // namespace skymr::apps
