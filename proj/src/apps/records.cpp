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

#include "skymr/apps/records.hpp"

#include <charconv>

#include "skymr/common/error.hpp"

namespace skymr::apps {

void encode_catalog_record(const geo::SkyObject& obj, std::uint8_t* out) {
  put_le(out, obj.id);
  put_f64_le(out + 8, obj.ra);
  put_f64_le(out + 16, obj.dec);
  for (std::size_t i = 0; i < 4; ++i) put_f64_le(out + 24 + 8 * i, obj.photometry[i]);
  out[56] = obj.objType;
}

Bytes encode_catalog_record(const geo::SkyObject& obj) {
  Bytes out(kCatalogRecordBytes);
  encode_catalog_record(obj, out.data());
  return out;
}

geo::SkyObject decode_catalog_record(ByteView rec) {
  if (rec.size() != kCatalogRecordBytes)
    throw Error(ErrorCode::kMalformedInput, "catalog record must be 57 bytes, got " + std::to_string(rec.size()));
  geo::SkyObject obj;
  obj.id = get_le<std::uint64_t>(rec.data());
  obj.ra = get_f64_le(rec.data() + 8);
  obj.dec = get_f64_le(rec.data() + 16);
  for (std::size_t i = 0; i < 4; ++i) obj.photometry[i] = get_f64_le(rec.data() + 24 + 8 * i);
  obj.objType = rec[56];
  if (!obj.valid())
    throw Error(ErrorCode::kMalformedInput, "catalog record " + std::to_string(obj.id) + " has an invalid position");
  return obj;
}

std::array<std::uint8_t, kBlockKeyBytes> encode_block_key(geo::BlockKey key) {
  std::array<std::uint8_t, kBlockKeyBytes> out{};
  put_be(out.data(), key.zone);
  put_be(out.data() + 4, key.block);
  return out;
}

geo::BlockKey decode_block_key(ByteView key) {
  if (key.size() != kBlockKeyBytes) throw Error(ErrorCode::kMalformedInput, "block key must be 8 bytes");
  return {get_be<std::uint32_t>(key.data()), get_be<std::uint32_t>(key.data() + 4)};
}

void encode_pair(const geo::PairRecord& pair, std::uint8_t* out) {
  put_le(out, pair.idA);
  put_le(out + 8, pair.idB);
  put_f64_le(out + 16, pair.distArcsec);
}

Bytes encode_pair(const geo::PairRecord& pair) {
  Bytes out(kPairRecordBytes);
  encode_pair(pair, out.data());
  return out;
}

geo::PairRecord decode_pair(ByteView rec) {
  if (rec.size() != kPairRecordBytes) throw Error(ErrorCode::kMalformedInput, "pair record must be 24 bytes");
  return {get_le<std::uint64_t>(rec.data()), get_le<std::uint64_t>(rec.data() + 8), get_f64_le(rec.data() + 16)};
}

std::vector<geo::PairRecord> decode_pairs(ByteView data) {
  if (data.size() % kPairRecordBytes != 0)
    throw Error(ErrorCode::kMalformedInput, "pair output length is not a multiple of 24");
  std::vector<geo::PairRecord> out;
  out.reserve(data.size() / kPairRecordBytes);
  for (std::size_t off = 0; off < data.size(); off += kPairRecordBytes)
    out.push_back(decode_pair(data.subspan(off, kPairRecordBytes)));
  return out;
}

std::string format_histogram_line(const HistogramLine& line) {
  std::string s = std::to_string(line.zone) + " " + std::to_string(line.block);
  for (auto c : line.histogram.counts) {
    s += ' ';
    s += std::to_string(c);
  }
  s += '\n';
  return s;
}

HistogramLine parse_histogram_line(std::string_view text, const std::string& where) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::kParseError, where + ": " + why + " in '" + std::string(text.substr(0, 80)) + "'");
  };
  if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
  HistogramLine line;
  std::size_t token = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p == end) break;
    if (token >= 2 + geo::kHistogramBins) throw fail("more than 62 fields");
    std::from_chars_result r;
    if (token < 2) {
      std::int64_t v = 0;
      r = std::from_chars(p, end, v);
      (token == 0 ? line.zone : line.block) = v;
    } else {
      r = std::from_chars(p, end, line.histogram.counts[token - 2]);
    }
    if (r.ec != std::errc() || (r.ptr != end && *r.ptr != ' ' && *r.ptr != '\t'))
      throw fail("bad field " + std::to_string(token + 1));
    p = r.ptr;
    ++token;
  }
  if (token != 2 + geo::kHistogramBins) throw fail("expected 62 fields, found " + std::to_string(token));
  return line;
}

}  // namespace skymr::apps
