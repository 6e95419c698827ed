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

#include "skymr/dfs/lz_codec.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

#include "skymr/common/error.hpp"

namespace skymr::dfs {
namespace {

constexpr char kMagic[4] = {'S', 'K', 'L', 'Z'};
constexpr std::size_t kBlockHeader = 9;
constexpr std::size_t kMinMatch = 4;
constexpr std::size_t kMaxOffset = 65535;
constexpr int kHashBits = 16;

std::uint32_t read32(const std::uint8_t* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

std::uint32_t hash4(std::uint32_t v) { return (v * 2654435761u) >> (32 - kHashBits); }

void put_length_tail(Bytes& out, std::size_t extra) {
  while (extra >= 255) {
    out.push_back(255);
    extra -= 255;
  }
  out.push_back(static_cast<std::uint8_t>(extra));
}

void emit_sequence(Bytes& out, const std::uint8_t* literals, std::size_t litLen, std::size_t offset,
                   std::size_t matchLen) {
  const std::size_t litNibble = std::min<std::size_t>(litLen, 15);
  const std::size_t matchNibble = matchLen ? std::min<std::size_t>(matchLen - kMinMatch, 15) : 0;
  out.push_back(static_cast<std::uint8_t>((litNibble << 4) | matchNibble));
  if (litNibble == 15) put_length_tail(out, litLen - 15);
  out.insert(out.end(), literals, literals + litLen);
  if (matchLen == 0) return;
  out.push_back(static_cast<std::uint8_t>(offset & 0xFF));
  out.push_back(static_cast<std::uint8_t>(offset >> 8));
  if (matchNibble == 15) put_length_tail(out, matchLen - kMinMatch - 15);
}

Bytes compress_block(ByteView in) {
  Bytes out;
  out.reserve(in.size() / 2 + 16);
  const std::uint8_t* base = in.data();
  const std::size_t n = in.size();
  std::vector<std::int32_t> table(std::size_t{1} << kHashBits, -1);
  std::size_t anchor = 0;
  std::size_t i = 0;
  while (n >= kMinMatch && i + kMinMatch <= n) {
    const std::uint32_t word = read32(base + i);
    const std::uint32_t h = hash4(word);
    const std::int32_t cand = table[h];
    table[h] = static_cast<std::int32_t>(i);
    if (cand >= 0 && i - static_cast<std::size_t>(cand) <= kMaxOffset && read32(base + cand) == word) {
      std::size_t len = kMinMatch;
      while (i + len < n && base[cand + len] == base[i + len]) ++len;
      emit_sequence(out, base + anchor, i - anchor, i - static_cast<std::size_t>(cand), len);
      // Seed the table inside long matches so following data can refer back.
      const std::size_t end = i + len;
      for (std::size_t k = i + 1; k + kMinMatch <= n && k < end; k += (len > 64 ? 16 : 1))
        table[hash4(read32(base + k))] = static_cast<std::int32_t>(k);
      i = end;
      anchor = i;
    } else {
      i += 1 + ((i - anchor) >> 6);
    }
  }
  emit_sequence(out, base + anchor, n - anchor, 0, 0);
  return out;
}

[[noreturn]] void corrupt(const char* what) {
  throw Error(ErrorCode::kCodecFormat, std::string("corrupt lz frame: ") + what);
}

std::size_t read_length_tail(ByteView in, std::size_t& pos) {
  std::size_t total = 0;
  for (;;) {
    if (pos >= in.size()) corrupt("truncated length");
    const std::uint8_t b = in[pos++];
    total += b;
    if (b != 255) return total;
  }
}

void decompress_block(ByteView in, std::size_t rawLen, Bytes& out) {
  const std::size_t start = out.size();
  const std::size_t limit = start + rawLen;
  std::size_t pos = 0;
  for (;;) {
    if (pos >= in.size()) corrupt("missing token");
    const std::uint8_t token = in[pos++];
    std::size_t litLen = token >> 4;
    if (litLen == 15) litLen += read_length_tail(in, pos);
    if (litLen > in.size() - pos || litLen > limit - out.size()) corrupt("literal overrun");
    out.insert(out.end(), in.begin() + static_cast<std::ptrdiff_t>(pos),
               in.begin() + static_cast<std::ptrdiff_t>(pos + litLen));
    pos += litLen;
    if (pos == in.size()) break;
    if (in.size() - pos < 2) corrupt("truncated offset");
    const std::size_t offset = in[pos] | (static_cast<std::size_t>(in[pos + 1]) << 8);
    pos += 2;
    std::size_t matchLen = (token & 0x0F) + kMinMatch;
    if ((token & 0x0F) == 15) matchLen += read_length_tail(in, pos);
    if (offset == 0 || offset > out.size() - start) corrupt("bad match offset");
    if (matchLen > limit - out.size()) corrupt("match overrun");
    const std::size_t from = out.size() - offset;
    for (std::size_t k = 0; k < matchLen; ++k) out.push_back(out[from + k]);
  }
  if (out.size() != limit) corrupt("block length mismatch");
}

}  // namespace

std::string_view to_string(Codec codec) { return codec == Codec::kLz ? "lz" : "none"; }

std::optional<Codec> codec_from_string(std::string_view name) {
  if (name == "none") return Codec::kNone;
  if (name == "lz") return Codec::kLz;
  return std::nullopt;
}

Bytes lz_compress(ByteView input) {
  Bytes out(kMagic, kMagic + 4);
  out.reserve(input.size() / 2 + 32);
  for (std::size_t off = 0; off < input.size(); off += kLzBlockBytes) {
    const auto chunk = input.subspan(off, std::min(kLzBlockBytes, input.size() - off));
    Bytes packed = compress_block(chunk);
    const bool stored = packed.size() >= chunk.size();
    append_le(out, static_cast<std::uint32_t>(chunk.size()));
    append_le(out, static_cast<std::uint32_t>(stored ? chunk.size() : packed.size()));
    out.push_back(stored ? 0 : 1);
    if (stored)
      append(out, chunk);
    else
      append(out, packed);
  }
  append_le(out, std::uint32_t{0});
  append_le(out, std::uint32_t{0});
  out.push_back(0);
  return out;
}

Bytes lz_decompress(ByteView frame) {
  if (frame.size() < 4 || std::memcmp(frame.data(), kMagic, 4) != 0) corrupt("bad magic");
  Bytes out;
  std::size_t pos = 4;
  for (;;) {
    if (frame.size() - pos < kBlockHeader) corrupt("truncated block header");
    const std::uint32_t rawLen = get_le<std::uint32_t>(frame.data() + pos);
    const std::uint32_t storedLen = get_le<std::uint32_t>(frame.data() + pos + 4);
    const std::uint8_t kind = frame[pos + 8];
    pos += kBlockHeader;
    if (rawLen == 0) {
      if (storedLen != 0 || kind != 0) corrupt("bad terminator");
      break;
    }
    if (rawLen > kLzBlockBytes || storedLen > frame.size() - pos || kind > 1) corrupt("bad block header");
    const auto payload = frame.subspan(pos, storedLen);
    if (kind == 0) {
      if (storedLen != rawLen) corrupt("stored block length mismatch");
      append(out, payload);
    } else {
      decompress_block(payload, rawLen, out);
    }
    pos += storedLen;
  }
  if (pos != frame.size()) corrupt("trailing bytes");
  return out;
}

}  // namespace skymr::dfs
