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

#include "skymr/dfs/block_store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "skymr/dfs/checksum_writer.hpp"
#include "skymr/dfs/crc32.hpp"

namespace skymr::dfs {
namespace fs = std::filesystem;
using metering::Counter;
using metering::Phase;

namespace {

constexpr const char* kManifestMagic = "skymr-manifest 1";

bool is_power_of_two(std::uint64_t v) { return v && !(v & (v - 1)); }

void validate_path(const std::string& path) {
  const bool ok = !path.empty() && path.front() == '/' &&
                  std::none_of(path.begin(), path.end(), [](char c) { return c == ' ' || c == '\n' || c == '\t'; });
  if (!ok) throw Error(ErrorCode::kMalformedInput, "invalid store path '" + path + "'");
}

std::string hex32(std::uint32_t v) {
  char buf[11];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

std::string block_id(const std::string& path, std::size_t index) {
  return "blk_" + hex64(fnv1a64(as_bytes(path))) + "_" + std::to_string(index);
}

// Reads [from, to) of a file.
Bytes read_slice(const fs::path& p, std::uint64_t from, std::uint64_t to) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUnavailable, "replica missing: " + p.string());
  Bytes out(to - from);
  in.seekg(static_cast<std::streamoff>(from));
  if (!out.empty() && !in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size())))
    throw Error(ErrorCode::kIntegrity, "replica truncated: " + p.string());
  return out;
}

}  // namespace

IntegrityError::IntegrityError(std::string blockId, std::uint64_t chunkIndex, std::uint32_t expected,
                               std::uint32_t actual)
    : Error(ErrorCode::kIntegrity, "checksum mismatch in block " + blockId + " chunk " + std::to_string(chunkIndex) +
                                       ": expected " + hex32(expected) + ", actual " + hex32(actual)),
      blockId_(std::move(blockId)),
      chunkIndex_(chunkIndex),
      expected_(expected),
      actual_(actual) {}

void ClusterSpec::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kInvalidConfig, m); };
  if (nodeCount < 1) fail("nodeCount must be >= 1");
  if (replication < 1 || replication > nodeCount) fail("replication must be in [1, nodeCount]");
  if (blockBytes == 0) fail("blockBytes must be positive");
  if (bytesPerChecksum < 512 || !is_power_of_two(bytesPerChecksum))
    fail("bytesPerChecksum must be a power of two >= 512");
  if (rootDir.empty()) fail("rootDir must be set");
}

std::vector<std::uint32_t> place_replicas(std::uint64_t blockIndex, std::uint32_t writerNode,
                                          std::uint32_t nodeCount, std::uint32_t replication) {
  if (writerNode >= nodeCount || replication < 1 || replication > nodeCount)
    throw Error(ErrorCode::kInvalidConfig, "bad placement request");
  std::vector<std::uint32_t> nodes{writerNode};
  for (std::uint32_t j = 0; nodes.size() < replication; ++j) {
    const auto node = static_cast<std::uint32_t>(
        (writerNode + 1 + (blockIndex + j) % (nodeCount - 1)) % nodeCount);
    if (std::find(nodes.begin(), nodes.end(), node) == nodes.end()) nodes.push_back(node);
  }
  return nodes;
}

const BlockInfo& StoredFile::block_at(std::uint64_t off) const {
  for (const auto& b : blocks)
    if (off >= b.offset && off < b.offset + b.length) return b;
  throw Error(ErrorCode::kOutOfRange, "offset " + std::to_string(off) + " outside " + path);
}

BlockStore::BlockStore(ClusterSpec spec) : spec_(std::move(spec)) {
  const fs::path conf = spec_.rootDir / "store.conf";
  if (fs::exists(conf)) {
    std::ifstream in(conf);
    std::string key;
    std::uint64_t value = 0;
    while (in >> key >> value) {
      if (key == "nodes") spec_.nodeCount = static_cast<std::uint32_t>(value);
      else if (key == "block.size") spec_.blockBytes = value;
      else if (key == "io.bytes.per.checksum") spec_.bytesPerChecksum = static_cast<std::uint32_t>(value);
    }
    spec_.replication = std::min(spec_.replication, spec_.nodeCount);
    spec_.validate();
  } else {
    spec_.validate();
    std::error_code ec;
    fs::create_directories(spec_.rootDir / "namespace", ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot create store at " + spec_.rootDir.string());
    std::ofstream out(conf);
    out << "nodes " << spec_.nodeCount << "\nblock.size " << spec_.blockBytes << "\nio.bytes.per.checksum "
        << spec_.bytesPerChecksum << "\n";
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + conf.string());
  }
  for (std::uint32_t n = 0; n < spec_.nodeCount; ++n) fs::create_directories(node_dir(n));
  fs::create_directories(spec_.rootDir / "namespace");
  load_manifests();
}

fs::path BlockStore::node_dir(std::uint32_t node) const { return spec_.rootDir / ("node" + std::to_string(node)); }

fs::path BlockStore::block_path(std::uint32_t node, const std::string& id) const {
  return node_dir(node) / (id + ".blk");
}

fs::path BlockStore::sidecar_path(std::uint32_t node, const std::string& id) const {
  return node_dir(node) / (id + ".csum");
}

fs::path BlockStore::manifest_path(const std::string& path) const {
  return spec_.rootDir / "namespace" / (hex64(fnv1a64(as_bytes(path))) + ".manifest");
}

void BlockStore::persist_manifest(const StoredFile& file) const {
  const auto text = serialize_manifest(file);
  write_all(manifest_path(file.path), as_bytes(text));
}

void BlockStore::load_manifests() {
  for (const auto& entry : fs::directory_iterator(spec_.rootDir / "namespace")) {
    if (entry.path().extension() != ".manifest") continue;
    const Bytes text = read_all(entry.path());
    StoredFile f = parse_manifest(as_chars(text));
    files_[f.path] = std::move(f);
  }
}

StoredFile BlockStore::write_file(const std::string& path, ByteView data, std::uint32_t writerNode,
                                  const WriteOptions& options, metering::Meter& meter) {
  validate_path(path);
  const std::uint32_t r = options.replication.value_or(spec_.replication);
  if (r < 1 || r > spec_.nodeCount) throw Error(ErrorCode::kInvalidConfig, "replication out of range");
  if (writerNode >= spec_.nodeCount) throw Error(ErrorCode::kInvalidConfig, "writer node out of range");
  {
    std::lock_guard lock(mu_);
    if (files_.count(path) || pending_.count(path)) throw Error(ErrorCode::kPathExists, "path exists: " + path);
    pending_.insert(path);
  }
  struct Release {
    BlockStore* self;
    const std::string& path;
    ~Release() {
      std::lock_guard lock(self->mu_);
      self->pending_.erase(path);
    }
  } release{this, path};

  metering::ScopedPhaseTimer timer(meter, Phase::kDfsWrite);
  StoredFile file;
  file.path = path;
  file.length = data.size();
  file.codec = options.codec;
  file.writeMode = options.writeMode;
  file.replication = r;
  file.bytesPerChecksum = spec_.bytesPerChecksum;

  Bytes compressed;
  ByteView payload = data;
  if (options.codec == Codec::kLz) {
    compressed = lz_compress(data);
    payload = compressed;
    meter.add(Phase::kDfsWrite, Counter::kCodecBytes, data.size());
  }
  file.storedLength = payload.size();

  for (std::uint64_t off = 0, index = 0; off < payload.size(); off += spec_.blockBytes, ++index) {
    const auto chunk = payload.subspan(off, std::min<std::uint64_t>(spec_.blockBytes, payload.size() - off));
    BlockInfo block{block_id(path, index), off, chunk.size(), place_replicas(index, writerNode, spec_.nodeCount, r)};

    ChunkedChecksumWriter client(spec_.bytesPerChecksum);
    client.write(chunk);
    client.close();
    const Bytes sidecar = client.sidecar();
    // The tail of the pipeline re-verifies what it received before acking.
    ChunkedChecksumWriter verifier(spec_.bytesPerChecksum);
    verifier.write(chunk);
    verifier.close();
    if (verifier.checksums() != client.checksums())
      throw Error(ErrorCode::kIntegrity, "pipeline checksum mismatch in " + block.id);

    for (std::uint32_t node : block.replicas) {
      if (write_with_mode(block_path(node, block.id), chunk, options.writeMode)) file.unbufferedFallback = true;
      write_all(sidecar_path(node, block.id), sidecar);
    }
    const std::uint64_t crcBytes = sidecar_crc_bytes(chunk.size(), spec_.bytesPerChecksum);
    meter.add(Phase::kDfsWrite, Counter::kChecksumBytes, 2 * chunk.size());
    meter.add(Phase::kDfsWrite, Counter::kNetLocal, chunk.size());
    meter.add(Phase::kDfsWrite, Counter::kNetRemote, (r - 1) * chunk.size());
    meter.add(Phase::kDfsWrite, Counter::kDiskWrite, r * (chunk.size() + crcBytes));
    file.blocks.push_back(std::move(block));
  }

  persist_manifest(file);
  std::lock_guard lock(mu_);
  files_[path] = file;
  return file;
}

StoredFile BlockStore::require(const std::string& path) const {
  std::lock_guard lock(mu_);
  const auto it = files_.find(path);
  if (it == files_.end()) throw Error(ErrorCode::kNotFound, "no such file: " + path);
  return it->second;
}

Bytes BlockStore::read_block_range(const StoredFile& file, const BlockInfo& block, std::uint64_t from,
                                   std::uint64_t to, std::uint32_t readerNode, metering::Meter& meter) const {
  const bool local = std::find(block.replicas.begin(), block.replicas.end(), readerNode) != block.replicas.end();
  const std::uint32_t node = local ? readerNode : block.replicas.front();
  const std::uint64_t bpc = file.bytesPerChecksum;
  const std::uint64_t firstChunk = from / bpc;
  const std::uint64_t lastChunk = (to + bpc - 1) / bpc;  // exclusive
  const std::uint64_t alignedFrom = firstChunk * bpc;
  const std::uint64_t alignedTo = std::min(lastChunk * bpc, block.length);

  if (!fs::exists(block_path(node, block.id)) || !fs::exists(sidecar_path(node, block.id)))
    throw Error(ErrorCode::kUnavailable, "replica of " + block.id + " missing on node " + std::to_string(node));
  const Bytes raw = read_slice(block_path(node, block.id), alignedFrom, alignedTo);
  const Sidecar sidecar = decode_sidecar(read_all(sidecar_path(node, block.id)));
  if (sidecar.bytesPerChecksum != bpc || sidecar.checksums.size() < lastChunk)
    throw Error(ErrorCode::kIntegrity, "sidecar of " + block.id + " does not match the block");
  for (std::uint64_t c = firstChunk; c < lastChunk; ++c) {
    const std::uint64_t s = c * bpc - alignedFrom;
    const std::uint64_t e = std::min<std::uint64_t>(s + bpc, raw.size());
    const std::uint32_t actual = crc32(ByteView(raw).subspan(s, e - s));
    if (actual != sidecar.checksums[c]) throw IntegrityError(block.id, c, sidecar.checksums[c], actual);
  }
  meter.add(Phase::kDfsRead, Counter::kChecksumBytes, raw.size());
  meter.add(Phase::kDfsRead, Counter::kDiskRead, raw.size() + 4 * (lastChunk - firstChunk));
  meter.add(Phase::kDfsRead, local ? Counter::kNetLocal : Counter::kNetRemote, to - from);
  return Bytes(raw.begin() + static_cast<std::ptrdiff_t>(from - alignedFrom),
               raw.begin() + static_cast<std::ptrdiff_t>(to - alignedFrom));
}

Bytes BlockStore::read_file(const std::string& path, std::uint32_t readerNode, metering::Meter& meter) const {
  const StoredFile file = require(path);
  metering::ScopedPhaseTimer timer(meter, Phase::kDfsRead);
  Bytes stored;
  stored.reserve(file.storedLength);
  for (const auto& block : file.blocks) append(stored, read_block_range(file, block, 0, block.length, readerNode, meter));
  if (file.codec == Codec::kLz) {
    Bytes plain = lz_decompress(stored);
    meter.add(Phase::kDfsRead, Counter::kCodecBytes, plain.size());
    return plain;
  }
  return stored;
}

Bytes BlockStore::read_range(const std::string& path, std::uint64_t offset, std::uint64_t length,
                             std::uint32_t readerNode, metering::Meter& meter) const {
  const StoredFile file = require(path);
  if (file.codec != Codec::kNone) throw Error(ErrorCode::kMalformedInput, "range read of compressed file " + path);
  if (offset + length > file.length) throw Error(ErrorCode::kOutOfRange, "range beyond end of " + path);
  metering::ScopedPhaseTimer timer(meter, Phase::kDfsRead);
  Bytes out;
  out.reserve(length);
  const std::uint64_t end = offset + length;
  for (const auto& block : file.blocks) {
    const std::uint64_t lo = std::max(offset, block.offset);
    const std::uint64_t hi = std::min(end, block.offset + block.length);
    if (lo >= hi) continue;
    append(out, read_block_range(file, block, lo - block.offset, hi - block.offset, readerNode, meter));
  }
  return out;
}

std::optional<StoredFile> BlockStore::stat(const std::string& path) const {
  std::lock_guard lock(mu_);
  const auto it = files_.find(path);
  if (it == files_.end()) return std::nullopt;
  return it->second;
}

std::vector<StoredFile> BlockStore::list(const std::string& prefix) const {
  std::lock_guard lock(mu_);
  std::vector<StoredFile> out;
  for (auto it = files_.lower_bound(prefix); it != files_.end() && it->first.starts_with(prefix); ++it)
    out.push_back(it->second);
  return out;
}

void BlockStore::remove(const std::string& path) {
  StoredFile file;
  {
    std::lock_guard lock(mu_);
    const auto it = files_.find(path);
    if (it == files_.end()) throw Error(ErrorCode::kNotFound, "no such file: " + path);
    file = std::move(it->second);
    files_.erase(it);
  }
  for (const auto& block : file.blocks)
    for (std::uint32_t node : block.replicas) {
      fs::remove(block_path(node, block.id));
      fs::remove(sidecar_path(node, block.id));
    }
  fs::remove(manifest_path(path));
}

std::string serialize_manifest(const StoredFile& f) {
  std::ostringstream os;
  os << kManifestMagic << '\n'
     << "path " << f.path << '\n'
     << "length " << f.length << '\n'
     << "stored_length " << f.storedLength << '\n'
     << "codec " << to_string(f.codec) << '\n'
     << "write_mode " << to_string(f.writeMode) << '\n'
     << "unbuffered_fallback " << (f.unbufferedFallback ? 1 : 0) << '\n'
     << "replication " << f.replication << '\n'
     << "bytes_per_checksum " << f.bytesPerChecksum << '\n'
     << "blocks " << f.blocks.size() << '\n';
  for (const auto& b : f.blocks) {
    os << "block " << b.id << ' ' << b.offset << ' ' << b.length << ' ';
    for (std::size_t i = 0; i < b.replicas.size(); ++i) os << (i ? "," : "") << b.replicas[i];
    os << '\n';
  }
  return os.str();
}

StoredFile parse_manifest(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto fail = [](const std::string& why) -> void { throw Error(ErrorCode::kParseError, "manifest: " + why); };
  if (!std::getline(in, line) || line != kManifestMagic) fail("bad header");
  StoredFile f;
  std::size_t declaredBlocks = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "path") ls >> f.path;
    else if (key == "length") ls >> f.length;
    else if (key == "stored_length") ls >> f.storedLength;
    else if (key == "codec") {
      std::string v;
      ls >> v;
      const auto c = codec_from_string(v);
      if (!c) fail("unknown codec " + v);
      f.codec = *c;
    } else if (key == "write_mode") {
      std::string v;
      ls >> v;
      const auto m = write_mode_from_string(v);
      if (!m) fail("unknown write mode " + v);
      f.writeMode = *m;
    } else if (key == "unbuffered_fallback") {
      int v = 0;
      ls >> v;
      f.unbufferedFallback = v != 0;
    } else if (key == "replication") ls >> f.replication;
    else if (key == "bytes_per_checksum") ls >> f.bytesPerChecksum;
    else if (key == "blocks") ls >> declaredBlocks;
    else if (key == "block") {
      BlockInfo b;
      std::string replicas;
      ls >> b.id >> b.offset >> b.length >> replicas;
      std::istringstream rs(replicas);
      for (std::string tok; std::getline(rs, tok, ',');) b.replicas.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
      f.blocks.push_back(std::move(b));
    } else {
      fail("unknown key " + key);
    }
    if (ls.fail()) fail("bad value in line '" + line + "'");
  }
  if (f.path.empty() || f.blocks.size() != declaredBlocks) fail("incomplete manifest");
  return f;
}

}  // namespace skymr::dfs
