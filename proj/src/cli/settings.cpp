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

#include "skymr/cli/settings.hpp"

#include <cmath>
#include <sstream>

#include "CLI11.hpp"
#include "skymr/common/error.hpp"

namespace skymr::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw Error(ErrorCode::kInvalidConfig, "config " + key + "=" + value + ": " + why);
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    bad(key, value, "not an integer");
  }
  if (used != value.size() || value.front() == '-') bad(key, value, "not an integer");
  return v;
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    bad(key, value, "not a number");
  }
  if (used != value.size() || !std::isfinite(v)) bad(key, value, "not a number");
  return v;
}

std::uint32_t to_u32(const std::string& key, const std::string& value) {
  const auto v = to_u64(key, value);
  if (v > 0xFFFFFFFFULL) bad(key, value, "too large");
  return static_cast<std::uint32_t>(v);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::uint64_t parse_size(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw Error(ErrorCode::kInvalidConfig, "empty size");
  std::string err;
  try {
    err = CLI::AsSizeValue(false)(s);
  } catch (const CLI::Error& e) {
    err = e.what();
  }
  if (!err.empty()) throw Error(ErrorCode::kInvalidConfig, "bad size '" + text + "': " + err);
  return to_u64("size", s);
}

void Settings::apply(const std::string& key, const std::string& value) {
  if (key == "store") {
    store = value;
  } else if (key == "nodes") {
    nodes = to_u32(key, value);
  } else if (key == "replication" || key == "dfs.replication") {
    replication = to_u32(key, value);
  } else if (key == "block.size" || key == "dfs.block.size") {
    blockBytes = parse_size(value);
  } else if (key == "io.bytes.per.checksum") {
    bytesPerChecksum = static_cast<std::uint32_t>(parse_size(value));
  } else if (key == "io.sort.mb") {
    sortMb = to_u64(key, value);
  } else if (key == "io.sort.record.percent") {
    recordPercent = to_double(key, value);
  } else if (key == "io.sort.spill.percent") {
    spillPercent = to_double(key, value);
  } else if (key == "reducers.max" || key == "mapred.tasktracker.reduce.tasks.maximum") {
    reducersMax = to_u32(key, value);
  } else if (key == "mappers.max" || key == "mapred.tasktracker.map.tasks.maximum") {
    mappersMax = to_u32(key, value);
  } else if (key == "split.size") {
    splitBytes = parse_size(value);
  } else if (key == "workers") {
    workers = to_u64(key, value);
  } else if (key == "codec") {
    const auto c = dfs::codec_from_string(value);
    if (!c) bad(key, value, "expected none or lz");
    codec = *c;
  } else if (key == "write.mode") {
    const auto m = dfs::write_mode_from_string(value);
    if (!m) bad(key, value, "expected buffered or unbuffered");
    writeMode = *m;
  } else if (key == "record.growth") {
    recordGrowth = to_double(key, value);
  } else {
    throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + key + "'");
  }
}

void Settings::validate() const {
  cluster().validate();
  spill().validate();
  if (nodes == 0) throw Error(ErrorCode::kInvalidConfig, "nodes must be positive");
  if (reducersMax == 0 || mappersMax == 0) throw Error(ErrorCode::kInvalidConfig, "task slots must be positive");
  if (workers == 0) throw Error(ErrorCode::kInvalidConfig, "workers must be positive");
  if (!(recordGrowth >= 1.0)) throw Error(ErrorCode::kInvalidConfig, "record.growth must be at least 1");
}

dfs::ClusterSpec Settings::cluster() const {
  dfs::ClusterSpec c;
  c.nodeCount = nodes;
  c.replication = replication;
  c.blockBytes = blockBytes;
  c.bytesPerChecksum = bytesPerChecksum;
  c.rootDir = store / "dfs";
  return c;
}

mr::SpillConfig Settings::spill() const { return {sortMb * dfs::kMiB, recordPercent, spillPercent}; }

std::map<std::string, std::string> Settings::to_map() const {
  return {
      {"store", store.string()},
      {"nodes", std::to_string(nodes)},
      {"replication", std::to_string(replication)},
      {"block.size", std::to_string(blockBytes)},
      {"io.bytes.per.checksum", std::to_string(bytesPerChecksum)},
      {"io.sort.mb", std::to_string(sortMb)},
      {"io.sort.record.percent", fmt(recordPercent)},
      {"io.sort.spill.percent", fmt(spillPercent)},
      {"reducers.max", std::to_string(reducersMax)},
      {"mappers.max", std::to_string(mappersMax)},
      {"split.size", std::to_string(split_bytes())},
      {"workers", std::to_string(workers)},
      {"codec", std::string(dfs::to_string(codec))},
      {"write.mode", std::string(dfs::to_string(writeMode))},
      {"record.growth", fmt(recordGrowth)},
  };
}

std::map<std::string, std::string> parse_config(std::string_view text, const std::string& source) {
  std::map<std::string, std::string> out;
  std::size_t lineNo = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      throw Error(ErrorCode::kParseError, source + ":" + std::to_string(lineNo) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace skymr::cli
