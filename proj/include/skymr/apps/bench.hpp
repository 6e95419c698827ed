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
#include <string>
#include <vector>

#include "skymr/dfs/block_store.hpp"
#include "skymr/dfs/direct_io.hpp"
#include "skymr/metering/meter.hpp"

namespace skymr::apps {

/// Deterministic incompressible fill.
Bytes pseudo_random_bytes(std::uint64_t n, std::uint64_t seed);

// Single-threaded local disk benchmark: write a file, read it back, delete
// it, repeat. Metered in the bench phase.
struct DiskBenchOptions {
  std::filesystem::path dir;
  std::uint32_t files = 10;
  std::uint64_t bytes = 64 * dfs::kMiB;
  dfs::WriteMode mode = dfs::WriteMode::kBuffered;
  std::uint64_t seed = 1;
};

struct DiskBenchFile {
  std::uint32_t index = 0;
  std::uint64_t bytes = 0;
  double writeSeconds = 0.0;
  double readSeconds = 0.0;
  bool fallback = false;  // unbuffered write refused, buffered path used
};

struct DiskBenchResult {
  dfs::WriteMode mode = dfs::WriteMode::kBuffered;
  std::vector<DiskBenchFile> files;
  std::uint64_t totalBytes = 0;
  double writeSeconds = 0.0;
  double readSeconds = 0.0;

  double write_mb_per_s() const;
  double read_mb_per_s() const;
};

/// Throws Error(kUnavailable) up front when the target lacks space for one
/// file.
DiskBenchResult bench_disk(const DiskBenchOptions& options, metering::Meter& meter);

// TestDFSIO analog: M map-style tasks, task i on node i mod N, each writing
// or reading one B-byte file through the block store.
enum class DfsioOp { kWrite, kRead };
std::string_view to_string(DfsioOp op);

struct DfsioOptions {
  DfsioOp op = DfsioOp::kWrite;
  std::uint32_t mappers = 1;
  std::uint64_t bytes = 64 * dfs::kMiB;
  dfs::WriteOptions write;
  std::size_t workers = 1;
  std::string dir = "/benchmarks/dfsio";
  std::uint64_t seed = 1;
};

struct DfsioTask {
  std::uint32_t index = 0;
  std::uint32_t node = 0;
  std::string path;
  std::uint64_t bytes = 0;
  double seconds = 0.0;
  metering::MeterSnapshot meter;
};

struct DfsioResult {
  DfsioOp op = DfsioOp::kWrite;
  std::vector<DfsioTask> tasks;
  metering::MeterSnapshot meter;
  std::uint64_t totalBytes = 0;
  double wallSeconds = 0.0;

  /// TestDFSIO "throughput": total bytes over summed task time, MiB/s.
  double throughput_mb_per_s() const;
  /// TestDFSIO "average IO rate": mean of per-task rates, MiB/s.
  double average_io_rate_mb_per_s() const;
};

std::string dfsio_path(const std::string& dir, std::uint32_t index);

/// Write replaces earlier files; read requires them (Error(kNotFound)).
/// Writes check free space first (Error(kUnavailable)).
DfsioResult bench_dfsio(dfs::BlockStore& store, const DfsioOptions& options, metering::Meter& meter);

}  // namespace skymr::apps
