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

#include "skymr/apps/bench.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>

#include "skymr/common/error.hpp"
#include "skymr/common/worker_pool.hpp"

namespace skymr::apps {

using metering::Counter;
using metering::Meter;
using metering::Phase;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double mib_per_s(std::uint64_t bytes, double seconds) {
  return seconds > 0.0 ? static_cast<double>(bytes) / static_cast<double>(dfs::kMiB) / seconds : 0.0;
}

void require_space(const fs::path& dir, std::uint64_t need, const std::string& what) {
  std::error_code ec;
  const auto info = fs::space(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot query free space of " + dir.string() + ": " + ec.message());
  if (info.available < need)
    throw Error(ErrorCode::kUnavailable, what + " needs " + std::to_string(need) + " bytes but only " +
                                             std::to_string(info.available) + " are free under " + dir.string());
}

}  // namespace

Bytes pseudo_random_bytes(std::uint64_t n, std::uint64_t seed) {
  Bytes out(n);
  std::mt19937_64 rng(seed);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) put_le(out.data() + i, rng());
  const std::uint64_t last = rng();
  for (std::size_t k = 0; i < n; ++i, ++k) out[i] = static_cast<std::uint8_t>(last >> (8 * k));
  return out;
}

double DiskBenchResult::write_mb_per_s() const { return mib_per_s(totalBytes, writeSeconds); }
double DiskBenchResult::read_mb_per_s() const { return mib_per_s(totalBytes, readSeconds); }

DiskBenchResult bench_disk(const DiskBenchOptions& options, Meter& meter) {
  if (options.files == 0 || options.bytes == 0)
    throw Error(ErrorCode::kInvalidConfig, "disk bench needs at least one non-empty file");
  fs::create_directories(options.dir);
  require_space(options.dir, options.bytes + dfs::kMiB, "disk bench");

  metering::ScopedPhaseTimer timer(meter, Phase::kBench);
  const Bytes data = pseudo_random_bytes(options.bytes, options.seed);
  Bytes back(options.bytes);
  DiskBenchResult result;
  result.mode = options.mode;
  for (std::uint32_t i = 0; i < options.files; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "bench-%04u.dat", i);
    const fs::path path = options.dir / name;
    DiskBenchFile entry;
    entry.index = i;
    entry.bytes = options.bytes;

    auto t0 = Clock::now();
    entry.fallback = dfs::write_with_mode(path, data, options.mode);
    entry.writeSeconds = since(t0);
    meter.add(Phase::kBench, Counter::kDiskWrite, options.bytes);

    t0 = Clock::now();
    {
      std::ifstream in(path, std::ios::binary);
      in.read(reinterpret_cast<char*>(back.data()), static_cast<std::streamsize>(back.size()));
      if (!in) throw Error(ErrorCode::kIoError, "short read from " + path.string());
    }
    entry.readSeconds = since(t0);
    meter.add(Phase::kBench, Counter::kDiskRead, options.bytes);
    fs::remove(path);
    if (back != data) throw Error(ErrorCode::kIntegrity, "read-back mismatch in " + path.string());

    result.totalBytes += entry.bytes;
    result.writeSeconds += entry.writeSeconds;
    result.readSeconds += entry.readSeconds;
    result.files.push_back(entry);
  }
  return result;
}

std::string_view to_string(DfsioOp op) { return op == DfsioOp::kWrite ? "write" : "read"; }

std::string dfsio_path(const std::string& dir, std::uint32_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "/io_data_%04u", index);
  return dir + name;
}

double DfsioResult::throughput_mb_per_s() const {
  double seconds = 0.0;
  for (const auto& t : tasks) seconds += t.seconds;
  return mib_per_s(totalBytes, seconds);
}

double DfsioResult::average_io_rate_mb_per_s() const {
  if (tasks.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& t : tasks) sum += mib_per_s(t.bytes, t.seconds);
  return sum / static_cast<double>(tasks.size());
}

DfsioResult bench_dfsio(dfs::BlockStore& store, const DfsioOptions& options, Meter& meter) {
  if (options.mappers == 0) throw Error(ErrorCode::kInvalidConfig, "dfsio needs at least one mapper");
  const std::uint32_t nodes = store.cluster().nodeCount;
  if (options.op == DfsioOp::kWrite) {
    const std::uint64_t r = options.write.replication.value_or(store.cluster().replication);
    require_space(store.cluster().rootDir, r * options.mappers * options.bytes, "dfsio write");
  }

  DfsioResult result;
  result.op = options.op;
  result.tasks.resize(options.mappers);
  const auto t0 = Clock::now();
  parallel_for(options.mappers, options.workers, [&](std::size_t i) {
    DfsioTask& task = result.tasks[i];
    task.index = static_cast<std::uint32_t>(i);
    task.node = task.index % nodes;
    task.path = dfsio_path(options.dir, task.index);
    Meter local;
    if (options.op == DfsioOp::kWrite) {
      const Bytes data = pseudo_random_bytes(options.bytes, options.seed + i);
      if (store.exists(task.path)) store.remove(task.path);
      const auto start = Clock::now();
      task.bytes = store.write_file(task.path, data, task.node, options.write, local).length;
      task.seconds = since(start);
    } else {
      if (!store.exists(task.path))
        throw Error(ErrorCode::kNotFound, task.path + " missing; run the write benchmark first");
      const auto start = Clock::now();
      task.bytes = store.read_file(task.path, task.node, local).size();
      task.seconds = since(start);
    }
    task.meter = local.snapshot();
  });
  result.wallSeconds = since(t0);
  for (const auto& t : result.tasks) {
    result.totalBytes += t.bytes;
    result.meter += t.meter;
  }
  meter.merge(result.meter);
  return result;
}

}  // namespace skymr::apps
