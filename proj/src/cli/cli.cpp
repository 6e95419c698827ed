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

#include "skymr/cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "skymr/apps/bench.hpp"
#include "skymr/apps/catalog.hpp"
#include "skymr/apps/jobs.hpp"
#include "skymr/apps/records.hpp"
#include "skymr/cli/settings.hpp"
#include "skymr/common/error.hpp"
#include "skymr/metering/report.hpp"
#include "skymr/mr/spill.hpp"

namespace skymr::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using metering::Meter;
using metering::RunReport;

// ---------------------------------------------------------------- flags

// Command-line values. Flags that mirror config keys are kept as strings
// and applied through Settings::apply only when given.
struct Flags {
  struct Bound {
    CLI::Option* opt;
    std::string key;
    std::shared_ptr<std::string> value;
  };

  std::string store;
  std::string config;
  std::string nodes;
  std::vector<Bound> bound;

  void bind(CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& help,
            const std::vector<std::string>& choices = {}) {
    auto value = std::make_shared<std::string>();
    CLI::Option* opt = cmd->add_option(flag, *value, help);
    if (!choices.empty()) opt->check(CLI::IsMember(choices));
    bound.push_back({opt, key, std::move(value)});
  }
};

Settings resolve_settings(Flags& flags, CLI::Option* storeOpt, CLI::Option* nodesOpt, CLI::Option* configOpt) {
  Settings s;
  if (const char* env = std::getenv("SKYMR_STORE"); env && *env) s.store = env;

  std::string configPath;
  if (configOpt->count() > 0) {
    configPath = flags.config;
  } else if (const char* env = std::getenv("SKYMR_CONFIG"); env && *env) {
    configPath = env;
  }
  if (!configPath.empty()) {
    std::ifstream in(configPath);
    if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot read config file " + configPath);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::map<std::string, std::string> kv;
    try {
      kv = parse_config(text, configPath);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig, e.what());
    }
    for (const auto& [k, v] : kv) s.apply(k, v);
  }

  if (storeOpt->count() > 0) s.store = flags.store;
  if (nodesOpt->count() > 0) s.apply("nodes", flags.nodes);
  for (const auto& b : flags.bound)
    if (b.opt->count() > 0) s.apply(b.key, *b.value);
  s.validate();
  return s;
}

// ---------------------------------------------------------------- runs

std::string utc_stamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

fs::path runs_dir(const Settings& s) { return s.store / "runs"; }

std::string new_run_id(const Settings& s, const std::string& requested, const std::string& tag) {
  if (!requested.empty()) {
    if (requested.find('/') != std::string::npos || requested == "." || requested == "..")
      throw Error(ErrorCode::kInvalidConfig, "run id must be a plain name");
    if (fs::exists(runs_dir(s) / requested)) throw Error(ErrorCode::kPathExists, "run " + requested + " already exists");
    return requested;
  }
  const std::string base = utc_stamp() + "-" + tag;
  for (int i = 0;; ++i) {
    const std::string id = i == 0 ? base : base + "-" + std::to_string(i);
    if (!fs::exists(runs_dir(s) / id)) return id;
  }
}

void save_report(const Settings& s, const RunReport& report) {
  const fs::path dir = runs_dir(s) / report.runId;
  fs::create_directories(dir);
  const std::string doc = to_json(report).dump(2) + "\n";
  write_all(dir / "report.json", as_bytes(doc));
  write_all(dir / "report.csv", as_bytes(metering::to_csv(report)));
}

RunReport load_report(const Settings& s, const std::string& id) {
  const fs::path path = runs_dir(s) / id / "report.json";
  if (id.empty() || id.find('/') != std::string::npos || !fs::exists(path))
    throw Error(ErrorCode::kNotFound, "unknown run id '" + id + "'");
  const Bytes raw = read_all(path);
  json doc;
  try {
    doc = json::parse(as_chars(raw));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  return metering::run_report_from_json(doc);
}

std::string human_bytes(double b) {
  const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB"};
  int u = 0;
  while (b >= 1024.0 && u < 4) {
    b /= 1024.0;
    ++u;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, u == 0 ? "%.0f %s" : "%.2f %s", b, units[u]);
  return buf;
}

void print_summary(std::ostream& out, const RunReport& r) {
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %14s %14s %14s %14s %14s %10s\n", "phase", "disk_read", "disk_write",
                "net_local", "net_remote", "work_units", "wall_s");
  out << line;
  for (std::size_t p = 0; p < metering::kPhaseCount; ++p) {
    const auto phase = static_cast<metering::Phase>(p);
    const auto& c = r.meter[phase];
    if (c.idle() && c.wallSeconds == 0.0) continue;
    std::snprintf(line, sizeof line, "%-10s %14llu %14llu %14llu %14llu %14.4g %10.3f\n",
                  std::string(metering::to_string(phase)).c_str(),
                  static_cast<unsigned long long>(c[metering::Counter::kDiskRead]),
                  static_cast<unsigned long long>(c[metering::Counter::kDiskWrite]),
                  static_cast<unsigned long long>(c[metering::Counter::kNetLocal]),
                  static_cast<unsigned long long>(c[metering::Counter::kNetRemote]), c.work_units(r.workModel),
                  c.wallSeconds);
    out << line;
  }
  std::snprintf(line, sizeof line, "\n%-10s %12s %14s %14s %8s %8s\n", "class", "instr_mips", "disk_bit/s",
                "net_bit/s", "AD", "ADN");
  out << line;
  for (const auto& row : r.amdahl.rows) {
    auto num = [](const std::optional<double>& v) {
      char b[32];
      if (v) std::snprintf(b, sizeof b, "%.3f", *v);
      else std::snprintf(b, sizeof b, "N/A");
      return std::string(b);
    };
    std::snprintf(line, sizeof line, "%-10s %12.3f %14.4g %14.4g %8s %8s\n",
                  std::string(metering::to_string(row.taskClass)).c_str(), row.instrRateMips, row.diskBitRate,
                  row.netBitRate, num(row.ad).c_str(), num(row.adn).c_str());
    out << line;
  }
  if (r.amdahl.energy)
    out << "\nenergy: " << r.amdahl.energy->watts << " W x " << r.amdahl.energy->wallSeconds
        << " s = " << r.amdahl.energy->joules << " J\n";
  out << "wall: " << r.wallSeconds << " s\n";
}

RunReport start_report(const Settings& s, const std::string& id, const std::string& command,
                       std::optional<double> watts) {
  RunReport r;
  r.runId = id;
  r.command = command;
  r.config = s.to_map();
  r.watts = watts;
  return r;
}

void finish_report(const Settings& s, RunReport& r, const Meter& meter, double wall, std::ostream& out) {
  r.meter = meter.snapshot();
  r.wallSeconds = wall;
  r.refresh_amdahl();
  save_report(s, r);
  print_summary(out, r);
  out << "run id: " << r.runId << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json job_json(const mr::JobReport& job) {
  json maps = json::array();
  std::uint64_t local = 0;
  for (const auto& t : job.mapTasks) {
    maps.push_back({{"task", t.taskId}, {"node", t.node}, {"spills", t.spillCount}, {"merged", t.merged},
                    {"data_local", t.dataLocal}, {"input_records", t.inputRecords},
                    {"output_records", t.outputRecords}, {"payload_bytes", t.payloadBytes},
                    {"bytes_sorted", t.bytesSorted}, {"bytes_merged", t.bytesMerged}, {"wall_seconds", t.wallSeconds}});
    local += t.dataLocal ? 1 : 0;
  }
  json reduces = json::array();
  std::uint64_t raw = 0, stored = 0;
  for (std::size_t i = 0; i < job.reduceTasks.size(); ++i) {
    const auto& t = job.reduceTasks[i];
    reduces.push_back({{"task", t.taskId}, {"node", t.node}, {"input_records", t.inputRecords},
                       {"fetched_bytes", t.bytesMerged}, {"output_bytes", t.outputBytes},
                       {"stored_bytes", job.outputs[i].storedLength}, {"wall_seconds", t.wallSeconds}});
    raw += job.outputs[i].length;
    stored += job.outputs[i].storedLength;
  }
  return {{"name", job.name},
          {"output_digest", hex64(job.outputDigest)},
          {"map_tasks", maps},
          {"reduce_tasks", reduces},
          {"data_local_maps", local},
          {"map_output_bytes", job.mapOutputBytes},
          {"reduce_input_bytes", job.reduceInputBytes},
          {"output_bytes", raw},
          {"output_stored_bytes", stored},
          {"output_compression_ratio", raw ? static_cast<double>(stored) / static_cast<double>(raw) : 1.0},
          {"map_wall_seconds", job.mapWallSeconds},
          {"reduce_wall_seconds", job.reduceWallSeconds},
          {"wall_seconds", job.wallSeconds}};
}

// ---------------------------------------------------------------- commands

struct GenerateArgs {
  std::uint64_t objects = 0;
  std::uint64_t seed = 42;
  double clustering = 0.01;
  std::string out;
  std::uint32_t writer = 0;
  std::string runId;
};

int cmd_generate(const Settings& s, const GenerateArgs& a, std::ostream& out) {
  dfs::BlockStore store(s.cluster());
  if (a.writer >= store.cluster().nodeCount) throw Error(ErrorCode::kInvalidConfig, "writer node out of range");
  const std::string id = new_run_id(s, a.runId, "generate-" + std::to_string(a.seed));
  RunReport report = start_report(s, id, "generate", std::nullopt);
  Meter meter;
  const auto t0 = std::chrono::steady_clock::now();
  const Bytes data = apps::encode_catalog(apps::generate_objects({a.objects, a.seed, a.clustering}));
  const auto file = store.write_file(a.out, data, a.writer, s.write_options(), meter);
  report.details = {{"path", file.path},     {"objects", a.objects},          {"seed", a.seed},
                    {"clustering", a.clustering}, {"bytes", file.length}, {"stored_bytes", file.storedLength},
                    {"blocks", file.blocks.size()}, {"digest", hex64(fnv1a64(data))}};
  out << "wrote " << a.objects << " objects (" << human_bytes(static_cast<double>(file.length)) << ") to "
      << file.path << " in " << file.blocks.size() << " block(s)\n"
      << "digest: " << hex64(fnv1a64(data)) << "\n";
  finish_report(s, report, meter, seconds_since(t0), out);
  return kExitOk;
}

struct RunArgs {
  std::string catalog = "/catalog";
  std::string output;
  double theta = 60.0;
  std::uint32_t reducers = 0;
  std::optional<double> watts;
  std::string runId;
};

apps::SkyJobOptions sky_options(const Settings& s, const RunArgs& a, double theta, const std::string& prefix) {
  apps::SkyJobOptions o;
  o.catalog = a.catalog;
  o.outputPrefix = prefix;
  o.blocks = geo::BlockConfig::for_theta(theta);
  o.blocks.validate();
  o.reducers = a.reducers ? a.reducers : s.default_reducers();
  o.splitBytes = s.split_bytes() / apps::kCatalogRecordBytes * apps::kCatalogRecordBytes;
  if (o.splitBytes == 0) throw Error(ErrorCode::kInvalidConfig, "split size smaller than one record");
  o.spill = s.spill();
  o.output = s.write_options();
  return o;
}

int cmd_run(const Settings& s, const std::string& which, const RunArgs& a, std::ostream& out) {
  dfs::BlockStore store(s.cluster());
  const auto catalog = store.stat(a.catalog);
  if (!catalog) throw Error(ErrorCode::kNotFound, "catalog " + a.catalog + " not found; run generate first");
  const std::string id = new_run_id(s, a.runId, which);
  const std::string prefix = a.output.empty() ? "/out/" + id : a.output;
  RunReport report = start_report(s, id, "run " + which, a.watts);
  mr::EngineOptions engine;
  engine.workers = s.workers;
  Meter meter;
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t objects = catalog->length / apps::kCatalogRecordBytes;

  if (which == "search") {
    const auto opts = sky_options(s, a, a.theta, prefix);
    const auto run = apps::run_neighbor_search(opts, store, engine, meter);
    std::uint64_t mapRecords = 0;
    for (const auto& t : run.job.mapTasks) mapRecords += t.outputRecords;
    report.details = {{"catalog", a.catalog},
                      {"objects", objects},
                      {"theta_arcsec", a.theta},
                      {"output", prefix},
                      {"pairs", run.pairs},
                      {"border_copy_fraction",
                       objects ? static_cast<double>(mapRecords - objects) / static_cast<double>(objects) : 0.0},
                      {"job", job_json(run.job)}};
    out << "pairs within " << a.theta << "'': " << run.pairs << "\n"
        << "output digest: " << hex64(run.job.outputDigest) << "\n";
  } else {
    const auto opts = sky_options(s, a, 60.0, prefix);
    const auto run = apps::run_neighbor_stats(opts, store, engine, meter);
    json bins = json::array(), cumulative = json::array();
    for (std::size_t k = 1; k <= geo::kHistogramBins; ++k) {
      bins.push_back(run.histogram.counts[k - 1]);
      cumulative.push_back(run.histogram.cumulative(k));
    }
    report.details = {{"catalog", a.catalog},
                      {"objects", objects},
                      {"output", prefix},
                      {"histogram", bins},
                      {"cumulative", cumulative},
                      {"pairs_within_60", run.histogram.total()},
                      {"final_line", apps::format_histogram_line({-1, -1, run.histogram})},
                      {"blocks_job", job_json(run.perBlock)},
                      {"combine_job", job_json(run.combine)}};
    out << apps::format_histogram_line({-1, -1, run.histogram})
        << "pairs within 60'': " << run.histogram.total() << "\n"
        << "output digest: " << hex64(run.combine.outputDigest) << "\n";
  }
  // Buffer that would hold one split's map output in a single spill.
  const auto split = sky_options(s, a, 60.0, prefix).splitBytes;
  const auto rec = mr::recommend_spill_config(split, apps::kCatalogRecordBytes,
                                              apps::kBlockKeyBytes + apps::kCatalogRecordBytes, s.recordGrowth,
                                              s.spillPercent);
  report.details["sort_buffer"] = {{"configured_bytes", s.spill().totalBufferBytes},
                                   {"recommended_bytes", rec.totalBufferBytes},
                                   {"recommended_record_percent", rec.recordPercent},
                                   {"record_growth", s.recordGrowth}};
  if (s.spill().totalBufferBytes < rec.totalBufferBytes)
    out << "note: io.sort.mb below the one-spill size for this split (" << rec.totalBufferBytes / dfs::kMiB
        << " MiB)\n";
  finish_report(s, report, meter, seconds_since(t0), out);
  return kExitOk;
}

struct DiskArgs {
  std::uint32_t files = 10;
  std::uint64_t size = 64 * dfs::kMiB;
  std::string mode = "buffered";
  std::string dir;
  std::optional<double> watts;
  std::string runId;
};

int cmd_bench_disk(const Settings& s, const DiskArgs& a, std::ostream& out) {
  const std::string id = new_run_id(s, a.runId, "bench-disk");
  RunReport report = start_report(s, id, "bench disk", a.watts);
  Meter meter;
  apps::DiskBenchOptions o;
  o.dir = a.dir.empty() ? s.store / "bench-disk" : fs::path(a.dir);
  o.files = a.files;
  o.bytes = a.size;
  o.mode = *dfs::write_mode_from_string(a.mode);
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = apps::bench_disk(o, meter);
  json files = json::array();
  bool fallback = false;
  for (const auto& f : res.files) {
    files.push_back({{"index", f.index}, {"bytes", f.bytes}, {"write_seconds", f.writeSeconds},
                     {"read_seconds", f.readSeconds}, {"fallback", f.fallback}});
    fallback = fallback || f.fallback;
  }
  report.details = {{"mode", a.mode},
                    {"files", files},
                    {"total_bytes", res.totalBytes},
                    {"write_mib_per_s", res.write_mb_per_s()},
                    {"read_mib_per_s", res.read_mb_per_s()},
                    {"unbuffered_fallback", fallback}};
  char line[160];
  std::snprintf(line, sizeof line, "%u files x %s, mode %s%s: write %.1f MiB/s, read %.1f MiB/s\n", a.files,
                human_bytes(static_cast<double>(a.size)).c_str(), a.mode.c_str(),
                fallback ? " (fell back to buffered)" : "", res.write_mb_per_s(), res.read_mb_per_s());
  out << line;
  finish_report(s, report, meter, seconds_since(t0), out);
  return kExitOk;
}

struct DfsioArgs {
  std::string op = "write";
  std::uint32_t mappers = 0;
  std::uint64_t size = 64 * dfs::kMiB;
  std::optional<double> watts;
  std::string runId;
};

int cmd_bench_dfsio(const Settings& s, const DfsioArgs& a, std::ostream& out) {
  dfs::BlockStore store(s.cluster());
  const std::string id = new_run_id(s, a.runId, "dfsio-" + a.op);
  RunReport report = start_report(s, id, "bench dfsio", a.watts);
  Meter meter;
  apps::DfsioOptions o;
  o.op = a.op == "write" ? apps::DfsioOp::kWrite : apps::DfsioOp::kRead;
  o.mappers = a.mappers ? a.mappers : store.cluster().nodeCount;
  o.bytes = a.size;
  o.write = s.write_options();
  o.workers = s.workers;
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = apps::bench_dfsio(store, o, meter);
  json tasks = json::array();
  for (const auto& t : res.tasks)
    tasks.push_back({{"index", t.index}, {"node", t.node}, {"path", t.path}, {"bytes", t.bytes},
                     {"seconds", t.seconds}});
  report.details = {{"op", a.op},
                    {"mappers", o.mappers},
                    {"bytes_per_mapper", a.size},
                    {"tasks", tasks},
                    {"total_bytes", res.totalBytes},
                    {"throughput_mib_per_s", res.throughput_mb_per_s()},
                    {"average_io_rate_mib_per_s", res.average_io_rate_mb_per_s()}};
  char line[160];
  std::snprintf(line, sizeof line, "dfsio %s: %u mappers x %s, throughput %.1f MiB/s, average IO rate %.1f MiB/s\n",
                a.op.c_str(), o.mappers, human_bytes(static_cast<double>(a.size)).c_str(),
                res.throughput_mb_per_s(), res.average_io_rate_mb_per_s());
  out << line;
  finish_report(s, report, meter, seconds_since(t0), out);
  return kExitOk;
}

int cmd_report(const Settings& s, const std::string& id, const std::string& format, std::optional<double> watts,
               std::ostream& out) {
  RunReport r = load_report(s, id);
  if (watts) {
    r.watts = watts;
    r.refresh_amdahl();
  }
  if (format == "csv") {
    out << metering::to_csv(r);
  } else {
    out << to_json(r).dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_store_ls(const Settings& s, const std::string& prefix, std::ostream& out) {
  dfs::BlockStore store(s.cluster());
  for (const auto& f : store.list(prefix))
    out << f.path << "\t" << f.length << "\t" << dfs::to_string(f.codec) << "\tr=" << f.replication << "\t"
        << f.blocks.size() << " block(s)\n";
  return kExitOk;
}

int cmd_store_digest(const Settings& s, const std::string& path, std::ostream& out) {
  dfs::BlockStore store(s.cluster());
  Meter meter;
  out << hex64(fnv1a64(store.read_file(path, 0, meter))) << "  " << path << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"skymr: desk-scale MapReduce sky-survey workloads with I/O metering"};
  app.require_subcommand(1);
  Flags flags;
  auto* storeOpt = app.add_option("--store", flags.store, "Store directory (env SKYMR_STORE)");
  auto* configOpt = app.add_option("--config", flags.config, "key=value config file (env SKYMR_CONFIG)");
  auto* nodesOpt = app.add_option("--nodes", flags.nodes, "Logical node count for a new store");

  auto add_write_flags = [&](CLI::App* cmd) {
    flags.bind(cmd, "--replication", "replication", "Replicas per block");
    flags.bind(cmd, "--codec", "codec", "Output codec", {"none", "lz"});
    flags.bind(cmd, "--write-mode", "write.mode", "Block write path", {"buffered", "unbuffered"});
  };

  // generate
  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic catalog into the store");
  generate->add_option("--objects", gen.objects, "Number of objects")->required();
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--clustering", gen.clustering, "Fraction of objects planted in clumps")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--out", gen.out, "Store path of the catalog")->required();
  generate->add_option("--writer-node", gen.writer, "Node that writes the file");
  generate->add_option("--run-id", gen.runId, "Name for the run report");
  add_write_flags(generate);

  // run search | stats
  RunArgs runArgs;
  std::optional<double> runWatts;
  auto* runCmd = app.add_subcommand("run", "Run a workload over a stored catalog");
  runCmd->require_subcommand(1);
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--catalog", runArgs.catalog, "Store path of the catalog");
    cmd->add_option("--output", runArgs.output, "Store path prefix for job output");
    cmd->add_option("--reducers", runArgs.reducers, "Reduce tasks (default nodes x reducers.max)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--watts", runWatts, "Power draw for the energy row");
    cmd->add_option("--run-id", runArgs.runId, "Name for the run report");
    flags.bind(cmd, "--workers", "workers", "Worker threads");
    add_write_flags(cmd);
  };
  auto* search = runCmd->add_subcommand("search", "All pairs within theta");
  search->add_option("--theta", runArgs.theta, "Search radius in arcseconds")->check(CLI::PositiveNumber);
  add_run_flags(search);
  auto* stats = runCmd->add_subcommand("stats", "Pair-distance histogram, 1'' bins up to 60''");
  add_run_flags(stats);

  // bench disk | dfsio
  auto* bench = app.add_subcommand("bench", "I/O benchmarks");
  bench->require_subcommand(1);
  DiskArgs diskArgs;
  std::optional<double> benchWatts;
  auto* disk = bench->add_subcommand("disk", "Sequential single-threaded local file I/O");
  disk->add_option("--files", diskArgs.files, "Number of files")->check(CLI::PositiveNumber);
  disk->add_option("--size", diskArgs.size, "Bytes per file")->transform(CLI::AsSizeValue(false));
  disk->add_option("--mode", diskArgs.mode, "Write path")->check(CLI::IsMember({"buffered", "unbuffered"}));
  disk->add_option("--dir", diskArgs.dir, "Directory (default <store>/bench-disk)");
  disk->add_option("--watts", benchWatts, "Power draw for the energy row");
  disk->add_option("--run-id", diskArgs.runId, "Name for the run report");
  DfsioArgs dfsioArgs;
  auto* dfsio = bench->add_subcommand("dfsio", "TestDFSIO-style block store throughput");
  dfsio->add_option("--op", dfsioArgs.op, "write or read")->check(CLI::IsMember({"write", "read"}));
  dfsio->add_option("--mappers", dfsioArgs.mappers, "Tasks (default one per node)")->check(CLI::PositiveNumber);
  dfsio->add_option("--size", dfsioArgs.size, "Bytes per task")->transform(CLI::AsSizeValue(false));
  dfsio->add_option("--watts", benchWatts, "Power draw for the energy row");
  dfsio->add_option("--run-id", dfsioArgs.runId, "Name for the run report");
  flags.bind(dfsio, "--workers", "workers", "Worker threads");
  add_write_flags(dfsio);

  // report
  std::string reportId, reportFormat = "doc";
  std::optional<double> reportWatts;
  auto* report = app.add_subcommand("report", "Render a stored run report");
  report->add_option("--run", reportId, "Run id")->required();
  report->add_option("--format", reportFormat, "csv or doc")->check(CLI::IsMember({"csv", "doc"}));
  report->add_option("--watts", reportWatts, "Power draw; adds joules = watts x wall seconds");

  // store ls | digest
  auto* storeCmd = app.add_subcommand("store", "Inspect the block store");
  storeCmd->require_subcommand(1);
  std::string lsPrefix = "/", digestPath;
  auto* ls = storeCmd->add_subcommand("ls", "List stored files");
  ls->add_option("prefix", lsPrefix, "Path prefix");
  auto* digest = storeCmd->add_subcommand("digest", "FNV-1a digest of a stored file");
  digest->add_option("path", digestPath, "Store path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    const Settings s = resolve_settings(flags, storeOpt, nodesOpt, configOpt);
    if (generate->parsed()) return cmd_generate(s, gen, out);
    if (search->parsed() || stats->parsed()) {
      runArgs.watts = runWatts;
      return cmd_run(s, search->parsed() ? "search" : "stats", runArgs, out);
    }
    if (disk->parsed()) {
      diskArgs.watts = benchWatts;
      return cmd_bench_disk(s, diskArgs, out);
    }
    if (dfsio->parsed()) {
      dfsioArgs.watts = benchWatts;
      return cmd_bench_dfsio(s, dfsioArgs, out);
    }
    if (report->parsed()) return cmd_report(s, reportId, reportFormat, reportWatts, out);
    if (ls->parsed()) return cmd_store_ls(s, lsPrefix, out);
    if (digest->parsed()) return cmd_store_digest(s, digestPath, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidConfig ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace skymr::cli
