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

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "../support/temp_dir.hpp"
#include "json.hpp"
#include "skymr/apps/catalog.hpp"
#include "skymr/apps/records.hpp"
#include "skymr/cli/cli.hpp"
#include "skymr/cli/settings.hpp"
#include "skymr/common/error.hpp"
#include "skymr/dfs/block_store.hpp"
#include "skymr/metering/report.hpp"
#include "skymr/mr/spill.hpp"

namespace {

using namespace skymr;
using nlohmann::json;
namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  skymr::testing::TempDir dir{"cli"};

  std::string store() const { return (dir.path() / "store").string(); }

  Result cli(std::vector<std::string> args, bool withStore = true) {
    std::vector<std::string> argv = {"skymr"};
    if (withStore) {
      argv.push_back("--store");
      argv.push_back(store());
    }
    argv.insert(argv.end(), args.begin(), args.end());
    std::vector<const char*> ptrs;
    for (auto& a : argv) ptrs.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(ptrs.size()), ptrs.data(), out, err);
    return {code, out.str(), err.str()};
  }

  json report(const std::string& id) {
    std::ifstream in(dir.path() / "store" / "runs" / id / "report.json");
    EXPECT_TRUE(in.good()) << id;
    return json::parse(in);
  }

  std::string config_file(const std::string& text) {
    const fs::path p = dir.path() / "skymr.conf";
    std::ofstream(p) << text;
    return p.string();
  }
};

std::string line_with(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.rfind(prefix, 0) == 0) return line;
  return {};
}

TEST_F(CliTest, GenerateIsDeterministic) {
  ASSERT_EQ(cli({"generate", "--objects", "1000", "--seed", "42", "--out", "/a"}).code, 0);
  ASSERT_EQ(cli({"generate", "--objects", "1000", "--seed", "42", "--out", "/b"}).code, 0);
  const auto a = cli({"store", "digest", "/a"}), b = cli({"store", "digest", "/b"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out.substr(0, 16), b.out.substr(0, 16));
  const auto c = cli({"generate", "--objects", "1000", "--seed", "43", "--out", "/c"});
  EXPECT_NE(line_with(c.out, "digest:"), line_with(cli({"generate", "--objects", "1000", "--seed", "42", "--out", "/d"}).out, "digest:"));
}

TEST_F(CliTest, GenerateEmptyAndUsageErrors) {
  const auto empty = cli({"generate", "--objects", "0", "--out", "/e"});
  EXPECT_EQ(empty.code, 0) << empty.err;
  dfs::ClusterSpec spec;
  spec.rootDir = dir.path() / "store" / "dfs";
  dfs::BlockStore st(spec);
  ASSERT_TRUE(st.exists("/e"));
  EXPECT_EQ(st.stat("/e")->length, 0u);

  EXPECT_EQ(cli({"generate", "--objects", "10"}).code, cli::kExitUsage);
  EXPECT_EQ(cli({}).code, cli::kExitUsage);
  EXPECT_EQ(cli({"run"}).code, cli::kExitUsage);
  EXPECT_EQ(cli({"run", "search", "--codec", "zip"}).code, cli::kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, 0);
  // Writing the same path twice is a runtime error.
  EXPECT_EQ(cli({"generate", "--objects", "1", "--out", "/e"}).code, cli::kExitRuntime);
  // Missing catalog.
  EXPECT_EQ(cli({"run", "search", "--catalog", "/none"}).code, cli::kExitRuntime);
}

TEST_F(CliTest, CompressionShrinksReducerOutput) {
  ASSERT_EQ(cli({"generate", "--objects", "20000", "--seed", "3", "--clustering", "0.05", "--out", "/catalog"}).code, 0);
  const auto plain = cli({"run", "search", "--theta", "30", "--replication", "3", "--codec", "none", "--run-id", "plain"});
  ASSERT_EQ(plain.code, 0) << plain.err;
  const auto lz = cli({"run", "search", "--theta", "30", "--replication", "3", "--codec", "lz", "--run-id", "lz"});
  ASSERT_EQ(lz.code, 0) << lz.err;
  const json p = report("plain"), z = report("lz");
  EXPECT_EQ(p["details"]["job"]["output_bytes"], z["details"]["job"]["output_bytes"]);
  EXPECT_EQ(p["details"]["job"]["output_digest"], z["details"]["job"]["output_digest"]);
  EXPECT_LT(z["details"]["job"]["output_stored_bytes"].get<std::uint64_t>(),
            p["details"]["job"]["output_stored_bytes"].get<std::uint64_t>());
  EXPECT_LT(z["phases"]["dfs_write"]["disk_write_bytes"].get<std::uint64_t>(),
            p["phases"]["dfs_write"]["disk_write_bytes"].get<std::uint64_t>());
  EXPECT_EQ(z["config"]["codec"], "lz");
}

TEST_F(CliTest, WorkerCountDoesNotChangeOutput) {
  ASSERT_EQ(cli({"generate", "--objects", "5000", "--out", "/catalog"}).code, 0);
  ASSERT_EQ(cli({"--config", config_file("split.size = 57000\n"), "run", "search", "--theta", "30", "--workers", "1",
                 "--run-id", "w1"})
                .code,
            0);
  ASSERT_EQ(cli({"--config", config_file("split.size = 57000\n"), "run", "search", "--theta", "30", "--workers", "8",
                 "--run-id", "w8"})
                .code,
            0);
  const json a = report("w1"), b = report("w8");
  EXPECT_EQ(a["details"]["job"]["output_digest"], b["details"]["job"]["output_digest"]);
  EXPECT_EQ(a["details"]["job"]["map_tasks"].size(), 5u);  // 285000 / 57000
  for (const auto& phase : {"map", "shuffle", "reduce", "dfs_read", "dfs_write"})
    for (const auto& counter : {"disk_read_bytes", "disk_write_bytes", "net_local_bytes", "net_remote_bytes"})
      EXPECT_EQ(a["phases"][phase][counter], b["phases"][phase][counter]) << phase << " " << counter;
}

TEST_F(CliTest, StatsOnFixture) {
  dfs::ClusterSpec spec;
  spec.rootDir = dir.path() / "store" / "dfs";
  {
    dfs::BlockStore st(spec);
    auto at = [](std::uint64_t id, double ra, double dec) {
      geo::SkyObject o;
      o.id = id;
      o.ra = ra;
      o.dec = dec;
      return o;
    };
    metering::Meter m;
    st.write_file("/catalog",
                  apps::encode_catalog({at(0, 40.3, 10.3), at(1, 40.3, 10.3 + 14.99 / 3600), at(2, 120.5, -30.4),
                                        at(3, 120.5, -30.4 + 29.99 / 3600), at(4, 250.1, 60.7),
                                        at(5, 250.1, 60.7 + 44.99 / 3600)}),
                  0, {}, m);
  }
  const auto r = cli({"run", "stats", "--run-id", "st"});
  ASSERT_EQ(r.code, 0) << r.err;
  apps::HistogramLine want;
  want.histogram.counts[14] = want.histogram.counts[29] = want.histogram.counts[44] = 1;
  EXPECT_EQ(line_with(r.out, "-1 -1") + "\n", apps::format_histogram_line(want));
  EXPECT_EQ(report("st")["details"]["pairs_within_60"], 3);
}

TEST_F(CliTest, RunReportCoversPhasesAndClasses) {
  ASSERT_EQ(cli({"generate", "--objects", "3000", "--out", "/catalog"}).code, 0);
  ASSERT_EQ(cli({"run", "search", "--theta", "60", "--watts", "40", "--run-id", "r"}).code, 0);
  const json doc = report("r");
  for (const auto& phase : {"map", "shuffle", "reduce", "dfs_read", "dfs_write", "bench"})
    EXPECT_TRUE(doc["phases"].contains(phase)) << phase;
  std::set<std::string> classes;
  for (const auto& row : doc["amdahl"]) classes.insert(row["class"].get<std::string>());
  EXPECT_EQ(classes, (std::set<std::string>{"mapper", "reducer", "dfs-read", "dfs-write"}));
  EXPECT_NEAR(doc["energy"]["joules"].get<double>(), 40.0 * doc["wall_seconds"].get<double>(), 1e-9);
  EXPECT_TRUE(fs::exists(dir.path() / "store" / "runs" / "r" / "report.csv"));
  // Default 64 MiB splits of 65-byte map records at 10% growth.
  const auto rec = mr::recommend_spill_config(64u << 20, 57, 65, 1.10, 0.8);
  EXPECT_EQ(doc["details"]["sort_buffer"]["recommended_bytes"], rec.totalBufferBytes);
  EXPECT_EQ(doc["details"]["sort_buffer"]["configured_bytes"], 125u << 20);

  const auto csv = cli({"report", "--run", "r", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), metering::kCsvHeader);
  EXPECT_NE(csv.out.find("\nclass,mapper,"), std::string::npos);
  EXPECT_NE(csv.out.find("\nphase,shuffle,"), std::string::npos);

  EXPECT_EQ(cli({"report", "--run", "missing"}).code, cli::kExitRuntime);
  EXPECT_EQ(cli({"--nodes", "8", "run", "search", "--run-id", "r"}).code, cli::kExitRuntime);  // id taken
}

// A hand-built report: 100 s, disk only.
void write_fixture_report(const fs::path& runs) {
  metering::RunReport r;
  r.runId = "fixture";
  r.command = "fixture";
  r.wallSeconds = 100.0;
  r.meter[metering::Phase::kMap][metering::Counter::kDiskWrite] = 1'000'000;
  r.meter[metering::Phase::kMap][metering::Counter::kKeyComparisons] = 5000;
  r.meter[metering::Phase::kMap].wallSeconds = 2.0;
  r.refresh_amdahl();
  fs::create_directories(runs / "fixture");
  std::ofstream(runs / "fixture" / "report.json") << to_json(r).dump();
}

TEST_F(CliTest, ReportEnergyAndZeroNetwork) {
  write_fixture_report(dir.path() / "store" / "runs");
  const auto doc = cli({"report", "--run", "fixture", "--watts", "40"});
  ASSERT_EQ(doc.code, 0) << doc.err;
  const json j = json::parse(doc.out);
  EXPECT_DOUBLE_EQ(j["energy"]["joules"].get<double>(), 4000.0);
  for (const auto& row : j["amdahl"])
    if (row["class"] == "mapper") EXPECT_EQ(row["ad"], row["adn"]);

  const auto csv = cli({"report", "--run", "fixture", "--format", "csv", "--watts", "40"});
  EXPECT_NE(csv.out.find(",4000\n"), std::string::npos) << csv.out;
}

TEST_F(CliTest, BenchDiskAccounting) {
  const auto r = cli({"bench", "disk", "--files", "10", "--size", "1MiB", "--mode", "buffered", "--run-id", "d"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = report("d");
  EXPECT_EQ(doc["details"]["files"].size(), 10u);
  EXPECT_EQ(doc["details"]["total_bytes"], 10u << 20);
  EXPECT_EQ(doc["phases"]["bench"]["disk_write_bytes"], 10u << 20);
  EXPECT_EQ(cli({"bench", "disk", "--files", "2", "--size", "64KiB", "--mode", "unbuffered"}).code, 0);
}

TEST_F(CliTest, BenchDfsioAccounting) {
  const std::string conf = config_file("block.size = 1MiB\n");
  const auto w = cli({"--config", conf, "bench", "dfsio", "--op", "write", "--mappers", "3", "--size", "4MiB",
                      "--replication", "3", "--run-id", "w"});
  ASSERT_EQ(w.code, 0) << w.err;
  const std::uint64_t L = 4u << 20;
  // Three replicas of three files, plus a 4-byte CRC per 4 KiB chunk.
  EXPECT_EQ(report("w")["phases"]["dfs_write"]["disk_write_bytes"], 3 * 3 * (L + 4 * (L / 4096)));

  const auto r = cli({"--config", conf, "bench", "dfsio", "--op", "read", "--mappers", "3", "--size", "4MiB",
                      "--run-id", "r"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(report("r")["phases"]["dfs_read"]["net_remote_bytes"], 0);
  EXPECT_EQ(report("r")["phases"]["dfs_read"]["net_local_bytes"], 3 * L);
}

TEST_F(CliTest, ConfigPrecedence) {
  ASSERT_EQ(cli({"generate", "--objects", "10", "--out", "/catalog", "--run-id", "defaults"}).code, 0);
  EXPECT_EQ(report("defaults")["config"]["replication"], "3");
  EXPECT_EQ(report("defaults")["config"]["io.sort.mb"], "125");
  EXPECT_EQ(report("defaults")["config"]["io.bytes.per.checksum"], "4096");

  const std::string conf = config_file("# desk settings\nreplication = 1\nio.sort.mb=64\n");
  ASSERT_EQ(cli({"--config", conf, "generate", "--objects", "10", "--out", "/c2", "--run-id", "file"}).code, 0);
  EXPECT_EQ(report("file")["config"]["replication"], "1");
  EXPECT_EQ(report("file")["config"]["io.sort.mb"], "64");

  ASSERT_EQ(cli({"--config", conf, "generate", "--objects", "10", "--out", "/c3", "--replication", "3", "--run-id",
                 "flag"})
                .code,
            0);
  EXPECT_EQ(report("flag")["config"]["replication"], "3");

  ::setenv("SKYMR_CONFIG", conf.c_str(), 1);
  const auto env = cli({"generate", "--objects", "10", "--out", "/c4", "--run-id", "env"});
  ::unsetenv("SKYMR_CONFIG");
  ASSERT_EQ(env.code, 0);
  EXPECT_EQ(report("env")["config"]["replication"], "1");

  EXPECT_EQ(cli({"--config", config_file("colour = blue\n"), "generate", "--objects", "1", "--out", "/x"}).code,
            cli::kExitUsage);
  EXPECT_EQ(cli({"--config", config_file("just words\n"), "generate", "--objects", "1", "--out", "/x"}).code,
            cli::kExitUsage);
}

TEST(Settings, ParsesSizesAndConfigLines) {
  EXPECT_EQ(cli::parse_size("4096"), 4096u);
  EXPECT_EQ(cli::parse_size("64MiB"), 64u << 20);
  EXPECT_EQ(cli::parse_size("2KB"), 2048u);
  EXPECT_THROW(cli::parse_size("lots"), Error);
  EXPECT_THROW(cli::parse_size("-3"), Error);
  const auto kv = cli::parse_config("a=1\n  # note\n\nb = two words # trailing\n", "t");
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "two words");
  try {
    cli::parse_config("ok=1\n=2\n", "file.conf");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("file.conf:2"), std::string::npos);
  }
  cli::Settings s;
  EXPECT_THROW(s.apply("replication", "-1"), Error);
  EXPECT_THROW(s.apply("codec", "gzip"), Error);
  s.apply("io.sort.record.percent", "0.3");
  EXPECT_DOUBLE_EQ(s.recordPercent, 0.3);
}

}  // namespace
