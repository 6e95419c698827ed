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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "skymr/common/error.hpp"
#include "skymr/dfs/block_store.hpp"
#include "skymr/mr/engine.hpp"
#include "skymr/mr/segment.hpp"
#include "skymr/mr/spill.hpp"
#include "../support/temp_dir.hpp"

namespace {

using namespace skymr;
using namespace skymr::mr;
using metering::Counter;
using metering::Meter;
using metering::Phase;
namespace fs = std::filesystem;

constexpr std::uint64_t MiB = 1ULL << 20;

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no skymr::Error thrown";
  return ErrorCode::kIoError;
}

Bytes be_key(std::uint64_t v) {
  Bytes k(8);
  put_be(k.data(), v);
  return k;
}

Bytes as_bytes_vec(std::string_view s) {
  const ByteView v = as_bytes(s);
  return Bytes(v.begin(), v.end());
}

// ---------------------------------------------------------------- spill sizing

TEST(SpillConfig, Capacities) {
  SpillConfig c{1000, 0.2, 0.8};
  EXPECT_EQ(c.data_capacity(), 800u);
  EXPECT_EQ(c.meta_capacity(), 12u);  // 200 / 16
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(code_of([] { SpillConfig{1000, 0.0, 0.8}.validate(); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { SpillConfig{1000, 0.2, 0.0}.validate(); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { SpillConfig{10, 0.2, 0.8}.validate(); }), ErrorCode::kInvalidConfig);  // meta cap 0
  EXPECT_NO_THROW((SpillConfig{1000, 0.2, 1.0}.validate()));
}

// Independent restatement of the sizing rule used to check minimality.
bool fits(std::uint64_t totalBytes, double rp, double sp, std::uint64_t dataNeed, std::uint64_t metaNeed) {
  const double dataCap = std::floor(static_cast<double>(totalBytes) * (1 - rp));
  const double metaCap = std::floor(static_cast<double>(totalBytes) * rp / 16);
  return sp * dataCap >= static_cast<double>(dataNeed) && sp * metaCap * 16 >= static_cast<double>(metaNeed);
}

TEST(RecommendSpill, SixtyFourMegSplitConfiguration) {
  const auto rec = recommend_spill_config(64 * MiB, 57, 63, 1.10, 0.8);
  // ~77 MB of output, ~20 MB of metadata, 0.2 record percent, ~125 MB buffer.
  EXPECT_NEAR(static_cast<double>(rec.dataNeedBytes) / MiB, 77.0, 1.0);
  EXPECT_NEAR(static_cast<double>(rec.metaNeedBytes) / MiB, 20.0, 0.5);
  EXPECT_DOUBLE_EQ(rec.recordPercent, 0.2);
  EXPECT_GE(rec.totalBufferBytes, 123 * MiB);
  EXPECT_LE(rec.totalBufferBytes, 126 * MiB);
  EXPECT_EQ(rec.totalBufferBytes % MiB, 0u);
  EXPECT_TRUE(fits(rec.totalBufferBytes, rec.recordPercent, 0.8, rec.dataNeedBytes, rec.metaNeedBytes));
  EXPECT_FALSE(fits(rec.totalBufferBytes - MiB, rec.recordPercent, 0.8, rec.dataNeedBytes, rec.metaNeedBytes));
}

TEST(RecommendSpill, ExactIntegerNeeds) {
  const auto rec = recommend_spill_config(64 * MiB, 57, 63, 1.0, 1.0);
  const std::uint64_t records = 67108864ULL / 57;
  EXPECT_EQ(records, 1177348u);
  EXPECT_EQ(rec.dataNeedBytes, 74172924u);
  EXPECT_EQ(rec.metaNeedBytes, 18837568u);
  EXPECT_EQ(rec.dataNeedBytes, records * 63);
}

TEST(RecommendSpill, SingleRecordFloorsAtOneMegabyte) {
  const auto rec = recommend_spill_config(57, 57, 63, 1.0, 1.0);
  EXPECT_EQ(rec.records, 1u);
  EXPECT_EQ(rec.dataNeedBytes, 63u);
  EXPECT_EQ(rec.metaNeedBytes, 16u);
  EXPECT_EQ(rec.totalBufferBytes, MiB);
}

TEST(RecommendSpill, RejectsBadInputs) {
  EXPECT_EQ(code_of([] { recommend_spill_config(0, 57, 63, 1.1, 0.8); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { recommend_spill_config(100, 57, 63, 0.9, 0.8); }), ErrorCode::kInvalidConfig);
}

TEST(RecommendSpill, AlwaysMinimalAcrossShapes) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    const std::uint64_t in = 8 + rng() % 200, out = 8 + rng() % 200;
    const std::uint64_t split = (1 + rng() % 64) * MiB;
    const double growth = 1.0 + (rng() % 50) / 100.0, sp = 0.5 + (rng() % 51) / 100.0;
    const auto rec = recommend_spill_config(split, in, out, growth, sp);
    EXPECT_TRUE(fits(rec.totalBufferBytes, rec.recordPercent, sp, rec.dataNeedBytes, rec.metaNeedBytes));
    if (rec.totalBufferBytes > MiB)
      EXPECT_FALSE(fits(rec.totalBufferBytes - MiB, rec.recordPercent, sp, rec.dataNeedBytes, rec.metaNeedBytes));
  }
}

// ---------------------------------------------------------------- splits

dfs::StoredFile fake_file(std::uint64_t length, std::uint64_t blockBytes) {
  dfs::StoredFile f;
  f.path = "/in";
  f.length = f.storedLength = length;
  for (std::uint64_t off = 0, i = 0; off < length; off += blockBytes, ++i)
    f.blocks.push_back({"b" + std::to_string(i), off, std::min(blockBytes, length - off),
                        dfs::place_replicas(i, 0, 8, 3)});
  return f;
}

TEST(PlanSplits, Examples) {
  EXPECT_EQ(plan_splits(fake_file(64 * MiB, 64 * MiB), 64 * MiB, 64).size(), 1u);

  const auto three = plan_splits(fake_file(192 * MiB, 64 * MiB), 64 * MiB, 64);
  ASSERT_EQ(three.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(three[i].offset, i * 64 * MiB);
    EXPECT_EQ(three[i].length, 64 * MiB);
    EXPECT_EQ(three[i].hosts, dfs::place_replicas(i, 0, 8, 3));
  }

  const auto two = plan_splits(fake_file(100 * MiB, 64 * MiB), 64 * MiB, 64);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].length, 64 * MiB);
  EXPECT_EQ(two[1].offset, 64 * MiB);
  EXPECT_EQ(two[1].length, 36 * MiB);
}

TEST(PlanSplits, CoversFileRecordAligned) {
  const std::uint64_t rec = 57, split = 57 * 1000;
  const auto f = fake_file(57 * 12345, 50000);
  const auto splits = plan_splits(f, split, rec);
  EXPECT_EQ(splits.size(), (f.length + split - 1) / split);
  std::uint64_t next = 0;
  for (const auto& s : splits) {
    EXPECT_EQ(s.offset, next);
    EXPECT_EQ(s.offset % rec, 0u);
    EXPECT_EQ(s.length % rec, 0u);
    next += s.length;
    // localHosts must hold every overlapped block.
    for (const auto& b : f.blocks) {
      if (b.offset + b.length <= s.offset || b.offset >= s.offset + s.length) continue;
      for (auto n : s.localHosts) EXPECT_NE(std::find(b.replicas.begin(), b.replicas.end(), n), b.replicas.end());
    }
  }
  EXPECT_EQ(next, f.length);
}

TEST(PlanSplits, Errors) {
  EXPECT_EQ(code_of([] { plan_splits(fake_file(1000, 512), 570, 57); }), ErrorCode::kMalformedInput);
  EXPECT_EQ(code_of([] { plan_splits(fake_file(570, 512), 100, 57); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { plan_splits(fake_file(570, 512), 0, 57); }), ErrorCode::kInvalidConfig);
  EXPECT_TRUE(plan_splits(fake_file(0, 512), 57, 57).empty());
}

TEST(PlanSplits, CompressedFileIsOneSplit) {
  auto f = fake_file(57 * 100, 1000);
  f.codec = dfs::Codec::kLz;
  const auto splits = plan_splits(f, 57, 57);
  ASSERT_EQ(splits.size(), 1u);
  EXPECT_TRUE(splits[0].wholeFile);
  EXPECT_EQ(splits[0].length, f.length);
}

// ---------------------------------------------------------------- partition / compare

TEST(Partitioner, BlockKeyFormula) {
  for (std::uint32_t zone : {0u, 7u, 90u, 179u})
    for (std::uint32_t block : {0u, 1u, 359u}) {
      Bytes k(8);
      put_be(k.data(), zone);
      put_be(k.data() + 4, block);
      for (std::uint32_t r : {1u, 3u, 8u})
        EXPECT_EQ(default_partition(k, r), (zone * 2654435761ULL + block) % r);
    }
  const Bytes other = {1, 2, 3};
  EXPECT_EQ(default_partition(other, 5), fnv1a64(other) % 5);
}

TEST(Comparator, LexicographicIsNumericForBigEndian) {
  EXPECT_LT(lexicographic_compare(be_key(1), be_key(256)), 0);
  EXPECT_GT(lexicographic_compare(be_key(1ULL << 40), be_key(255)), 0);
  EXPECT_EQ(lexicographic_compare(be_key(9), be_key(9)), 0);
  const Bytes a = {1, 2}, ab = {1, 2, 0};
  EXPECT_LT(lexicographic_compare(a, ab), 0);
  EXPECT_EQ(lexicographic_compare(ByteView{}, ByteView{}), 0);
}

// ---------------------------------------------------------------- segments

TEST(Segment, RoundTripWithEmptyPartitions) {
  skymr::testing::TempDir dir("seg");
  const fs::path p = dir.path() / "s.seg";
  SegmentWriter w(p, 4);
  w.add(1, as_bytes("k1"), as_bytes("v1"));
  w.add(1, as_bytes("k2"), as_bytes(""));
  w.add(3, as_bytes("k3"), as_bytes("value"));
  const auto total = w.finish();
  EXPECT_EQ(fs::file_size(p), total);

  const auto idx = read_segment_index(p);
  EXPECT_EQ(idx.partitions(), 4u);
  EXPECT_EQ(idx.partition_bytes(0), 0u);
  EXPECT_EQ(idx.partition_bytes(1), 2 * 12u + 4 + 2);
  EXPECT_EQ(idx.partition_bytes(2), 0u);
  EXPECT_EQ(idx.partition_bytes(3), 12u + 2 + 5);
  EXPECT_EQ(parse_segment_index(read_all(p)).offsets, idx.offsets);

  const Bytes part = read_partition(p, idx, 3);
  RecordCursor c(part);
  SegmentRecord r;
  ASSERT_TRUE(c.next(r));
  EXPECT_EQ(r.partition, 3u);
  EXPECT_EQ(as_chars(r.key), "k3");
  EXPECT_EQ(as_chars(r.value), "value");
  EXPECT_FALSE(c.next(r));
}

TEST(Segment, RejectsDisorderAndDamage) {
  skymr::testing::TempDir dir("seg");
  SegmentWriter w(dir.path() / "a.seg", 2);
  w.add(1, as_bytes("k"), as_bytes("v"));
  EXPECT_EQ(code_of([&] { w.add(0, as_bytes("k"), as_bytes("v")); }), ErrorCode::kOutOfRange);
  w.finish();
  Bytes img = read_all(dir.path() / "a.seg");
  img.back() ^= 1;
  EXPECT_EQ(code_of([&] { parse_segment_index(img); }), ErrorCode::kParseError);
  const Bytes truncated = {1, 0, 0, 0, 5, 0};
  RecordCursor c(truncated);
  SegmentRecord r;
  EXPECT_EQ(code_of([&] { c.next(r); }), ErrorCode::kParseError);
}

// ---------------------------------------------------------------- map task

struct StoreFixture : ::testing::Test {
  skymr::testing::TempDir dir{"mr"};
  std::unique_ptr<dfs::BlockStore> store;

  void SetUp() override { open(4, 1 << 20); }
  void open(std::uint32_t nodes, std::uint64_t block) {
    dfs::ClusterSpec s;
    s.nodeCount = nodes;
    s.replication = 3;
    s.blockBytes = block;
    s.bytesPerChecksum = 512;
    s.rootDir = dir.path() / ("store" + std::to_string(nodes) + "-" + std::to_string(block));
    store = std::make_unique<dfs::BlockStore>(s);
  }

  // n records of `size` bytes; the first 8 bytes are a pseudo-random key.
  Bytes records(std::size_t n, std::size_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Bytes out(n * size);
    for (std::size_t i = 0; i < n; ++i) {
      put_be(out.data() + i * size, rng() % 1000);
      for (std::size_t j = 8; j < size; ++j) out[i * size + j] = static_cast<std::uint8_t>(i + j);
    }
    return out;
  }

  dfs::StoredFile put(const std::string& path, const Bytes& data, std::uint32_t writer = 0) {
    Meter m;
    return store->write_file(path, data, writer, {}, m);
  }
};

JobSpec identity_spec(std::uint64_t recordBytes, std::uint32_t reducers = 1) {
  JobSpec s;
  s.name = "identity";
  s.inputs = {"/in"};
  s.recordBytes = recordBytes;
  s.splitBytes = recordBytes * 1000;
  s.numReducers = reducers;
  s.outputPrefix = "/out";
  s.mapper = [](ByteView rec, MapContext& ctx) { ctx.emit(rec.first(8), rec.subspan(8)); };
  s.reducer = [](ByteView key, const std::vector<ByteView>& values, ReduceContext& ctx) {
    for (auto v : values) {
      Bytes row(key.begin(), key.end());
      append(row, v);
      ctx.write(row);
    }
  };
  s.spill = {1 << 20, 0.2, 0.8};
  return s;
}

void expect_segment_sorted(const fs::path& path, const Comparator& cmp) {
  const Bytes img = read_all(path);
  const auto idx = parse_segment_index(img);
  for (std::uint32_t p = 0; p < idx.partitions(); ++p) {
    RecordCursor c(ByteView(img).subspan(idx.offsets[p], idx.partition_bytes(p)));
    SegmentRecord r, prev;
    bool first = true;
    while (c.next(r)) {
      EXPECT_EQ(r.partition, p);
      if (!first) EXPECT_LE(cmp(prev.key, r.key), 0);
      prev = r;
      first = false;
    }
  }
}

TEST_F(StoreFixture, MapEmptySplitCountsOneSpill) {
  put("/in", {});
  JobSpec spec = identity_spec(32);
  InputSplit split = whole_file_split(*store->stat("/in"));
  Meter m;
  const auto res = run_map_task(split, 0, spec, *store, dir.path() / "work", m);
  EXPECT_EQ(res.report.spillCount, 1u);
  EXPECT_FALSE(res.report.merged);
  EXPECT_EQ(res.report.outputBytes, 0u);
  EXPECT_EQ(read_segment_index(res.segment.path).record_bytes(), 0u);
}

TEST_F(StoreFixture, MapUnderThresholdSpillsOnce) {
  const Bytes data = records(100, 32, 1);
  put("/in", data);
  JobSpec spec = identity_spec(32);
  const auto splits = plan_splits(*store->stat("/in"), spec.splitBytes, 32);
  Meter m;
  const auto res = run_map_task(splits[0], 0, spec, *store, dir.path() / "work", m);
  EXPECT_EQ(res.report.spillCount, 1u);
  EXPECT_FALSE(res.report.merged);
  EXPECT_EQ(res.report.outputRecords, 100u);
  EXPECT_EQ(res.report.outputBytes, 100u * (12 + 32));
  expect_segment_sorted(res.segment.path, spec.comparator);
  // Disk writes of the map phase are the segment file itself.
  EXPECT_EQ(m.snapshot()[Phase::kMap][Counter::kDiskWrite], fs::file_size(res.segment.path));
  EXPECT_GT(m.snapshot()[Phase::kMap][Counter::kKeyComparisons], 0u);
}

TEST_F(StoreFixture, MapSpillsAndMergesAtTwoAndAHalfThresholds) {
  // 32-byte records; data region 8000 B, spill at 0.8 -> 6400 B = 200 records.
  // Metadata region holds 500 records, so only the data trigger fires.
  JobSpec spec = identity_spec(32, 3);
  spec.spill = {16000, 0.5, 0.8};
  const std::uint64_t trigger = static_cast<std::uint64_t>(0.8 * 8000);
  const std::size_t n = static_cast<std::size_t>(2.5 * trigger / 32);
  ASSERT_EQ(n, 500u);
  const Bytes data = records(n, 32, 2);
  put("/in", data);
  Meter m;
  const auto res = run_map_task(whole_file_split(*store->stat("/in")), 0, spec, *store, dir.path() / "w", m);
  const std::size_t perSpill = (trigger + 31) / 32;
  EXPECT_EQ(res.report.spillCount, (n + perSpill - 1) / perSpill);
  EXPECT_EQ(res.report.spillCount, 3u);
  EXPECT_TRUE(res.report.merged);
  expect_segment_sorted(res.segment.path, spec.comparator);

  // Oracle: stable sort of (partition, key) over the emitted records.
  struct Rec {
    std::uint32_t p;
    Bytes kv;
  };
  std::vector<Rec> want;
  for (std::size_t i = 0; i < n; ++i) {
    ByteView r(data.data() + i * 32, 32);
    want.push_back({default_partition(r.first(8), 3), Bytes(r.begin(), r.end())});
  }
  std::stable_sort(want.begin(), want.end(), [](const Rec& a, const Rec& b) {
    if (a.p != b.p) return a.p < b.p;
    return lexicographic_compare(ByteView(a.kv).first(8), ByteView(b.kv).first(8)) < 0;
  });
  const Bytes img = read_all(res.segment.path);
  RecordCursor c(ByteView(img).first(parse_segment_index(img).record_bytes()));
  SegmentRecord r;
  std::size_t i = 0;
  while (c.next(r)) {
    ASSERT_LT(i, want.size());
    EXPECT_EQ(r.partition, want[i].p);
    Bytes kv(r.key.begin(), r.key.end());
    append(kv, r.value);
    EXPECT_EQ(kv, want[i].kv) << i;
    ++i;
  }
  EXPECT_EQ(i, n);
  // Spill files are gone after the merge.
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path() / "w")) ++files;
  EXPECT_EQ(files, 1u);
}

TEST_F(StoreFixture, MetadataTriggerFiresIndependently) {
  // Data region huge, metadata region 50 records -> spill every 40 records.
  JobSpec spec = identity_spec(32);
  spec.spill = {8000, 0.1, 0.8};
  ASSERT_EQ(spec.spill.meta_capacity(), 50u);
  put("/in", records(100, 32, 3));
  Meter m;
  const auto res = run_map_task(whole_file_split(*store->stat("/in")), 0, spec, *store, dir.path() / "w", m);
  EXPECT_EQ(res.report.spillCount, 3u);  // 40 + 40 + 20
}

TEST_F(StoreFixture, RecordLargerThanBufferIsRejected) {
  JobSpec spec = identity_spec(32);
  spec.spill = {100, 0.5, 0.8};  // 50-byte data region
  spec.mapper = [](ByteView, MapContext& ctx) {
    const Bytes big(64, 1);
    ctx.emit(ByteView(big).first(8), ByteView(big).subspan(8));
  };
  put("/in", records(1, 32, 4));
  Meter m;
  EXPECT_EQ(code_of([&] { run_map_task(whole_file_split(*store->stat("/in")), 0, spec, *store, dir.path() / "w", m); }),
            ErrorCode::kRecordTooLarge);
}

// ---------------------------------------------------------------- shuffle

SegmentRef make_segment(const fs::path& path, std::size_t mapIndex, std::uint32_t node,
                        const std::vector<std::pair<Bytes, Bytes>>& partition0) {
  SegmentWriter w(path, 2);
  for (const auto& [k, v] : partition0) w.add(0, k, v);
  w.add(1, as_bytes("zz"), as_bytes("other"));
  w.finish();
  return {mapIndex, node, path};
}

TEST(Shuffle, MergesThreeMappersInOrder) {
  skymr::testing::TempDir dir("shuf");
  std::vector<SegmentRef> segs;
  std::vector<Bytes> oracle;
  for (std::size_t m = 0; m < 3; ++m) {
    std::vector<std::pair<Bytes, Bytes>> kv;
    for (std::uint64_t k = 1; k <= 100; ++k) {
      kv.push_back({be_key(k), Bytes{static_cast<std::uint8_t>(m)}});
      oracle.push_back(be_key(k));
    }
    segs.push_back(make_segment(dir.path() / ("m" + std::to_string(m)), m, static_cast<std::uint32_t>(m), kv));
  }
  std::sort(oracle.begin(), oracle.end());
  JobSpec spec = identity_spec(16, 2);
  Meter meter;
  const auto res = shuffle_fetch(0, 0, segs, spec, meter);
  ASSERT_EQ(res.records.size(), 300u);
  for (std::size_t i = 0; i < 300; ++i) {
    EXPECT_EQ(res.records[i].key, oracle[i]);
    // Equal keys keep map order.
    EXPECT_EQ(res.records[i].value[0], i % 3);
  }
}

TEST(Shuffle, LocalityAccounting) {
  skymr::testing::TempDir dir("shuf");
  std::vector<std::pair<Bytes, Bytes>> kv = {{be_key(1), Bytes(20, 7)}, {be_key(2), Bytes(20, 8)}};
  // Maps 0 and 1 ran on node 5, map 2 on node 1; the reducer sits on node 5.
  std::vector<SegmentRef> segs = {make_segment(dir.path() / "a", 0, 5, kv), make_segment(dir.path() / "b", 1, 5, kv),
                                  make_segment(dir.path() / "c", 2, 1, kv)};
  const std::uint64_t S = read_segment_index(segs[0].path).partition_bytes(0);
  Meter meter;
  const auto res = shuffle_fetch(0, 5, segs, identity_spec(16, 2), meter);
  const auto snap = meter.snapshot()[Phase::kShuffle];
  EXPECT_EQ(snap[Counter::kNetLocal], 2 * S);
  EXPECT_EQ(snap[Counter::kNetRemote], S);
  EXPECT_EQ(snap[Counter::kNetLocal] + snap[Counter::kNetRemote], res.fetchedBytes);
}

TEST(Shuffle, SingleSegmentPassesThrough) {
  skymr::testing::TempDir dir("shuf");
  std::vector<std::pair<Bytes, Bytes>> kv = {{be_key(3), as_bytes_vec("x")}, {be_key(3), Bytes{}}, {be_key(9), Bytes{1, 2}}};
  const auto seg = make_segment(dir.path() / "a", 0, 0, kv);
  Meter meter;
  const auto res = shuffle_fetch(0, 0, {seg}, identity_spec(16, 2), meter);
  ASSERT_EQ(res.records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(res.records[i].key, kv[i].first);
    EXPECT_EQ(res.records[i].value, kv[i].second);
  }
  const auto idx = read_segment_index(seg.path);
  EXPECT_EQ(res.fetchedBytes, idx.partition_bytes(0));
}

TEST(Shuffle, MissingSegmentIsFetchError) {
  skymr::testing::TempDir dir("shuf");
  Meter meter;
  EXPECT_EQ(code_of([&] { shuffle_fetch(0, 0, {{0, 0, dir.path() / "nope"}}, identity_spec(16), meter); }),
            ErrorCode::kFetchError);
}

// ---------------------------------------------------------------- reduce

TEST_F(StoreFixture, ReduceGroupsEqualKeys) {
  const auto seg = make_segment(dir.path() / "a", 0, 0,
                                {{as_bytes_vec("a"), as_bytes_vec("1")},
                                 {as_bytes_vec("a"), as_bytes_vec("2")},
                                 {as_bytes_vec("b"), as_bytes_vec("3")}});
  JobSpec spec = identity_spec(16, 2);
  std::vector<std::size_t> sizes;
  spec.reducer = [&](ByteView, const std::vector<ByteView>& values, ReduceContext& ctx) {
    sizes.push_back(values.size());
    ctx.write(as_bytes("x"));
  };
  Meter m;
  const auto res = run_reduce_task(0, 1, {seg}, spec, *store, m);
  EXPECT_EQ(sizes, (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(res.output.path, "/out/part-00000");
  EXPECT_EQ(res.output.length, 2u);
}

TEST_F(StoreFixture, EmptyPartitionWritesEmptyFile) {
  skymr::testing::TempDir d2("seg");
  SegmentWriter w(d2.path() / "e", 3);
  w.finish();
  JobSpec spec = identity_spec(16, 3);
  int calls = 0;
  spec.reducer = [&](ByteView, const std::vector<ByteView>&, ReduceContext&) { ++calls; };
  Meter m;
  const auto res = run_reduce_task(2, 2, {{0, 0, d2.path() / "e"}}, spec, *store, m);
  EXPECT_EQ(calls, 0);
  EXPECT_TRUE(store->exists("/out/part-00002"));
  EXPECT_EQ(res.output.length, 0u);
}

// ---------------------------------------------------------------- jobs

TEST_F(StoreFixture, IdentityJobSortsInput) {
  const Bytes data = records(3000, 16, 5);
  put("/in", data);
  JobSpec spec = identity_spec(16);
  Meter m;
  const auto job = run_job(spec, *store, {}, m);
  EXPECT_EQ(job.mapTasks.size(), 3u);
  std::vector<Bytes> want;
  for (std::size_t i = 0; i < 3000; ++i) want.emplace_back(data.begin() + i * 16, data.begin() + (i + 1) * 16);
  std::stable_sort(want.begin(), want.end(), [](const Bytes& a, const Bytes& b) {
    return lexicographic_compare(ByteView(a).first(8), ByteView(b).first(8)) < 0;
  });
  Bytes flat;
  for (auto& w : want) append(flat, w);
  Meter r;
  EXPECT_EQ(store->read_file("/out/part-00000", 0, r), flat);
  EXPECT_EQ(job.mapOutputBytes, job.reduceInputBytes);
  EXPECT_EQ(job.mapOutputBytes, 3000u * (12 + 16));
  const auto shuffle = job.meter[Phase::kShuffle];
  EXPECT_EQ(shuffle[Counter::kNetLocal] + shuffle[Counter::kNetRemote], job.reduceInputBytes);
  // The job meter was merged into the caller's.
  EXPECT_TRUE(m.snapshot().same_counts(job.meter));
  // Intermediate files are cleaned up.
  for (std::uint32_t n = 0; n < 4; ++n) EXPECT_FALSE(fs::exists(store->node_dir(n) / "local" / "identity"));
}

TEST_F(StoreFixture, OutputIndependentOfWorkerCount) {
  put("/in", records(4000, 24, 6));
  std::set<std::uint64_t> digests;
  std::vector<metering::MeterSnapshot> meters;
  for (std::size_t workers : {1u, 3u, 8u}) {
    JobSpec spec = identity_spec(24, 5);
    spec.spill = {4000, 0.3, 0.8};  // force several spills per task
    spec.outputPrefix = "/out" + std::to_string(workers);
    Meter m;
    const auto job = run_job(spec, *store, {workers}, m);
    digests.insert(job.outputDigest);
    meters.push_back(job.meter);
    for (const auto& t : job.mapTasks) EXPECT_GT(t.spillCount, 1u);
  }
  EXPECT_EQ(digests.size(), 1u);
  EXPECT_EQ(meters[0][Phase::kMap][Counter::kKeyComparisons], meters[2][Phase::kMap][Counter::kKeyComparisons]);
}

TEST_F(StoreFixture, MapSegmentsStaySortedPerPartition) {
  put("/in", records(2000, 16, 8));
  JobSpec spec = identity_spec(16, 4);
  spec.spill = {3000, 0.25, 0.8};
  Meter m;
  const auto job = run_job(spec, *store, {.workers = 2, .keepIntermediate = true}, m);
  std::size_t checked = 0;
  for (std::uint32_t n = 0; n < 4; ++n) {
    const fs::path local = store->node_dir(n) / "local";
    if (!fs::exists(local)) continue;
    for (const auto& e : fs::recursive_directory_iterator(local))
      if (e.path().extension() == ".seg") {
        expect_segment_sorted(e.path(), spec.comparator);
        ++checked;
      }
  }
  EXPECT_EQ(checked, job.mapTasks.size());
}

TEST_F(StoreFixture, MapsRunWhereTheirBlocksLive) {
  open(8, 16 * 1024);
  const Bytes data = records(8 * 1024, 16, 9);  // 8 blocks of 16 KiB
  const auto file = put("/in", data, 3);
  JobSpec spec = identity_spec(16, 2);
  spec.splitBytes = 16 * 1024;
  ASSERT_EQ(file.blocks.size(), 8u);
  // Expected local tasks: every split whose blocks share at least one holder.
  std::size_t expectLocal = 0;
  for (const auto& b : file.blocks) expectLocal += b.replicas.empty() ? 0 : 1;
  Meter m;
  const auto job = run_job(spec, *store, {}, m);
  ASSERT_EQ(job.mapTasks.size(), 8u);
  std::size_t local = 0;
  for (const auto& t : job.mapTasks) {
    if (t.meter[Phase::kDfsRead][Counter::kNetRemote] == 0) ++local;
    EXPECT_EQ(t.dataLocal, t.meter[Phase::kDfsRead][Counter::kNetRemote] == 0);
  }
  EXPECT_GE(local, expectLocal);
  // Reducers round-robin over nodes.
  EXPECT_EQ(job.reduceTasks[0].node, 0u);
  EXPECT_EQ(job.reduceTasks[1].node, 1u);
}

TEST(Scheduler, SpreadsLoadAcrossReplicaHolders) {
  std::vector<InputSplit> splits(6);
  for (auto& s : splits) s.localHosts = s.hosts = {2, 4};
  const auto placed = schedule_maps(splits, 8);
  EXPECT_EQ(placed, (std::vector<std::uint32_t>{2, 4, 2, 4, 2, 4}));
  InputSplit orphan;
  EXPECT_EQ(schedule_maps({orphan}, 8), (std::vector<std::uint32_t>{0}));
}

TEST_F(StoreFixture, TaskErrorsCarryTaskIds) {
  put("/in", records(100, 16, 10));
  JobSpec spec = identity_spec(16, 2);
  spec.reducer = [](ByteView, const std::vector<ByteView>&, ReduceContext&) { throw std::runtime_error("boom"); };
  Meter m;
  try {
    run_job(spec, *store, {}, m);
    FAIL() << "expected failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTaskFailed);
    EXPECT_NE(std::string(e.what()).find("reduce-0000"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }

  spec = identity_spec(16, 2);
  spec.outputPrefix = "/out2";
  spec.spill = {30, 0.55, 0.8};  // 13-byte data region, one metadata slot
  try {
    run_job(spec, *store, {}, m);
    FAIL() << "expected failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRecordTooLarge);
    EXPECT_NE(std::string(e.what()).find("map-00000"), std::string::npos) << e.what();
  }

  spec = identity_spec(16);
  spec.inputs = {"/missing"};
  EXPECT_EQ(code_of([&] { run_job(spec, *store, {}, m); }), ErrorCode::kNotFound);
}

TEST_F(StoreFixture, TextLinesJob) {
  Meter w;
  store->write_file("/text", as_bytes("b 2\na 1\n\nb 3\n"), 0, {}, w);
  JobSpec spec;
  spec.name = "words";
  spec.inputs = {"/text"};
  spec.format = InputFormat::kTextLines;
  spec.outputPrefix = "/counts";
  spec.mapper = [](ByteView line, MapContext& ctx) {
    if (line.empty()) return;
    ctx.emit(line.first(1), line.subspan(2));
  };
  spec.reducer = [](ByteView key, const std::vector<ByteView>& values, ReduceContext& ctx) {
    std::string row(as_chars(key));
    for (auto v : values) row += " " + std::string(as_chars(v));
    row += "\n";
    ctx.write(as_bytes(row));
  };
  Meter m;
  const auto job = run_job(spec, *store, {}, m);
  EXPECT_EQ(job.mapTasks[0].inputRecords, 4u);
  const Bytes out = store->read_file("/counts/part-00000", 0, m);
  EXPECT_EQ(as_chars(out), "a 1\nb 2 3\n");
}

}  // namespace
