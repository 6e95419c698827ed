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

#include "skymr/geometry/pair_search.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "skymr/common/error.hpp"

namespace skymr::geo {
namespace {

bool pair_less(const PairRecord& a, const PairRecord& b) {
  return a.idA != b.idA ? a.idA < b.idA : a.idB < b.idB;
}

template <typename Range, typename IdOf>
void require_distinct_ids(const Range& items, IdOf id_of) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(items.size() * 2);
  for (const auto& item : items)
    if (!seen.insert(id_of(item)).second)
      throw Error(ErrorCode::kMalformedInput, "duplicate object id " + std::to_string(id_of(item)));
}

double wrap_signed(double deg) {
  deg = std::fmod(deg, 360.0);
  if (deg > 180.0) deg -= 360.0;
  if (deg <= -180.0) deg += 360.0;
  return deg;
}

std::uint64_t cell_key(std::int64_t row, std::int64_t col) {
  return (static_cast<std::uint64_t>(row) << 32) ^ static_cast<std::uint32_t>(col + (1LL << 31));
}

}  // namespace

std::vector<PairRecord> pairs_in_block(std::span<const BlockMember> members, const BlockConfig& cfg,
                                       PairSearchStats* stats) {
  cfg.validate();
  require_distinct_ids(members, [](const BlockMember& m) { return m.object.id; });
  std::vector<PairRecord> out;
  if (members.size() < 2) return out;

  const double theta = cfg.thetaArcsec;
  const double cellDeg = cfg.subBlockArcsec / kArcsecPerDegree;

  // RA is unwrapped around the first member so blocks straddling ra = 0 stay
  // contiguous.
  const double ref = members.front().object.ra;
  double maxAbsDec = 0.0;
  double maxAbsRa = 0.0;
  std::vector<double> ras(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    ras[i] = wrap_signed(members[i].object.ra - ref);
    maxAbsRa = std::max(maxAbsRa, std::abs(ras[i]));
    maxAbsDec = std::max(maxAbsDec, std::abs(members[i].object.dec));
  }

  // Widest RA separation a pair within one sub-block edge can have at the
  // most poleward member's declination.
  const double c = std::cos(maxAbsDec * kRadPerDegree);
  const double s = c > 0.0 ? std::sin(0.5 * cellDeg * kRadPerDegree) / c : 2.0;
  double raCellDeg = 0.0;
  if (s < 1.0) {
    raCellDeg = 2.0 * std::asin(s) / kRadPerDegree * (1.0 + 1e-12) + 1e-12;
    if (maxAbsRa + raCellDeg >= 180.0) raCellDeg = 0.0;
  }

  std::vector<UnitVector> unit(members.size());
  std::vector<std::int64_t> rows(members.size());
  std::vector<std::int64_t> cols(members.size());
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;
  cells.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& o = members[i].object;
    unit[i] = UnitVector::from_radec(o.ra, o.dec);
    rows[i] = static_cast<std::int64_t>(std::floor((o.dec + 90.0) / cellDeg));
    cols[i] = raCellDeg > 0.0 ? static_cast<std::int64_t>(std::floor(ras[i] / raCellDeg)) : 0;
    cells[cell_key(rows[i], cols[i])].push_back(static_cast<std::uint32_t>(i));
  }

  std::uint64_t evaluations = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!members[i].native) continue;
    const std::uint64_t idA = members[i].object.id;
    for (std::int64_t dr = -1; dr <= 1; ++dr) {
      for (std::int64_t dc = -1; dc <= 1; ++dc) {
        const auto it = cells.find(cell_key(rows[i] + dr, cols[i] + dc));
        if (it == cells.end()) continue;
        for (std::uint32_t j : it->second) {
          const std::uint64_t idB = members[j].object.id;
          if (idB <= idA) continue;
          ++evaluations;
          const double d = angular_distance(unit[i], unit[j]);
          if (d <= theta) out.push_back({idA, idB, d});
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), pair_less);
  if (stats) {
    stats->distanceEvaluations += evaluations;
    stats->subBlocks += cells.size();
  }
  return out;
}

std::vector<PairRecord> brute_force_pairs(std::span<const SkyObject> objects, double thetaArcsec) {
  require_distinct_ids(objects, [](const SkyObject& o) { return o.id; });
  std::vector<UnitVector> unit;
  unit.reserve(objects.size());
  for (const auto& o : objects) unit.push_back(UnitVector::from_radec(o.ra, o.dec));

  std::vector<PairRecord> out;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (std::size_t j = i + 1; j < objects.size(); ++j) {
      const double d = angular_distance(unit[i], unit[j]);
      if (d > thetaArcsec) continue;
      const auto [lo, hi] = std::minmax(objects[i].id, objects[j].id);
      out.push_back({lo, hi, d});
    }
  }
  std::sort(out.begin(), out.end(), pair_less);
  return out;
}

std::uint64_t PairHistogram::total() const noexcept {
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

std::uint64_t PairHistogram::cumulative(std::size_t k) const {
  if (k < 1 || k > kHistogramBins) throw Error(ErrorCode::kOutOfRange, "cumulative bin out of range");
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < k; ++i) sum += counts[i];
  return sum;
}

PairHistogram& PairHistogram::operator+=(const PairHistogram& other) noexcept {
  for (std::size_t i = 0; i < kHistogramBins; ++i) counts[i] += other.counts[i];
  return *this;
}

std::size_t histogram_bin(double distArcsec) {
  if (!(distArcsec >= 0.0) || distArcsec > static_cast<double>(kHistogramBins))
    throw Error(ErrorCode::kOutOfRange,
                "pair distance " + std::to_string(distArcsec) + "'' outside [0, 60]");
  if (distArcsec == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(distArcsec)) - 1;
}

PairHistogram histogram(std::span<const PairRecord> pairs) {
  PairHistogram h;
  for (const auto& p : pairs) ++h.counts[histogram_bin(p.distArcsec)];
  return h;
}

}  // namespace skymr::geo
