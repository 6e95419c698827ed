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

#include "skymr/geometry/block_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skymr/common/error.hpp"

namespace skymr::geo {
namespace {

// Keeps border tests inclusive under floating-point rounding. A spurious copy
// costs one extra member; a missing one loses a pair.
constexpr double kPadDeg = 1e-9;

const double kMinCos = std::cos(89.999 * kRadPerDegree);

}  // namespace

BlockConfig BlockConfig::for_theta(double thetaArcsec) {
  BlockConfig cfg;
  cfg.thetaArcsec = thetaArcsec;
  cfg.subBlockArcsec = thetaArcsec;
  return cfg;
}

void BlockConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (!(zoneHeightDeg > 0.0) || zoneHeightDeg > 180.0) fail("zone height must be in (0, 180] degrees");
  if (!(blockWidthDeg > 0.0) || blockWidthDeg > 360.0) fail("block width must be in (0, 360] degrees");
  if (!(thetaArcsec > 0.0)) fail("theta must be positive");
  if (zoneHeightDeg * kArcsecPerDegree < thetaArcsec) fail("theta must not exceed the zone height");
  if (subBlockArcsec < thetaArcsec) fail("sub-block edge must be at least theta");
}

BlockGrid::BlockGrid(const BlockConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const auto zones = static_cast<std::uint32_t>(std::ceil(180.0 / cfg_.zoneHeightDeg - 1e-9));
  blocks_.resize(std::max<std::uint32_t>(zones, 1));
  for (std::uint32_t z = 0; z < blocks_.size(); ++z) {
    const double mid = 0.5 * (zone_dec_min(z) + zone_dec_max(z));
    const double c = std::max(std::cos(mid * kRadPerDegree), kMinCos);
    const double adjusted = std::min(cfg_.blockWidthDeg / c, 360.0);
    blocks_[z] = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::lround(360.0 / adjusted)));
  }
}

double BlockGrid::zone_dec_min(std::uint32_t zone) const {
  return -90.0 + zone * cfg_.zoneHeightDeg;
}

double BlockGrid::zone_dec_max(std::uint32_t zone) const {
  return std::min(90.0, -90.0 + (zone + 1) * cfg_.zoneHeightDeg);
}

bool BlockGrid::contains(BlockKey key) const noexcept {
  return key.zone < blocks_.size() && key.block < blocks_[key.zone];
}

BlockKey BlockGrid::home_block(double raDeg, double decDeg) const noexcept {
  const auto lastZone = static_cast<std::int64_t>(blocks_.size()) - 1;
  const auto z = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor((decDeg + 90.0) / cfg_.zoneHeightDeg)), 0, lastZone);
  const auto n = static_cast<std::int64_t>(blocks_[z]);
  const auto b = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor(raDeg / (360.0 / n))), 0, n - 1);
  return {static_cast<std::uint32_t>(z), static_cast<std::uint32_t>(b)};
}

std::vector<BlockAssignment> BlockGrid::assignments(const SkyObject& obj) const {
  const BlockKey home = home_block(obj);
  const double theta = cfg_.thetaArcsec / kArcsecPerDegree + kPadDeg;
  const double halfTheta = 0.5 * cfg_.thetaArcsec / kArcsecPerDegree * kRadPerDegree;
  const auto lastZone = zone_count() - 1;

  std::vector<BlockKey> copies;
  const std::uint32_t zFirst = home.zone == 0 ? 0 : home.zone - 1;
  const std::uint32_t zLast = std::min(home.zone + 1, lastZone);
  for (std::uint32_t z = zFirst; z <= zLast; ++z) {
    const double lo = zone_dec_min(z);
    const double hi = zone_dec_max(z);
    if (obj.dec < lo - theta || obj.dec > hi + theta) continue;
    const std::uint32_t n = blocks_[z];
    const bool polar = z == 0 || z == lastZone;

    // Half-width in RA of the band around the object that can hold a partner
    // inside this zone: hav(theta) >= cos(dA) cos(dB) hav(dRA), taken at the
    // most poleward declination of the zone a partner could have.
    bool all = polar || n == 1;
    double half = 0.0;
    if (!all) {
      const double a = std::max(lo, obj.dec - theta);
      const double b = std::min(hi, obj.dec + theta);
      const double poleward = std::max(std::abs(a), std::abs(b));
      const double c = std::sqrt(std::cos(poleward * kRadPerDegree) * std::cos(obj.dec * kRadPerDegree));
      const double s = c > 0.0 ? std::sin(halfTheta) / c : 2.0;
      if (s >= 1.0) {
        all = true;
      } else {
        half = 2.0 * std::asin(s) / kRadPerDegree + kPadDeg;
        all = 2.0 * half + 360.0 / n >= 360.0;
      }
    }
    if (all) {
      for (std::uint32_t blk = 0; blk < n; ++blk) copies.push_back({z, blk});
      continue;
    }
    const double width = 360.0 / n;
    // Block j's expanded RA range [j*w - half, (j+1)*w + half] holds ra.
    const auto first = static_cast<std::int64_t>(std::ceil((obj.ra - half) / width)) - 1;
    const auto last = static_cast<std::int64_t>(std::floor((obj.ra + half) / width));
    for (std::int64_t j = first; j <= last; ++j) {
      const double blockLo = j * width;
      const double blockHi = (j + 1) * width;
      if (obj.ra < blockLo - half || obj.ra > blockHi + half) continue;
      const auto idx = static_cast<std::uint32_t>(((j % n) + n) % n);
      copies.push_back({z, idx});
    }
  }

  std::sort(copies.begin(), copies.end());
  copies.erase(std::unique(copies.begin(), copies.end()), copies.end());

  std::vector<BlockAssignment> out;
  out.reserve(copies.size() + 1);
  out.push_back({home, true});
  for (const auto& key : copies)
    if (key != home) out.push_back({key, false});
  return out;
}

BlockKey home_block(const SkyObject& obj, const BlockConfig& cfg) {
  return BlockGrid(cfg).home_block(obj);
}

std::vector<BlockAssignment> assignments(const SkyObject& obj, const BlockConfig& cfg) {
  return BlockGrid(cfg).assignments(obj);
}

}  // namespace skymr::geo
