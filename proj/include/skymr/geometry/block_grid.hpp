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

#include <compare>
#include <cstdint>
#include <vector>

#include "skymr/geometry/sky_object.hpp"

namespace skymr::geo {

struct BlockKey {
  std::uint32_t zone = 0;
  std::uint32_t block = 0;

  friend auto operator<=>(const BlockKey&, const BlockKey&) = default;
};

struct BlockConfig {
  double zoneHeightDeg = 1.0;
  double blockWidthDeg = 1.0;  // nominal width at the equator
  double thetaArcsec = 60.0;
  double subBlockArcsec = 60.0;

  /// Default geometry with the search radius and sub-block edge set to theta.
  static BlockConfig for_theta(double thetaArcsec);

  /// Throws Error(kInvalidConfig) when any invariant fails.
  void validate() const;
};

struct BlockAssignment {
  BlockKey key;
  bool native = false;

  friend bool operator==(const BlockAssignment&, const BlockAssignment&) = default;
};

/// Zone/block decomposition of the sphere. Zones are fixed-height declination
/// bands; each zone is cut into round(360 / (blockWidth / cos(decMid))) equal
/// RA cells so blocks cover roughly equal solid angle.
class BlockGrid {
 public:
  explicit BlockGrid(const BlockConfig& cfg);

  const BlockConfig& config() const noexcept { return cfg_; }
  std::uint32_t zone_count() const noexcept { return static_cast<std::uint32_t>(blocks_.size()); }
  std::uint32_t blocks_in_zone(std::uint32_t zone) const { return blocks_.at(zone); }
  double block_width_deg(std::uint32_t zone) const { return 360.0 / blocks_.at(zone); }
  double zone_dec_min(std::uint32_t zone) const;
  double zone_dec_max(std::uint32_t zone) const;
  bool contains(BlockKey key) const noexcept;

  BlockKey home_block(double raDeg, double decDeg) const noexcept;
  BlockKey home_block(const SkyObject& obj) const noexcept { return home_block(obj.ra, obj.dec); }

  /// Native assignment first, then every border copy sorted by (zone, block).
  std::vector<BlockAssignment> assignments(const SkyObject& obj) const;

 private:
  BlockConfig cfg_;
  std::vector<std::uint32_t> blocks_;
};

// Convenience wrappers that build a grid per call.
BlockKey home_block(const SkyObject& obj, const BlockConfig& cfg);
std::vector<BlockAssignment> assignments(const SkyObject& obj, const BlockConfig& cfg);

}  // namespace skymr::geo
