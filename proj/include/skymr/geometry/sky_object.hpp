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

#include <array>
#include <cstdint>
#include <numbers>

namespace skymr::geo {

inline constexpr double kArcsecPerDegree = 3600.0;
inline constexpr double kRadPerDegree = std::numbers::pi / 180.0;
inline constexpr double kArcsecPerRadian = 180.0 * 3600.0 / std::numbers::pi;

/// One catalog entry. Photometry and type are carried through untouched.
struct SkyObject {
  std::uint64_t id = 0;
  double ra = 0.0;   // degrees, [0, 360)
  double dec = 0.0;  // degrees, [-90, 90]
  std::array<double, 4> photometry{};
  std::uint8_t objType = 0;

  bool valid() const noexcept;
  friend bool operator==(const SkyObject&, const SkyObject&) = default;
};

/// Cartesian position on the unit sphere.
struct UnitVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static UnitVector from_radec(double raDeg, double decDeg) noexcept;
};

/// Great-circle angle in arcseconds via atan2(|a x b|, a . b), which keeps
/// full precision for both tiny and near-antipodal separations.
double angular_distance(const UnitVector& a, const UnitVector& b) noexcept;
double angular_distance(const SkyObject& a, const SkyObject& b) noexcept;

}  // namespace skymr::geo
