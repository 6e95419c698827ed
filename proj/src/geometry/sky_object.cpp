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

#include "skymr/geometry/sky_object.hpp"

#include <cmath>

namespace skymr::geo {

bool SkyObject::valid() const noexcept {
  return std::isfinite(ra) && std::isfinite(dec) && ra >= 0.0 && ra < 360.0 && dec >= -90.0 &&
         dec <= 90.0;
}

UnitVector UnitVector::from_radec(double raDeg, double decDeg) noexcept {
  const double ra = raDeg * kRadPerDegree;
  const double dec = decDeg * kRadPerDegree;
  const double c = std::cos(dec);
  return {c * std::cos(ra), c * std::sin(ra), std::sin(dec)};
}

double angular_distance(const UnitVector& a, const UnitVector& b) noexcept {
  const double cx = a.y * b.z - a.z * b.y;
  const double cy = a.z * b.x - a.x * b.z;
  const double cz = a.x * b.y - a.y * b.x;
  const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double dot = a.x * b.x + a.y * b.y + a.z * b.z;
  return std::atan2(cross, dot) * kArcsecPerRadian;
}

double angular_distance(const SkyObject& a, const SkyObject& b) noexcept {
  return angular_distance(UnitVector::from_radec(a.ra, a.dec), UnitVector::from_radec(b.ra, b.dec));
}

}  // namespace skymr::geo
