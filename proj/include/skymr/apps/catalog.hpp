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
#include <string>
#include <vector>

#include "skymr/common/bytes.hpp"
#include "skymr/dfs/block_store.hpp"
#include "skymr/geometry/sky_object.hpp"
#include "skymr/metering/meter.hpp"

namespace skymr::apps {

struct CatalogOptions {
  std::uint64_t objects = 0;
  std::uint64_t seed = 42;
  /// Fraction of objects planted in tight Gaussian clumps (sigma 15'').
  double clustering = 0.01;
};

inline constexpr double kClumpSigmaArcsec = 15.0;
inline constexpr std::uint64_t kObjectsPerClump = 5;

/// Synthetic sky: uniform on the sphere plus optional clumps; ids 0..n-1.
/// Depends only on the options (own generator and transforms, no
/// implementation-defined distributions).
std::vector<geo::SkyObject> generate_objects(const CatalogOptions& options);
Bytes encode_catalog(const std::vector<geo::SkyObject>& objects);
std::vector<geo::SkyObject> decode_catalog(ByteView data);

dfs::StoredFile generate_catalog(dfs::BlockStore& store, const std::string& path, const CatalogOptions& options,
                                 std::uint32_t writerNode, const dfs::WriteOptions& write,
                                 metering::Meter& meter);

}  // namespace skymr::apps
