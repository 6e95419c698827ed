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
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "skymr/geometry/block_grid.hpp"
#include "skymr/geometry/sky_object.hpp"

namespace skymr::geo {

/// A neighbor pair in canonical order (idA < idB).
struct PairRecord {
  std::uint64_t idA = 0;
  std::uint64_t idB = 0;
  double distArcsec = 0.0;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct BlockMember {
  SkyObject object;
  bool native = false;
};

struct PairSearchStats {
  std::uint64_t distanceEvaluations = 0;
  std::uint64_t subBlocks = 0;
};

/// Pairs within cfg.thetaArcsec among the members of one block. A pair is
/// emitted only when its lower-id object is native here, so across all blocks
/// every pair appears exactly once. Candidates are limited to the same and
/// adjacent sub-blocks. Output sorted by (idA, idB).
std::vector<PairRecord> pairs_in_block(std::span<const BlockMember> members, const BlockConfig& cfg,
                                       PairSearchStats* stats = nullptr);

/// O(n^2) reference scan. Throws kMalformedInput on duplicate ids.
std::vector<PairRecord> brute_force_pairs(std::span<const SkyObject> objects, double thetaArcsec);

inline constexpr std::size_t kHistogramBins = 60;

/// Bin k (1-based) counts distances in (k-1, k] arcsec; distance 0 lands in bin 1.
struct PairHistogram {
  std::array<std::uint64_t, kHistogramBins> counts{};

  std::uint64_t total() const noexcept;
  /// Pairs with distance <= k arcsec, k in [1, 60].
  std::uint64_t cumulative(std::size_t k) const;
  PairHistogram& operator+=(const PairHistogram& other) noexcept;
  friend bool operator==(const PairHistogram&, const PairHistogram&) = default;
};

std::size_t histogram_bin(double distArcsec);  // 0-based index; throws kOutOfRange above 60
PairHistogram histogram(std::span<const PairRecord> pairs);

}  // namespace skymr::geo
