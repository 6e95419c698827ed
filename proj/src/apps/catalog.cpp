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

#include "skymr/apps/catalog.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "skymr/apps/records.hpp"
#include "skymr/common/error.hpp"

namespace skymr::apps {
namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

  double normal() {
    if (spare_) {
      spare_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * std::numbers::pi * u2);
    spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform on the sphere: dec from the arcsine of a uniform sine.
  void sky(double& ra, double& dec) {
    ra = uniform(0.0, 360.0);
    dec = std::asin(uniform(-1.0, 1.0)) / geo::kRadPerDegree;
  }

 private:
  std::mt19937_64 rng_;
  bool spare_ = false;
  double cached_ = 0.0;
};

double wrap_ra(double ra) {
  ra = std::fmod(ra, 360.0);
  if (ra < 0.0) ra += 360.0;
  return ra >= 360.0 ? 0.0 : ra;
}

}  // namespace

std::vector<geo::SkyObject> generate_objects(const CatalogOptions& options) {
  if (!(options.clustering >= 0.0 && options.clustering <= 1.0))
    throw Error(ErrorCode::kInvalidConfig, "clustering must be in [0, 1]");
  Draw draw(options.seed);
  const std::uint64_t clumped = static_cast<std::uint64_t>(std::llround(options.clustering * options.objects));
  const std::uint64_t clumps = clumped == 0 ? 0 : std::max<std::uint64_t>(1, clumped / kObjectsPerClump);
  std::vector<std::pair<double, double>> centers(clumps);
  for (auto& [ra, dec] : centers) draw.sky(ra, dec);

  std::vector<geo::SkyObject> out;
  out.reserve(options.objects);
  const double sigmaDeg = kClumpSigmaArcsec / geo::kArcsecPerDegree;
  for (std::uint64_t i = 0; i < options.objects; ++i) {
    geo::SkyObject o;
    o.id = i;
    if (i < clumped) {
      const auto& [cra, cdec] = centers[i % clumps];
      o.dec = std::clamp(cdec + sigmaDeg * draw.normal(), -90.0, 90.0);
      const double c = std::max(std::cos(o.dec * geo::kRadPerDegree), 1e-6);
      o.ra = wrap_ra(cra + sigmaDeg * draw.normal() / c);
    } else {
      draw.sky(o.ra, o.dec);
    }
    for (auto& m : o.photometry) m = draw.uniform(14.0, 24.0);
    o.objType = static_cast<std::uint8_t>(draw.below(4));
    out.push_back(o);
  }
  return out;
}

Bytes encode_catalog(const std::vector<geo::SkyObject>& objects) {
  Bytes out(objects.size() * kCatalogRecordBytes);
  for (std::size_t i = 0; i < objects.size(); ++i) encode_catalog_record(objects[i], out.data() + i * kCatalogRecordBytes);
  return out;
}

std::vector<geo::SkyObject> decode_catalog(ByteView data) {
  if (data.size() % kCatalogRecordBytes != 0)
    throw Error(ErrorCode::kMalformedInput, "catalog length is not a multiple of 57");
  std::vector<geo::SkyObject> out;
  out.reserve(data.size() / kCatalogRecordBytes);
  for (std::size_t off = 0; off < data.size(); off += kCatalogRecordBytes)
    out.push_back(decode_catalog_record(data.subspan(off, kCatalogRecordBytes)));
  return out;
}

dfs::StoredFile generate_catalog(dfs::BlockStore& store, const std::string& path, const CatalogOptions& options,
                                 std::uint32_t writerNode, const dfs::WriteOptions& write,
                                 metering::Meter& meter) {
  return store.write_file(path, encode_catalog(generate_objects(options)), writerNode, write, meter);
}

}  // namespace skymr::apps
