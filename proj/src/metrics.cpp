/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The aifrecon Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "aifrecon/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "aifrecon/error.hpp"

namespace aifrecon {
namespace {

constexpr double kEpsilon = 1e-6;

// Neumaier summation; keeps reductions independent of order to ~1 ulp.
class Sum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
    ++n_;
  }
  double value() const { return sum_ + comp_; }
  std::size_t count() const { return n_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  std::size_t n_ = 0;
};

struct Stats {
  double mean = 0.0;
  double var = 0.0;
  std::size_t n = 0;
};

template <typename Pred>
Stats region_stats(const ScalarVolume& vol, Pred in_region) {
  Sum s;
  for (std::size_t i = 0; i < vol.size(); ++i)
    if (in_region(i)) s.add(vol[i]);
  Stats st;
  st.n = s.count();
  if (st.n == 0) return st;
  st.mean = s.value() / static_cast<double>(st.n);
  Sum sq;
  for (std::size_t i = 0; i < vol.size(); ++i)
    if (in_region(i)) sq.add((vol[i] - st.mean) * (vol[i] - st.mean));
  st.var = sq.value() / static_cast<double>(st.n);
  return st;
}

void require_grid(const ScalarVolume& vol, const SurfaceMask& mask, const VisitedMask& visited) {
  if (!(vol.meta() == mask.meta) || mask.mask.size() != vol.size())
    throw Error(ErrorCode::MetaMismatch, "surface mask grid does not match the volume");
  if (!visited.empty() && visited.size() != vol.size())
    throw Error(ErrorCode::MetaMismatch, "visited mask does not match the volume");
}

}  // namespace

SurfaceMask surface_mask_from_label(const ScalarVolume& label) {
  const VolumeMeta& meta = label.meta();
  SurfaceMask boundary{meta, std::vector<std::uint8_t>(meta.voxel_count(), 0)};
  static constexpr std::array<std::array<int, 3>, 6> kNeighbors{
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

  for (int z = 0; z < meta.dims[2]; ++z)
    for (int y = 0; y < meta.dims[1]; ++y)
      for (int x = 0; x < meta.dims[0]; ++x) {
        if (label.at(x, y, z) < 0.5) continue;
        for (const auto& n : kNeighbors) {
          const int nx = x + n[0], ny = y + n[1], nz = z + n[2];
          // The grid edge is not a surface.
          if (meta.contains(nx, ny, nz) && label.at(nx, ny, nz) < 0.5) {
            boundary.mask[meta.linear_index(x, y, z)] = 1;
            break;
          }
        }
      }

  SurfaceMask dilated = boundary;
  for (int z = 0; z < meta.dims[2]; ++z)
    for (int y = 0; y < meta.dims[1]; ++y)
      for (int x = 0; x < meta.dims[0]; ++x) {
        if (!boundary.mask[meta.linear_index(x, y, z)]) continue;
        for (const auto& n : kNeighbors) {
          const int nx = x + n[0], ny = y + n[1], nz = z + n[2];
          if (meta.contains(nx, ny, nz)) dilated.mask[meta.linear_index(nx, ny, nz)] = 1;
        }
      }
  return dilated;
}

SurfaceMask surface_mask_from_volume(const ScalarVolume& vol) {
  SurfaceMask m{vol.meta(), std::vector<std::uint8_t>(vol.size(), 0)};
  for (std::size_t i = 0; i < vol.size(); ++i) m.mask[i] = vol[i] >= 0.5 ? 1 : 0;
  return m;
}

Contrast contrast(const ScalarVolume& vol, const SurfaceMask& mask, const VisitedMask& visited) {
  require_grid(vol, mask, visited);
  auto seen = [&](std::size_t i) { return visited.empty() || visited[i] != 0; };
  const Stats s = region_stats(vol, [&](std::size_t i) { return mask.mask[i] != 0 && seen(i); });
  const Stats b = region_stats(vol, [&](std::size_t i) { return mask.mask[i] == 0 && seen(i); });
  if (s.n == 0) throw Error(ErrorCode::EmptyRegion, "no visited voxel lies on the surface mask");
  if (b.n == 0) throw Error(ErrorCode::EmptyRegion, "no visited voxel lies off the surface mask");

  Contrast c;
  c.surface_mean = s.mean;
  c.background_mean = b.mean;
  c.contrast_ratio = s.mean / std::max(b.mean, kEpsilon);
  c.cnr = (s.mean - b.mean) / std::sqrt(s.var + b.var + kEpsilon);
  return c;
}

double completeness(const ScalarVolume& vol, const SurfaceMask& mask, double threshold) {
  require_grid(vol, mask, {});
  if (!(threshold > 0.0 && threshold < 255.0))
    throw Error(ErrorCode::InvalidArgument, "completeness threshold must lie in (0, 255)");
  std::size_t total = 0, hit = 0;
  for (std::size_t i = 0; i < vol.size(); ++i) {
    if (!mask.mask[i]) continue;
    ++total;
    if (vol[i] >= threshold) ++hit;
  }
  if (total == 0) throw Error(ErrorCode::EmptyRegion, "surface mask is empty");
  return static_cast<double>(hit) / static_cast<double>(total);
}

double otsu_threshold(const ScalarVolume& vol, const VisitedMask& visited) {
  if (!visited.empty() && visited.size() != vol.size())
    throw Error(ErrorCode::MetaMismatch, "visited mask does not match the volume");
  std::array<double, 256> hist{};
  double total = 0.0;
  for (std::size_t i = 0; i < vol.size(); ++i) {
    if (!visited.empty() && !visited[i]) continue;
    const int bin = static_cast<int>(std::floor(std::clamp(vol[i], 0.0, 255.0)));
    hist[bin] += 1.0;
    total += 1.0;
  }
  if (total == 0.0) throw Error(ErrorCode::EmptyRegion, "no voxels to threshold");

  double sum_all = 0.0;
  for (int k = 0; k < 256; ++k) sum_all += k * hist[k];

  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  int best_k = 0;
  for (int k = 0; k < 255; ++k) {
    w0 += hist[k];
    sum0 += k * hist[k];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (between > best) {
      best = between;
      best_k = k;
    }
  }
  return static_cast<double>(best_k + 1);
}

std::vector<MetricsReport> compare(const std::vector<NamedVolume>& volumes, const SurfaceMask& mask,
                                   double threshold) {
  std::vector<MetricsReport> rows;
  rows.reserve(volumes.size());
  for (const NamedVolume& nv : volumes) {
    if (nv.volume == nullptr) throw Error(ErrorCode::InvalidArgument, "null volume in comparison");
    const Contrast c = contrast(*nv.volume, mask, nv.visited);
    MetricsReport r;
    r.name = nv.name;
    r.surface_mean = c.surface_mean;
    r.background_mean = c.background_mean;
    r.contrast_ratio = c.contrast_ratio;
    r.cnr = c.cnr;
    r.completeness = completeness(*nv.volume, mask, threshold);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_report_table(const std::vector<MetricsReport>& reports) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %12s %12s %12s %12s %12s\n", "name", "surface_mean",
                "bg_mean", "contrast", "cnr", "completeness");
  os << line;
  for (const MetricsReport& r : reports) {
    std::snprintf(line, sizeof line, "%-20s %12.4f %12.4f %12.4f %12.4f %12.4f\n", r.name.c_str(),
                  r.surface_mean, r.background_mean, r.contrast_ratio, r.cnr, r.completeness);
    os << line;
  }
  return os.str();
}

}  // namespace aifrecon
