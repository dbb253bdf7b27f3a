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

#ifndef AIFRECON_METRICS_HPP
#define AIFRECON_METRICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aifrecon/volume.hpp"

namespace aifrecon {

/// Ground-truth surface voxels (1) on the grid of the compared volumes.
struct SurfaceMask {
  VolumeMeta meta;
  std::vector<std::uint8_t> mask;
};

/// Label voxels with a 6-neighbor outside the solid, dilated by one voxel
/// (6-connectivity).
SurfaceMask surface_mask_from_label(const ScalarVolume& label);

/// Any voxel with a value >= 0.5 is on the mask.
SurfaceMask surface_mask_from_volume(const ScalarVolume& vol);

/// Optional restriction of the statistics to a subset of voxels (the voxels a
/// reconstruction actually visited). An empty vector means "every voxel".
using VisitedMask = std::vector<std::uint8_t>;

struct Contrast {
  double contrast_ratio = 0.0;
  double cnr = 0.0;
  double surface_mean = 0.0;
  double background_mean = 0.0;
};

/// contrast_ratio = mean_s / max(mean_b, 1e-6);
/// cnr = (mean_s - mean_b) / sqrt(var_s + var_b + 1e-6).
/// Both regions are restricted to `visited`. Throws EmptyRegion when either
/// region is empty.
Contrast contrast(const ScalarVolume& vol, const SurfaceMask& mask, const VisitedMask& visited = {});

/// Fraction of mask voxels with vol >= threshold. Throws EmptyRegion for an
/// empty mask.
double completeness(const ScalarVolume& vol, const SurfaceMask& mask, double threshold);

/// Otsu threshold on a 256-bin histogram of floor(clamp(v, 0, 255)) over the
/// `visited` voxels. Returned as the lowest intensity of the upper class, so
/// completeness(v >= t) counts the upper class.
double otsu_threshold(const ScalarVolume& vol, const VisitedMask& visited = {});

struct MetricsReport {
  std::string name;
  double surface_mean = 0.0;
  double background_mean = 0.0;
  double contrast_ratio = 0.0;
  double cnr = 0.0;
  double completeness = 0.0;
};

struct NamedVolume {
  std::string name;
  const ScalarVolume* volume;
  VisitedMask visited;
};

/// One report per volume, in input order.
std::vector<MetricsReport> compare(const std::vector<NamedVolume>& volumes, const SurfaceMask& mask,
                                   double threshold);

/// Fixed-width text table, one row per report.
std::string format_report_table(const std::vector<MetricsReport>& reports);

}  // namespace aifrecon

#endif  // AIFRECON_METRICS_HPP
