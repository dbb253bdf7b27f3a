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

#ifndef AIFRECON_RECON_HPP
#define AIFRECON_RECON_HPP

#include <cstdint>
#include <vector>

#include "aifrecon/geometry.hpp"
#include "aifrecon/volume.hpp"

namespace aifrecon {

/// One tracked 8-bit frame, pixels row-major (W·H bytes).
struct TrackedFrame {
  std::vector<std::uint8_t> pixels;
  RigidPose pose;

  friend bool operator==(const TrackedFrame&, const TrackedFrame&) = default;
};

struct TrackedFrameSet {
  FrameGeometry geom;
  std::vector<TrackedFrame> frames;

  /// Throws InvalidArgument for an empty set or a frame whose size differs
  /// from W·H.
  void validate() const;

  friend bool operator==(const TrackedFrameSet&, const TrackedFrameSet&) = default;
};

enum class ReconMethod { Baseline, Aif };

struct ReconConfig {
  double alpha = 0.1;            // bone enhancement factor
  double beta = 0.1;             // cosine threshold below which no compensation happens
  bool compensate = false;       // reflection energy compensation
  double hole_fill_radius = 3.0; // voxels
  ReconMethod method = ReconMethod::Aif;

  void validate() const;
};

/// Distribution-step result. `visited` is 1 wherever at least one pixel
/// landed, including zero-weight AIF visits that leave `count` at 0.
struct ReconOutput {
  ScalarVolume volume;
  ScalarVolume count;
  std::vector<std::uint8_t> visited;
};

/// Dot product of the world beam direction and the surface gradient, with
/// negative values clamped to 0.
double angle_weight(const Vec3& beam_world, const Vec3& grad);

/// 1/w when w > beta, w otherwise.
double compensate_weight(double w, double beta);

/// Reflection energy compensation of an observed intensity: I / cos when the
/// cosine exceeds beta, the intensity itself otherwise.
double compensate_intensity(double observed, double cos_theta, double beta);

/// p·w_angle·w_bone·alpha + p, clamped to 255.
double enhanced_value(double p, double w_angle, double w_bone, double alpha);

/// count/(count+1)·v_old + v_temp·(1/(count+1)).
double running_update(double v_old, double count, double v_temp);

/// Angle-weighted distribution step. Frames are visited in order, pixels in
/// row-major order; the result depends on that order.
ReconOutput distribute_aif(const TrackedFrameSet& frames, const ScalarVolume& prob,
                           const VectorVolume& dir, const BeamDirectionMap& bmap,
                           const VolumeMeta& meta, const ReconConfig& cfg);

/// Plain averaging of every pixel that lands in a voxel.
ReconOutput distribute_baseline(const TrackedFrameSet& frames, const VolumeMeta& meta);

/// Dispatches on cfg.method.
ReconOutput distribute(const TrackedFrameSet& frames, const ScalarVolume& prob,
                       const VectorVolume& dir, const BeamDirectionMap& bmap,
                       const VolumeMeta& meta, const ReconConfig& cfg);

/// Unvisited voxels take the value of the nearest visited voxel within
/// `radius` (Euclidean, voxel units); equidistant candidates resolve to the
/// smallest linear index. Anything farther stays 0.
ScalarVolume fill_holes(const ReconOutput& out, double radius);

/// distribute() followed by fill_holes(cfg.hole_fill_radius).
ScalarVolume reconstruct(const TrackedFrameSet& frames, const ScalarVolume& prob,
                         const VectorVolume& dir, const BeamDirectionMap& bmap,
                         const VolumeMeta& meta, const ReconConfig& cfg);

}  // namespace aifrecon

#endif  // AIFRECON_RECON_HPP
