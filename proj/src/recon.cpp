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

#include "aifrecon/recon.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aifrecon/error.hpp"

namespace aifrecon {

void TrackedFrameSet::validate() const {
  geom.validate();
  if (frames.empty()) throw Error(ErrorCode::InvalidArgument, "frame set must hold at least one frame");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].pixels.size() != geom.pixel_count()) {
      std::ostringstream os;
      os << "frame " << i << " has " << frames[i].pixels.size() << " pixels, expected "
         << geom.pixel_count();
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
  }
}

void ReconConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw Error(ErrorCode::InvalidArgument, "alpha must be finite and >= 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "beta must lie in (0, 1]");
  if (!(hole_fill_radius >= 0.0) || !std::isfinite(hole_fill_radius))
    throw Error(ErrorCode::InvalidArgument, "hole fill radius must be finite and >= 0");
}

double angle_weight(const Vec3& beam_world, const Vec3& grad) {
  const double w = beam_world[0] * grad[0] + beam_world[1] * grad[1] + beam_world[2] * grad[2];
  return w < 0.0 ? 0.0 : w;
}

double compensate_weight(double w, double beta) { return w > beta ? 1.0 / w : w; }

double compensate_intensity(double observed, double cos_theta, double beta) {
  return cos_theta > beta ? observed * (1.0 / cos_theta) : observed;
}

double enhanced_value(double p, double w_angle, double w_bone, double alpha) {
  const double v = p * w_angle * w_bone * alpha + p;
  return v > 255.0 ? 255.0 : v;
}

double running_update(double v_old, double count, double v_temp) {
  return count / (count + 1.0) * v_old + v_temp * (1.0 / (count + 1.0));
}

namespace {

void require_same_meta(const VolumeMeta& meta, const VolumeMeta& other, const char* what) {
  if (!(meta == other)) {
    std::ostringstream os;
    os << what << " grid (" << other.dims[0] << "x" << other.dims[1] << "x" << other.dims[2]
       << ") does not match the reconstruction grid (" << meta.dims[0] << "x" << meta.dims[1]
       << "x" << meta.dims[2] << ") or differs in spacing/origin";
    throw Error(ErrorCode::MetaMismatch, os.str());
  }
}

ReconOutput empty_output(const VolumeMeta& meta) {
  return ReconOutput{ScalarVolume(meta), ScalarVolume(meta),
                     std::vector<std::uint8_t>(meta.voxel_count(), 0)};
}

}  // namespace

ReconOutput distribute_aif(const TrackedFrameSet& frames, const ScalarVolume& prob,
                           const VectorVolume& dir, const BeamDirectionMap& bmap,
                           const VolumeMeta& meta, const ReconConfig& cfg) {
  frames.validate();
  meta.validate();
  cfg.validate();
  require_same_meta(meta, prob.meta(), "probability map");
  require_same_meta(meta, dir.meta(), "gradient map");
  const FrameGeometry& g = frames.geom;
  if (bmap.width() != g.width || bmap.height() != g.height)
    throw Error(ErrorCode::MetaMismatch, "beam direction map does not match the frame size");

  ReconOutput out = empty_output(meta);
  std::vector<Vec3> beams(g.pixel_count());
  for (const TrackedFrame& frame : frames.frames) {
    for (std::size_t j = 0; j < beams.size(); ++j)
      beams[j] = transform_direction(frame.pose, bmap.dirs()[j]);

    for (int row = 0; row < g.height; ++row) {
      for (int col = 0; col < g.width; ++col) {
        const std::size_t j = static_cast<std::size_t>(row) * g.width + col;
        const auto vox = world_to_voxel(pixel_to_world(col, row, g, frame.pose), meta);
        if (!vox) continue;
        const std::size_t idx = meta.linear_index(*vox);
        const double p = frame.pixels[j];

        double w_angle = angle_weight(beams[j], dir[idx]);
        if (cfg.compensate) w_angle = compensate_weight(w_angle, cfg.beta);
        const double w_bone = prob[idx];
        const double v_temp = enhanced_value(p, w_angle, w_bone, cfg.alpha);

        out.volume[idx] = running_update(out.volume[idx], out.count[idx], v_temp);
        out.count[idx] = out.count[idx] + w_angle * w_bone;
        out.visited[idx] = 1;
      }
    }
  }
  return out;
}

ReconOutput distribute_baseline(const TrackedFrameSet& frames, const VolumeMeta& meta) {
  frames.validate();
  meta.validate();
  const FrameGeometry& g = frames.geom;
  ReconOutput out = empty_output(meta);
  for (const TrackedFrame& frame : frames.frames) {
    for (int row = 0; row < g.height; ++row) {
      for (int col = 0; col < g.width; ++col) {
        const auto vox = world_to_voxel(pixel_to_world(col, row, g, frame.pose), meta);
        if (!vox) continue;
        const std::size_t idx = meta.linear_index(*vox);
        out.volume[idx] += frame.pixels[static_cast<std::size_t>(row) * g.width + col];
        out.count[idx] += 1.0;
        out.visited[idx] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < out.volume.size(); ++i)
    if (out.count[i] > 0.0) out.volume[i] /= out.count[i];
  return out;
}

ReconOutput distribute(const TrackedFrameSet& frames, const ScalarVolume& prob,
                       const VectorVolume& dir, const BeamDirectionMap& bmap,
                       const VolumeMeta& meta, const ReconConfig& cfg) {
  if (cfg.method == ReconMethod::Baseline) return distribute_baseline(frames, meta);
  return distribute_aif(frames, prob, dir, bmap, meta, cfg);
}

ScalarVolume fill_holes(const ReconOutput& out, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw Error(ErrorCode::InvalidArgument, "hole fill radius must be finite and >= 0");
  const VolumeMeta& meta = out.volume.meta();
  if (out.visited.size() != meta.voxel_count())
    throw Error(ErrorCode::MetaMismatch, "visited mask does not match the volume");

  ScalarVolume filled = out.volume;
  const int r = static_cast<int>(std::floor(radius));
  if (r < 1) return filled;

  struct Offset {
    int dx, dy, dz;
    int dist2;
  };
  std::vector<Offset> offsets;
  const double r2 = radius * radius;
  for (int dz = -r; dz <= r; ++dz)
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        const int d2 = dx * dx + dy * dy + dz * dz;
        if (d2 > 0 && d2 <= r2) offsets.push_back({dx, dy, dz, d2});
      }
  std::stable_sort(offsets.begin(), offsets.end(),
                   [](const Offset& a, const Offset& b) { return a.dist2 < b.dist2; });

  for (std::size_t i = 0; i < filled.size(); ++i) {
    if (out.visited[i]) continue;
    const VoxelIndex v = meta.voxel_of(i);
    std::size_t group = 0;
    while (group < offsets.size()) {
      const int d2 = offsets[group].dist2;
      std::size_t best = meta.voxel_count();
      std::size_t k = group;
      for (; k < offsets.size() && offsets[k].dist2 == d2; ++k) {
        const int x = v.x + offsets[k].dx, y = v.y + offsets[k].dy, z = v.z + offsets[k].dz;
        if (!meta.contains(x, y, z)) continue;
        const std::size_t cand = meta.linear_index(x, y, z);
        if (out.visited[cand] && cand < best) best = cand;
      }
      if (best < meta.voxel_count()) {
        filled[i] = out.volume[best];
        break;
      }
      group = k;
    }
  }
  return filled;
}

ScalarVolume reconstruct(const TrackedFrameSet& frames, const ScalarVolume& prob,
                         const VectorVolume& dir, const BeamDirectionMap& bmap,
                         const VolumeMeta& meta, const ReconConfig& cfg) {
  cfg.validate();
  return fill_holes(distribute(frames, prob, dir, bmap, meta, cfg), cfg.hole_fill_radius);
}

}  // namespace aifrecon
