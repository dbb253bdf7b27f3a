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

#include "aifrecon/geometry.hpp"

#include <cmath>
#include <sstream>

#include "aifrecon/error.hpp"

namespace aifrecon {

double orthonormality_error(const Mat4& m) {
  const Mat3 r = m.topLeftCorner<3, 3>();
  return (r.transpose() * r - Mat3::Identity()).lpNorm<Eigen::Infinity>();
}

RigidPose RigidPose::from_matrix(const Mat4& m, double tolerance) {
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "pose contains non-finite entries");
  if (m(3, 0) != 0.0 || m(3, 1) != 0.0 || m(3, 2) != 0.0 || m(3, 3) != 1.0)
    throw Error(ErrorCode::InvalidArgument, "pose last row must be exactly (0, 0, 0, 1)");
  const double err = orthonormality_error(m);
  if (!(err < tolerance)) {
    std::ostringstream os;
    os << "pose rotation block is not orthonormal (|R^T R - I| = " << err << ", tolerance "
       << tolerance << ")";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  return RigidPose(m);
}

RigidPose RigidPose::from_rotation_translation(const Mat3& r, const Vec3& t) {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = r;
  m.topRightCorner<3, 1>() = t;
  return from_matrix(m);
}

void FrameGeometry::validate() const {
  if (width < 1 || height < 1)
    throw Error(ErrorCode::InvalidArgument, "frame width and height must be >= 1");
  if (!(spacing_x > 0.0) || !(spacing_y > 0.0))
    throw Error(ErrorCode::InvalidArgument, "pixel spacing must be > 0");
  if (!(apex_offset >= 0.0) || !std::isfinite(apex_offset))
    throw Error(ErrorCode::InvalidArgument, "apex offset must be finite and >= 0");
}

BeamDirectionMap::BeamDirectionMap(int width, int height, std::vector<Vec3> dirs)
    : width_(width), height_(height), dirs_(std::move(dirs)) {
  if (width < 1 || height < 1 || dirs_.size() != static_cast<std::size_t>(width) * height)
    throw Error(ErrorCode::InvalidArgument, "beam direction map size does not match W x H");
}

void VolumeMeta::validate() const {
  for (int k = 0; k < 3; ++k) {
    if (dims[k] < 1) throw Error(ErrorCode::InvalidArgument, "volume dims must be >= 1");
    if (!(spacing[k] > 0.0) || !std::isfinite(spacing[k]))
      throw Error(ErrorCode::InvalidArgument, "volume spacing must be finite and > 0");
    if (!std::isfinite(origin[k]))
      throw Error(ErrorCode::InvalidArgument, "volume origin must be finite");
  }
}

VoxelIndex VolumeMeta::voxel_of(std::size_t linear) const {
  const auto sx = static_cast<std::size_t>(dims[0]);
  const auto sy = static_cast<std::size_t>(dims[1]);
  return {static_cast<int>(linear % sx), static_cast<int>((linear / sx) % sy),
          static_cast<int>(linear / (sx * sy))};
}

Vec3 VolumeMeta::voxel_center(int x, int y, int z) const {
  return {origin[0] + x * spacing[0], origin[1] + y * spacing[1], origin[2] + z * spacing[2]};
}

BeamDirectionMap make_beam_direction_map(const FrameGeometry& geom) {
  geom.validate();
  std::vector<Vec3> dirs(geom.pixel_count(), Vec3(0.0, 1.0, 0.0));
  if (geom.probe == ProbeKind::Phased) {
    const Vec3 apex = geom.apex();
    for (int row = 0; row < geom.height; ++row) {
      for (int col = 0; col < geom.width; ++col) {
        const Vec3 d(col * geom.spacing_x - apex[0], row * geom.spacing_y - apex[1], 0.0);
        const double n = d.norm();
        // A pixel sitting on the apex has no defined direction.
        if (n > 1e-12) dirs[static_cast<std::size_t>(row) * geom.width + col] = d / n;
      }
    }
  }
  return BeamDirectionMap(geom.width, geom.height, std::move(dirs));
}

Vec3 pixel_to_world(int col, int row, const FrameGeometry& geom, const RigidPose& pose) {
  const Mat4& m = pose.matrix();
  const double px = col * geom.spacing_x;
  const double py = row * geom.spacing_y;
  // Written out so the summation order is fixed: m0*x + m1*y + m2*0 + m3.
  Vec3 out;
  for (int r = 0; r < 3; ++r) out[r] = m(r, 0) * px + m(r, 1) * py + m(r, 2) * 0.0 + m(r, 3);
  return out;
}

std::optional<VoxelIndex> world_to_voxel(const Vec3& point, const VolumeMeta& meta) {
  std::array<int, 3> idx{};
  for (int k = 0; k < 3; ++k) {
    // std::round rounds half away from zero.
    const double f = std::round((point[k] - meta.origin[k]) / meta.spacing[k]);
    if (!(f >= 0.0) || f >= static_cast<double>(meta.dims[k])) return std::nullopt;
    idx[k] = static_cast<int>(f);
  }
  return VoxelIndex{idx[0], idx[1], idx[2]};
}

Vec3 transform_direction(const RigidPose& pose, const Vec3& d) {
  const Mat4& m = pose.matrix();
  Vec3 out;
  for (int r = 0; r < 3; ++r) out[r] = m(r, 0) * d[0] + m(r, 1) * d[1] + m(r, 2) * d[2];
  const double n = out.norm();
  return n > 0.0 ? Vec3(out / n) : out;
}

}  // namespace aifrecon
