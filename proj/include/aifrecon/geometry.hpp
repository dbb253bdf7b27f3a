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

#ifndef AIFRECON_GEOMETRY_HPP
#define AIFRECON_GEOMETRY_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace aifrecon {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix<double, 4, 4, Eigen::RowMajor>;

/// Largest absolute entry of RᵀR − I for the rotation block of `m`.
double orthonormality_error(const Mat4& m);

/// Rigid 4×4 homogeneous transform from frame (image) coordinates to world
/// coordinates, translation in millimeters.
class RigidPose {
 public:
  RigidPose() : m_(Mat4::Identity()) {}

  /// Throws Error(InvalidArgument) unless the rotation block is orthonormal
  /// within `tolerance` and the last row is exactly (0, 0, 0, 1).
  static RigidPose from_matrix(const Mat4& m, double tolerance = 1e-6);
  static RigidPose from_rotation_translation(const Mat3& r, const Vec3& t);

  const Mat4& matrix() const { return m_; }
  Mat3 rotation() const { return m_.topLeftCorner<3, 3>(); }
  Vec3 translation() const { return m_.topRightCorner<3, 1>(); }

  friend bool operator==(const RigidPose& a, const RigidPose& b) { return a.m_ == b.m_; }

 private:
  explicit RigidPose(const Mat4& m) : m_(m) {}
  Mat4 m_;
};

enum class ProbeKind { Linear, Phased };

struct FrameGeometry {
  int width = 1;
  int height = 1;
  double spacing_x = 1.0;  // mm per column
  double spacing_y = 1.0;  // mm per row
  ProbeKind probe = ProbeKind::Linear;
  double apex_offset = 0.0;  // mm above the first row; phased probes only

  void validate() const;
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  /// Virtual apex of a phased array in image coordinates.
  Vec3 apex() const { return {width * spacing_x / 2.0, -apex_offset, 0.0}; }

  friend bool operator==(const FrameGeometry&, const FrameGeometry&) = default;
};

/// Per-pixel unit beam direction in image coordinates (X = column, Y = depth,
/// Z = elevation), stored row-major.
class BeamDirectionMap {
 public:
  BeamDirectionMap(int width, int height, std::vector<Vec3> dirs);

  int width() const { return width_; }
  int height() const { return height_; }
  const Vec3& at(int col, int row) const { return dirs_[static_cast<std::size_t>(row) * width_ + col]; }
  const std::vector<Vec3>& dirs() const { return dirs_; }

 private:
  int width_;
  int height_;
  std::vector<Vec3> dirs_;
};

struct VoxelIndex {
  int x = 0;
  int y = 0;
  int z = 0;
  friend bool operator==(const VoxelIndex&, const VoxelIndex&) = default;
};

/// Axis-aligned voxel grid. `origin` is the world position of the center of
/// voxel (0, 0, 0). Storage order everywhere is x fastest, then y, then z.
struct VolumeMeta {
  std::array<int, 3> dims{1, 1, 1};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};

  void validate() const;
  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  std::size_t linear_index(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * dims[1] + y) * dims[0] + x;
  }
  std::size_t linear_index(const VoxelIndex& v) const { return linear_index(v.x, v.y, v.z); }
  VoxelIndex voxel_of(std::size_t linear) const;
  Vec3 voxel_center(int x, int y, int z) const;
  bool contains(int x, int y, int z) const {
    return x >= 0 && y >= 0 && z >= 0 && x < dims[0] && y < dims[1] && z < dims[2];
  }

  friend bool operator==(const VolumeMeta& a, const VolumeMeta& b) {
    return a.dims == b.dims && a.spacing == b.spacing && a.origin == b.origin;
  }
};

BeamDirectionMap make_beam_direction_map(const FrameGeometry& geom);

/// World position (mm) of the center of pixel (col, row); the image plane is
/// z = 0 in frame coordinates.
Vec3 pixel_to_world(int col, int row, const FrameGeometry& geom, const RigidPose& pose);

/// Nearest voxel of `point`, rounding half away from zero on every axis.
/// std::nullopt when the rounded index falls outside the grid.
std::optional<VoxelIndex> world_to_voxel(const Vec3& point, const VolumeMeta& meta);

/// Rotation block applied to `d`, renormalized to unit length.
Vec3 transform_direction(const RigidPose& pose, const Vec3& d);

}  // namespace aifrecon

#endif  // AIFRECON_GEOMETRY_HPP
