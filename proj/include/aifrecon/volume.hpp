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

#ifndef AIFRECON_VOLUME_HPP
#define AIFRECON_VOLUME_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "aifrecon/geometry.hpp"

namespace aifrecon {

/// Voxel grid of real scalars. Used for labels, probabilities, intensities,
/// visiting scores and masks alike; the element semantics belong to the caller.
class ScalarVolume {
 public:
  ScalarVolume() = default;
  explicit ScalarVolume(const VolumeMeta& meta, double fill = 0.0);
  ScalarVolume(const VolumeMeta& meta, std::vector<double> data);

  const VolumeMeta& meta() const { return meta_; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(int x, int y, int z) { return data_[meta_.linear_index(x, y, z)]; }
  double at(int x, int y, int z) const { return data_[meta_.linear_index(x, y, z)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const ScalarVolume&, const ScalarVolume&) = default;

 private:
  VolumeMeta meta_;
  std::vector<double> data_;
};

/// Voxel grid of 3-vectors (surface gradient directions).
class VectorVolume {
 public:
  VectorVolume() = default;
  explicit VectorVolume(const VolumeMeta& meta);
  VectorVolume(const VolumeMeta& meta, std::vector<Vec3> data);

  const VolumeMeta& meta() const { return meta_; }
  std::size_t size() const { return data_.size(); }

  Vec3& operator[](std::size_t i) { return data_[i]; }
  const Vec3& operator[](std::size_t i) const { return data_[i]; }
  const Vec3& at(int x, int y, int z) const { return data_[meta_.linear_index(x, y, z)]; }

  std::span<Vec3> data() { return data_; }
  std::span<const Vec3> data() const { return data_; }

  friend bool operator==(const VectorVolume&, const VectorVolume&) = default;

 private:
  VolumeMeta meta_;
  std::vector<Vec3> data_;
};

}  // namespace aifrecon

#endif  // AIFRECON_VOLUME_HPP
