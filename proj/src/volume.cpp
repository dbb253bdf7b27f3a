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

#include "aifrecon/volume.hpp"

#include "aifrecon/error.hpp"

namespace aifrecon {

ScalarVolume::ScalarVolume(const VolumeMeta& meta, double fill) : meta_(meta) {
  meta_.validate();
  data_.assign(meta_.voxel_count(), fill);
}

ScalarVolume::ScalarVolume(const VolumeMeta& meta, std::vector<double> data)
    : meta_(meta), data_(std::move(data)) {
  meta_.validate();
  if (data_.size() != meta_.voxel_count())
    throw Error(ErrorCode::MetaMismatch, "scalar volume payload does not match dims");
}

VectorVolume::VectorVolume(const VolumeMeta& meta) : meta_(meta) {
  meta_.validate();
  data_.assign(meta_.voxel_count(), Vec3::Zero());
}

VectorVolume::VectorVolume(const VolumeMeta& meta, std::vector<Vec3> data)
    : meta_(meta), data_(std::move(data)) {
  meta_.validate();
  if (data_.size() != meta_.voxel_count())
    throw Error(ErrorCode::MetaMismatch, "vector volume payload does not match dims");
}

}  // namespace aifrecon
