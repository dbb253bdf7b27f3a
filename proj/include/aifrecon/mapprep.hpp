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

#ifndef AIFRECON_MAPPREP_HPP
#define AIFRECON_MAPPREP_HPP

#include "aifrecon/volume.hpp"

namespace aifrecon {

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Default Gaussian standard deviation (voxels) of the emulated surface
/// estimator's uncertainty.
inline constexpr double kDefaultProbabilitySigma = 10.0;

/// Separable 3D Sobel response along `axis`: central difference
/// out(i) = f(i+1) - f(i-1) along `axis`, (1, 2, 1) smoothing along the two
/// others. Borders replicate the edge voxel. Throws DimsTooSmall if any dim < 3.
ScalarVolume sobel3d_axis(const ScalarVolume& vol, Axis axis);

/// sqrt(gx² + gy² + gz²) of the three Sobel responses.
ScalarVolume boundary_magnitude(const ScalarVolume& label);

/// Separable Gaussian, radius ceil(3σ), per-axis kernel normalized to 1,
/// edge replication.
ScalarVolume gaussian3d(const ScalarVolume& vol, double sigma);

/// vol / max(vol), or all zeros when max <= 0.
ScalarVolume max_normalize(const ScalarVolume& vol);

/// Emulated bone-surface estimator: boundary magnitude of the label, blurred,
/// max-normalized to [0, 1].
ScalarVolume make_probability_map(const ScalarVolume& label, double sigma = kDefaultProbabilitySigma);

/// Unit Sobel gradient of the probability map, pointing toward increasing
/// probability. Gradients shorter than 1e-12 become exact zero vectors.
VectorVolume make_gradient_map(const ScalarVolume& prob);

}  // namespace aifrecon

#endif  // AIFRECON_MAPPREP_HPP
