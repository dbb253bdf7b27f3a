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

#ifndef AIFRECON_SIMULATE_HPP
#define AIFRECON_SIMULATE_HPP

#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "aifrecon/geometry.hpp"
#include "aifrecon/recon.hpp"
#include "aifrecon/volume.hpp"

namespace aifrecon {

// Phantom solids. A voxel belongs to the solid when its center lies strictly
// inside (sphere, ridges) or on the solid side of the plane (half-space).

struct Sphere {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 0.0;
};

/// Points p with normal·p >= offset. `normal` points into the solid.
struct HalfSpace {
  Vec3 normal{0.0, 1.0, 0.0};
  double offset = 0.0;
};

/// Two parallel cylinders running along Z, separated along X by
/// `separation` (center to center). Emulates adjacent spinous processes with
/// the inter-spinous gap between them.
struct TwinRidge {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 1.0;
  double separation = 4.0;
  double length = std::numeric_limits<double>::infinity();  // extent along Z
};

using PhantomShape = std::variant<Sphere, HalfSpace, TwinRidge>;

ScalarVolume make_phantom(const PhantomShape& shape, const VolumeMeta& meta);

struct ReflectionParams {
  double z1 = 1.63;                // soft tissue impedance (MRayl)
  double z2 = 7.8;                 // bone impedance (MRayl)
  double noise_sigma = 0.0;        // additive speckle std-dev, intensity units
  double shadow_attenuation = 0.0; // gain applied per surface already crossed
  double base_intensity = 255.0;   // incident intensity I_i
  double smear_max = 0.0;          // mm of depth smear at grazing incidence; 0 disables

  void validate() const;
  /// ((z2 - z1) / (z2 + z1))²
  double reflection_coefficient() const;
};

/// |cos θ · R² · I_i|
double reflected_intensity(double cos_theta, const ReflectionParams& params);

/// Unit normals pointing into the solid: gradient of the label after a
/// Gaussian blur. Voxel staircases on oblique planes alias into slow wobbles
/// of the normal; sigma = 4 keeps the cosine error on a 60 degree plane
/// under 1%.
VectorVolume surface_normals(const ScalarVolume& label, double sigma = 4.0);

/// Real-valued frame before 8-bit quantization, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  double at(int col, int row) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

/// Renders one frame. Each pixel's beam is marched from the transducer face
/// (row 0 for linear probes, the apex for phased ones) in steps of the
/// smallest voxel spacing. The k-th entry into the solid (0-based) echoes
/// reflected_intensity(|beam·normal|)·shadow_attenuation^k at its depth;
/// everything else is background 0. Gaussian speckle from `noise_seed` is
/// added last and the result is clamped to [0, 255].
Image synthesize_frame(const ScalarVolume& label, const VectorVolume& surface_normals,
                       const RigidPose& pose, const FrameGeometry& geom,
                       const BeamDirectionMap& bmap, const ReflectionParams& params,
                       std::uint64_t noise_seed);

/// Probe orbit around `axis` through `center`. At angle 0 the probe sits at
/// center + radius·up looking back at the center; the image plane is
/// perpendicular to `axis`. With elevation_passes > 1, consecutive frames
/// cycle through that many parallel planes `elevation_step` mm apart.
struct ArcSweep {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 40.0;
  double start_deg = -45.0;
  double end_deg = 45.0;
  int frames = 60;
  Vec3 axis{0.0, 0.0, 1.0};
  Vec3 up{0.0, -1.0, 0.0};
  int elevation_passes = 1;
  double elevation_step = 1.0;
};

std::vector<RigidPose> arc_poses(const ArcSweep& arc, const FrameGeometry& geom);

struct SweepSpec {
  FrameGeometry geom;
  std::vector<RigidPose> poses;
  double jitter_translation_mm = 0.0;  // recorded-pose tracking noise
  double jitter_rotation_deg = 0.0;

  void validate() const;
};

/// Mixes a master seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// One frame per pose; frame i uses noise seed derive_seed(seed, i). Images
/// are rendered at the true pose; the recorded pose carries the optional
/// jitter.
TrackedFrameSet make_sweep(const SweepSpec& spec, const ScalarVolume& label,
                           const ReflectionParams& params, std::uint64_t seed);

}  // namespace aifrecon

#endif  // AIFRECON_SIMULATE_HPP
