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

#include "aifrecon/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

#include "aifrecon/error.hpp"
#include "aifrecon/mapprep.hpp"

namespace aifrecon {
namespace {

struct SolidTest {
  const Vec3& p;

  bool operator()(const Sphere& s) const { return (p - s.center).squaredNorm() < s.radius * s.radius; }
  bool operator()(const HalfSpace& h) const { return h.normal.dot(p) >= h.offset; }
  bool operator()(const TwinRidge& r) const {
    if (!(std::abs(p[2] - r.center[2]) <= r.length / 2.0)) return false;
    const double dy = p[1] - r.center[1];
    for (double side : {-0.5, 0.5}) {
      const double dx = p[0] - (r.center[0] + side * r.separation);
      if (dx * dx + dy * dy < r.radius * r.radius) return true;
    }
    return false;
  }
};

struct Echo {
  double t;
  double cos_theta;
};

bool inside_at(const ScalarVolume& label, const Vec3& p, std::size_t* idx) {
  const auto v = world_to_voxel(p, label.meta());
  if (!v) return false;
  *idx = label.meta().linear_index(*v);
  return label[*idx] >= 0.5;
}

// Entries into the solid along origin + t·dir for t in [0, t_max], detected
// as outside→inside changes between consecutive samples.
std::vector<Echo> trace_ray(const ScalarVolume& label, const VectorVolume& normals, const Vec3& origin,
                            const Vec3& dir, double t_max, double step) {
  std::vector<Echo> echoes;
  std::size_t idx = 0;
  bool prev = inside_at(label, origin, &idx);
  const int n = static_cast<int>(std::ceil(t_max / step)) + 1;
  for (int k = 1; k <= n; ++k) {
    const double t = k * step;
    const bool cur = inside_at(label, origin + t * dir, &idx);
    if (cur && !prev) {
      Vec3 normal = normals[idx];
      if (normal.squaredNorm() == 0.0) {
        // Fall back to the voxel nearest the crossing itself.
        const auto v = world_to_voxel(origin + (t - step / 2.0) * dir, label.meta());
        if (v) normal = normals[label.meta().linear_index(*v)];
      }
      echoes.push_back({t - step / 2.0, std::min(1.0, std::abs(dir.dot(normal)))});
    }
    prev = cur;
  }
  return echoes;
}

double pixel_value(const std::vector<Echo>& echoes, double t_pixel, double tol,
                   const ReflectionParams& params) {
  double gain = 1.0;
  for (const Echo& e : echoes) {
    const double smear = params.smear_max * (1.0 - e.cos_theta);
    if (t_pixel >= e.t - tol && t_pixel <= e.t + tol + smear)
      return reflected_intensity(e.cos_theta, params) * gain;
    gain *= params.shadow_attenuation;
  }
  return 0.0;
}

}  // namespace

ScalarVolume make_phantom(const PhantomShape& shape, const VolumeMeta& meta) {
  ScalarVolume out(meta);
  for (int z = 0; z < meta.dims[2]; ++z)
    for (int y = 0; y < meta.dims[1]; ++y)
      for (int x = 0; x < meta.dims[0]; ++x) {
        const Vec3 p = meta.voxel_center(x, y, z);
        if (std::visit(SolidTest{p}, shape)) out.at(x, y, z) = 1.0;
      }
  return out;
}

void ReflectionParams::validate() const {
  if (!(z1 > 0.0) || !(z2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "impedances must be > 0");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise sigma must be >= 0");
  if (!(shadow_attenuation >= 0.0 && shadow_attenuation <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "shadow attenuation must lie in [0, 1]");
  if (!(base_intensity >= 0.0)) throw Error(ErrorCode::InvalidArgument, "base intensity must be >= 0");
  if (!(smear_max >= 0.0)) throw Error(ErrorCode::InvalidArgument, "smear must be >= 0");
}

double ReflectionParams::reflection_coefficient() const {
  const double r = (z2 - z1) / (z2 + z1);
  return r * r;
}

double reflected_intensity(double cos_theta, const ReflectionParams& params) {
  return std::abs(cos_theta * params.reflection_coefficient() * params.base_intensity);
}

VectorVolume surface_normals(const ScalarVolume& label, double sigma) {
  return make_gradient_map(gaussian3d(label, sigma));
}

Image synthesize_frame(const ScalarVolume& label, const VectorVolume& normals, const RigidPose& pose,
                       const FrameGeometry& geom, const BeamDirectionMap& bmap,
                       const ReflectionParams& params, std::uint64_t noise_seed) {
  geom.validate();
  params.validate();
  if (!(label.meta() == normals.meta()))
    throw Error(ErrorCode::MetaMismatch, "surface normals do not share the label grid");
  if (bmap.width() != geom.width || bmap.height() != geom.height)
    throw Error(ErrorCode::MetaMismatch, "beam direction map does not match the frame size");

  const VolumeMeta& meta = label.meta();
  const double step = meta.spacing.minCoeff();
  Image img{geom.width, geom.height, std::vector<double>(geom.pixel_count(), 0.0)};

  if (geom.probe == ProbeKind::Linear) {
    const double tol = 0.5 * geom.spacing_y;
    const double t_max = (geom.height - 1) * geom.spacing_y + tol + params.smear_max;
    for (int col = 0; col < geom.width; ++col) {
      const Vec3 origin = pixel_to_world(col, 0, geom, pose);
      const Vec3 dir = transform_direction(pose, bmap.at(col, 0));
      const auto echoes = trace_ray(label, normals, origin, dir, t_max, step);
      if (echoes.empty()) continue;
      for (int row = 0; row < geom.height; ++row)
        img.pixels[static_cast<std::size_t>(row) * geom.width + col] =
            pixel_value(echoes, row * geom.spacing_y, tol, params);
    }
  } else {
    const Vec3 apex_img = geom.apex();
    const Mat4& m = pose.matrix();
    const Vec3 apex = m.topLeftCorner<3, 3>() * apex_img + m.topRightCorner<3, 1>();
    for (int row = 0; row < geom.height; ++row) {
      for (int col = 0; col < geom.width; ++col) {
        const Vec3& d_img = bmap.at(col, row);
        const Vec3 p_img(col * geom.spacing_x, row * geom.spacing_y, 0.0);
        const double t_pixel = (p_img - apex_img).norm();
        const double tol =
            0.5 * (std::abs(d_img[0]) * geom.spacing_x + std::abs(d_img[1]) * geom.spacing_y);
        const Vec3 dir = transform_direction(pose, d_img);
        const auto echoes =
            trace_ray(label, normals, apex, dir, t_pixel + tol + params.smear_max, step);
        img.pixels[static_cast<std::size_t>(row) * geom.width + col] =
            pixel_value(echoes, t_pixel, tol, params);
      }
    }
  }

  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> speckle(0.0, params.noise_sigma > 0.0 ? params.noise_sigma : 1.0);
  for (double& v : img.pixels) {
    if (params.noise_sigma > 0.0) v += speckle(rng);
    v = std::clamp(v, 0.0, 255.0);
  }
  return img;
}

std::vector<RigidPose> arc_poses(const ArcSweep& arc, const FrameGeometry& geom) {
  geom.validate();
  if (arc.frames < 1) throw Error(ErrorCode::InvalidArgument, "arc sweep needs at least one frame");
  if (arc.elevation_passes < 1)
    throw Error(ErrorCode::InvalidArgument, "arc sweep needs at least one elevation pass");
  if (!(arc.radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "arc radius must be >= 0");
  const Vec3 axis = arc.axis.normalized();
  const Vec3 up0 = (arc.up - arc.up.dot(axis) * axis);
  if (!(axis.allFinite()) || up0.norm() < 1e-9)
    throw Error(ErrorCode::InvalidArgument, "arc up direction must not be parallel to the axis");
  const Vec3 up = up0.normalized();
  const Vec3 apex_img = geom.apex();

  std::vector<RigidPose> poses;
  poses.reserve(arc.frames);
  for (int k = 0; k < arc.frames; ++k) {
    const double frac = arc.frames > 1 ? static_cast<double>(k) / (arc.frames - 1) : 0.0;
    const double phi = (arc.start_deg + (arc.end_deg - arc.start_deg) * frac) * std::numbers::pi / 180.0;
    const Vec3 u = Eigen::AngleAxisd(phi, axis) * up;
    const Vec3 y_img = -u;
    const Vec3 z_img = axis;
    const Vec3 x_img = y_img.cross(z_img);
    Mat3 r;
    r.col(0) = x_img;
    r.col(1) = y_img;
    r.col(2) = z_img;
    const double elevation =
        ((k % arc.elevation_passes) - (arc.elevation_passes - 1) / 2.0) * arc.elevation_step;
    const Vec3 probe = arc.center + arc.radius * u + elevation * axis;
    poses.push_back(RigidPose::from_rotation_translation(r, probe - r * apex_img));
  }
  return poses;
}

void SweepSpec::validate() const {
  geom.validate();
  if (poses.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one pose");
  if (!(jitter_translation_mm >= 0.0) || !(jitter_rotation_deg >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "pose jitter must be >= 0");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrackedFrameSet make_sweep(const SweepSpec& spec, const ScalarVolume& label,
                           const ReflectionParams& params, std::uint64_t seed) {
  spec.validate();
  params.validate();
  const VectorVolume normals = surface_normals(label);
  const BeamDirectionMap bmap = make_beam_direction_map(spec.geom);

  TrackedFrameSet set{spec.geom, {}};
  set.frames.reserve(spec.poses.size());
  // Jitter draws come from their own stream so enabling it leaves the
  // speckle of every frame unchanged.
  std::mt19937_64 jitter_rng(derive_seed(seed, ~std::uint64_t{0}));
  std::normal_distribution<double> unit(0.0, 1.0);

  for (std::size_t i = 0; i < spec.poses.size(); ++i) {
    const RigidPose& truth = spec.poses[i];
    const Image img = synthesize_frame(label, normals, truth, spec.geom, bmap, params, derive_seed(seed, i));
    TrackedFrame frame;
    frame.pixels.resize(img.pixels.size());
    std::transform(img.pixels.begin(), img.pixels.end(), frame.pixels.begin(),
                   [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); });

    frame.pose = truth;
    if (spec.jitter_translation_mm > 0.0 || spec.jitter_rotation_deg > 0.0) {
      Vec3 axis(unit(jitter_rng), unit(jitter_rng), unit(jitter_rng));
      const double angle = spec.jitter_rotation_deg * unit(jitter_rng) * std::numbers::pi / 180.0;
      const Vec3 shift(spec.jitter_translation_mm * unit(jitter_rng),
                       spec.jitter_translation_mm * unit(jitter_rng),
                       spec.jitter_translation_mm * unit(jitter_rng));
      if (axis.norm() < 1e-12) axis = Vec3::UnitZ();
      const Mat3 dr = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
      frame.pose = RigidPose::from_rotation_translation(dr * truth.rotation(), truth.translation() + shift);
    }
    set.frames.push_back(std::move(frame));
  }
  return set;
}

}  // namespace aifrecon
