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

#include "aifrecon/aifrecon.h"

#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "aifrecon/error.hpp"
#include "aifrecon/io.hpp"
#include "aifrecon/mapprep.hpp"
#include "aifrecon/metrics.hpp"
#include "aifrecon/recon.hpp"
#include "aifrecon/simulate.hpp"

struct aif_volume {
  aifrecon::LoadedVolume v;
};

struct aif_vector_volume {
  aifrecon::VectorVolume v;
};

struct aif_bundle {
  aifrecon::TrackedFrameSet set;
};

namespace {

using namespace aifrecon;

thread_local std::string g_last_error;

aif_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return AIF_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimsTooSmall: return AIF_ERR_DIMS_TOO_SMALL;
    case ErrorCode::MetaMismatch: return AIF_ERR_META_MISMATCH;
    case ErrorCode::EmptyRegion: return AIF_ERR_EMPTY_REGION;
    case ErrorCode::OutOfRange: return AIF_ERR_OUT_OF_RANGE;
    case ErrorCode::Parse: return AIF_ERR_PARSE;
    case ErrorCode::Io: return AIF_ERR_IO;
  }
  return AIF_ERR_INTERNAL;
}

aif_status fail(aif_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs `fn`, converting every exception into a status; nothing escapes the
// C boundary.
template <typename Fn>
aif_status guarded(Fn&& fn) {
  try {
    fn();
    return AIF_OK;
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(AIF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(AIF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(AIF_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

VolumeMeta meta_from_c(const aif_volume_meta* m) {
  require(m != nullptr, "null volume meta");
  VolumeMeta meta;
  for (int k = 0; k < 3; ++k) {
    meta.dims[k] = m->dims[k];
    meta.spacing[k] = m->spacing[k];
    meta.origin[k] = m->origin[k];
  }
  meta.validate();
  return meta;
}

void meta_to_c(const VolumeMeta& meta, aif_volume_meta* out) {
  for (int k = 0; k < 3; ++k) {
    out->dims[k] = meta.dims[k];
    out->spacing[k] = meta.spacing[k];
    out->origin[k] = meta.origin[k];
  }
}

Vec3 vec_from_c(const double* v, const char* what) {
  require(v != nullptr, what);
  return {v[0], v[1], v[2]};
}

aif_volume* new_volume(ScalarVolume vol, ElementType type) {
  return new aif_volume{LoadedVolume{std::move(vol), type}};
}

VisitedMask visited_of(const aif_volume* visited) {
  VisitedMask mask;
  if (visited == nullptr) return mask;
  const ScalarVolume& v = visited->v.volume;
  mask.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mask[i] = v[i] >= 0.5 ? 1 : 0;
  return mask;
}

}  // namespace

extern "C" {

const char* aif_version(void) { return "0.1.0"; }

const char* aif_last_error(void) { return g_last_error.c_str(); }

const char* aif_status_string(aif_status status) {
  switch (status) {
    case AIF_OK: return "ok";
    case AIF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AIF_ERR_DIMS_TOO_SMALL: return "dims too small";
    case AIF_ERR_META_MISMATCH: return "grid mismatch";
    case AIF_ERR_EMPTY_REGION: return "empty region";
    case AIF_ERR_OUT_OF_RANGE: return "out of range";
    case AIF_ERR_PARSE: return "parse error";
    case AIF_ERR_IO: return "i/o error";
    case AIF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void aif_recon_config_default(aif_recon_config* cfg) {
  if (cfg == nullptr) return;
  const ReconConfig d;
  cfg->alpha = d.alpha;
  cfg->beta = d.beta;
  cfg->compensate = d.compensate ? 1 : 0;
  cfg->hole_fill_radius = d.hole_fill_radius;
  cfg->method = d.method == ReconMethod::Aif ? AIF_METHOD_AIF : AIF_METHOD_BASELINE;
}

aif_status aif_volume_create(const aif_volume_meta* meta, double fill, aif_volume** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new_volume(ScalarVolume(meta_from_c(meta), fill), ElementType::F32);
  });
}

aif_status aif_volume_load(const char* path, aif_volume** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null path or output handle");
    *out = new aif_volume{load_volume(path)};
  });
}

aif_status aif_volume_save(const aif_volume* vol, const char* path, aif_element_type type) {
  return guarded([&] {
    require(vol != nullptr && path != nullptr, "null volume or path");
    require(type == AIF_ELEM_U8 || type == AIF_ELEM_F32, "scalar volumes save as u8 or f32");
    save_volume(vol->v.volume, path, type == AIF_ELEM_U8 ? ElementType::U8 : ElementType::F32);
  });
}

aif_status aif_volume_get_meta(const aif_volume* vol, aif_volume_meta* out) {
  return guarded([&] {
    require(vol != nullptr && out != nullptr, "null volume or output");
    meta_to_c(vol->v.volume.meta(), out);
  });
}

aif_status aif_volume_get_element_type(const aif_volume* vol, aif_element_type* out) {
  return guarded([&] {
    require(vol != nullptr && out != nullptr, "null volume or output");
    *out = vol->v.type == ElementType::U8 ? AIF_ELEM_U8 : AIF_ELEM_F32;
  });
}

aif_status aif_volume_data(aif_volume* vol, double** data, size_t* count) {
  return guarded([&] {
    require(vol != nullptr && data != nullptr && count != nullptr, "null volume or output");
    *data = vol->v.volume.data().data();
    *count = vol->v.volume.size();
  });
}

void aif_volume_free(aif_volume* vol) { delete vol; }

aif_status aif_vector_volume_load(const char* path, aif_vector_volume** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null path or output handle");
    *out = new aif_vector_volume{load_vector_volume(path)};
  });
}

aif_status aif_vector_volume_save(const aif_vector_volume* vol, const char* path) {
  return guarded([&] {
    require(vol != nullptr && path != nullptr, "null volume or path");
    save_vector_volume(vol->v, path);
  });
}

aif_status aif_vector_volume_get_meta(const aif_vector_volume* vol, aif_volume_meta* out) {
  return guarded([&] {
    require(vol != nullptr && out != nullptr, "null volume or output");
    meta_to_c(vol->v.meta(), out);
  });
}

aif_status aif_vector_volume_get(const aif_vector_volume* vol, size_t index, double out[3]) {
  return guarded([&] {
    require(vol != nullptr && out != nullptr, "null volume or output");
    if (index >= vol->v.size()) throw Error(ErrorCode::OutOfRange, "voxel index out of range");
    for (int k = 0; k < 3; ++k) out[k] = vol->v[index][k];
  });
}

void aif_vector_volume_free(aif_vector_volume* vol) { delete vol; }

aif_status aif_make_probability_map(const aif_volume* label, double sigma, aif_volume** out) {
  return guarded([&] {
    require(label != nullptr && out != nullptr, "null label or output handle");
    *out = new_volume(make_probability_map(label->v.volume, sigma), ElementType::F32);
  });
}

aif_status aif_make_gradient_map(const aif_volume* prob, aif_vector_volume** out) {
  return guarded([&] {
    require(prob != nullptr && out != nullptr, "null probability map or output handle");
    *out = new aif_vector_volume{make_gradient_map(prob->v.volume)};
  });
}

aif_status aif_make_phantom_sphere(const aif_volume_meta* meta, const double center[3], double radius,
                                   aif_volume** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(radius >= 0.0, "sphere radius must be >= 0");
    *out = new_volume(make_phantom(Sphere{vec_from_c(center, "null center"), radius}, meta_from_c(meta)),
                      ElementType::U8);
  });
}

aif_status aif_make_phantom_half_space(const aif_volume_meta* meta, const double normal[3], double offset,
                                       aif_volume** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    const Vec3 n = vec_from_c(normal, "null normal");
    require(n.norm() > 0.0, "half-space normal must be nonzero");
    *out = new_volume(make_phantom(HalfSpace{n, offset}, meta_from_c(meta)), ElementType::U8);
  });
}

aif_status aif_make_phantom_twin_ridge(const aif_volume_meta* meta, const double center[3], double radius,
                                       double separation, double length, aif_volume** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(radius >= 0.0 && separation >= 0.0, "ridge radius and separation must be >= 0");
    TwinRidge r;
    r.center = vec_from_c(center, "null center");
    r.radius = radius;
    r.separation = separation;
    r.length = length > 0.0 ? length : std::numeric_limits<double>::infinity();
    *out = new_volume(make_phantom(r, meta_from_c(meta)), ElementType::U8);
  });
}

aif_status aif_bundle_load(const char* dir, aif_bundle** out) {
  return guarded([&] {
    require(dir != nullptr && out != nullptr, "null path or output handle");
    *out = new aif_bundle{load_bundle(dir)};
  });
}

aif_status aif_bundle_save(const aif_bundle* bundle, const char* dir) {
  return guarded([&] {
    require(bundle != nullptr && dir != nullptr, "null bundle or path");
    save_bundle(bundle->set, dir);
  });
}

aif_status aif_bundle_frame_count(const aif_bundle* bundle, size_t* out) {
  return guarded([&] {
    require(bundle != nullptr && out != nullptr, "null bundle or output");
    *out = bundle->set.frames.size();
  });
}

aif_status aif_bundle_get_geometry(const aif_bundle* bundle, aif_frame_geometry* out) {
  return guarded([&] {
    require(bundle != nullptr && out != nullptr, "null bundle or output");
    const FrameGeometry& g = bundle->set.geom;
    out->width = g.width;
    out->height = g.height;
    out->spacing[0] = g.spacing_x;
    out->spacing[1] = g.spacing_y;
    out->probe = g.probe == ProbeKind::Linear ? AIF_PROBE_LINEAR : AIF_PROBE_PHASED;
    out->apex_offset = g.apex_offset;
  });
}

aif_status aif_bundle_get_frame(const aif_bundle* bundle, size_t index, const uint8_t** pixels,
                                double pose[16]) {
  return guarded([&] {
    require(bundle != nullptr, "null bundle");
    if (index >= bundle->set.frames.size()) throw Error(ErrorCode::OutOfRange, "frame index out of range");
    const TrackedFrame& f = bundle->set.frames[index];
    if (pixels != nullptr) *pixels = f.pixels.data();
    if (pose != nullptr)
      for (int k = 0; k < 16; ++k) pose[k] = f.pose.matrix()(k / 4, k % 4);
  });
}

void aif_bundle_free(aif_bundle* bundle) { delete bundle; }

aif_status aif_simulate(const char* config_path, const aif_volume* phantom, uint64_t seed, aif_bundle** out) {
  return guarded([&] {
    require(config_path != nullptr && phantom != nullptr && out != nullptr,
            "null config path, phantom or output handle");
    const SimulationConfig cfg = load_simulation_config(config_path);
    *out = new aif_bundle{make_sweep(cfg.sweep, phantom->v.volume, cfg.reflection, seed)};
  });
}

aif_status aif_reconstruct(const aif_bundle* bundle, const aif_volume* prob, const aif_vector_volume* dir,
                           const aif_recon_config* cfg, aif_volume** out_volume, aif_volume** out_visited) {
  return guarded([&] {
    require(bundle != nullptr && prob != nullptr && dir != nullptr && cfg != nullptr && out_volume != nullptr,
            "null bundle, map, config or output handle");
    ReconConfig rc;
    rc.alpha = cfg->alpha;
    rc.beta = cfg->beta;
    rc.compensate = cfg->compensate != 0;
    rc.hole_fill_radius = cfg->hole_fill_radius;
    require(cfg->method == AIF_METHOD_BASELINE || cfg->method == AIF_METHOD_AIF, "unknown method");
    rc.method = cfg->method == AIF_METHOD_BASELINE ? ReconMethod::Baseline : ReconMethod::Aif;
    rc.validate();

    const ScalarVolume& p = prob->v.volume;
    const VolumeMeta& meta = p.meta();
    const BeamDirectionMap bmap = make_beam_direction_map(bundle->set.geom);
    const ReconOutput dist = distribute(bundle->set, p, dir->v, bmap, meta, rc);
    ScalarVolume filled = fill_holes(dist, rc.hole_fill_radius);

    std::unique_ptr<aif_volume> visited;
    if (out_visited != nullptr) {
      ScalarVolume mask(meta);
      for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = dist.visited[i] ? 1.0 : 0.0;
      visited.reset(new_volume(std::move(mask), ElementType::U8));
    }
    *out_volume = new_volume(std::move(filled), ElementType::F32);
    if (out_visited != nullptr) *out_visited = visited.release();
  });
}

aif_status aif_surface_mask_from_label(const aif_volume* label, aif_volume** out) {
  return guarded([&] {
    require(label != nullptr && out != nullptr, "null label or output handle");
    const SurfaceMask m = surface_mask_from_label(label->v.volume);
    ScalarVolume vol(m.meta);
    for (std::size_t i = 0; i < vol.size(); ++i) vol[i] = m.mask[i];
    *out = new_volume(std::move(vol), ElementType::U8);
  });
}

aif_status aif_otsu_threshold(const aif_volume* vol, const aif_volume* visited, double* out) {
  return guarded([&] {
    require(vol != nullptr && out != nullptr, "null volume or output");
    *out = otsu_threshold(vol->v.volume, visited_of(visited));
  });
}

aif_status aif_metrics(const aif_volume* vol, const aif_volume* mask, const aif_volume* visited,
                       double threshold, aif_metrics_report* out) {
  return guarded([&] {
    require(vol != nullptr && mask != nullptr && out != nullptr, "null volume, mask or output");
    const SurfaceMask sm = surface_mask_from_volume(mask->v.volume);
    const Contrast c = contrast(vol->v.volume, sm, visited_of(visited));
    const double comp = completeness(vol->v.volume, sm, threshold);
    out->surface_mean = c.surface_mean;
    out->background_mean = c.background_mean;
    out->contrast_ratio = c.contrast_ratio;
    out->cnr = c.cnr;
    out->completeness = comp;
  });
}

aif_status aif_export_slice(const aif_volume* vol, aif_axis axis, int32_t index, const char* pgm_path) {
  return guarded([&] {
    require(vol != nullptr && pgm_path != nullptr, "null volume or path");
    require(axis == AIF_AXIS_X || axis == AIF_AXIS_Y || axis == AIF_AXIS_Z, "unknown axis");
    write_pgm(extract_slice(vol->v, static_cast<Axis>(axis), index), pgm_path);
  });
}

}  // extern "C"
