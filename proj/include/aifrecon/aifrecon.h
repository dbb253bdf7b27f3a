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

#ifndef AIFRECON_H
#define AIFRECON_H

/*
 * C interface to the aifrecon library.
 *
 * Every object is an opaque handle created by an aif_*_create/load/make call
 * and released with the matching aif_*_free. Functions return an aif_status;
 * on failure aif_last_error() holds a message for the calling thread until its
 * next failing call. Output handles are only written on success.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AIFRECON_BUILDING_LIBRARY)
#    define AIF_API __declspec(dllexport)
#  else
#    define AIF_API __declspec(dllimport)
#  endif
#else
#  define AIF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aif_status {
  AIF_OK = 0,
  AIF_ERR_INVALID_ARGUMENT = 1,
  AIF_ERR_DIMS_TOO_SMALL = 2,
  AIF_ERR_META_MISMATCH = 3,
  AIF_ERR_EMPTY_REGION = 4,
  AIF_ERR_OUT_OF_RANGE = 5,
  AIF_ERR_PARSE = 6,
  AIF_ERR_IO = 7,
  AIF_ERR_INTERNAL = 8
} aif_status;

typedef enum aif_element_type {
  AIF_ELEM_U8 = 0,
  AIF_ELEM_F32 = 1,
  AIF_ELEM_VEC3F32 = 2
} aif_element_type;

typedef enum aif_axis { AIF_AXIS_X = 0, AIF_AXIS_Y = 1, AIF_AXIS_Z = 2 } aif_axis;

typedef enum aif_method { AIF_METHOD_BASELINE = 0, AIF_METHOD_AIF = 1 } aif_method;

typedef enum aif_probe_kind { AIF_PROBE_LINEAR = 0, AIF_PROBE_PHASED = 1 } aif_probe_kind;

typedef struct aif_volume aif_volume;               /* scalar voxel grid */
typedef struct aif_vector_volume aif_vector_volume; /* 3-vector voxel grid */
typedef struct aif_bundle aif_bundle;               /* tracked frame set */

typedef struct aif_volume_meta {
  int32_t dims[3];
  double spacing[3]; /* mm per voxel */
  double origin[3];  /* world position of voxel (0,0,0), mm */
} aif_volume_meta;

typedef struct aif_frame_geometry {
  int32_t width;
  int32_t height;
  double spacing[2]; /* mm per column, mm per row */
  aif_probe_kind probe;
  double apex_offset; /* mm, phased probes */
} aif_frame_geometry;

typedef struct aif_recon_config {
  double alpha;
  double beta;
  int compensate; /* nonzero enables reflection energy compensation */
  double hole_fill_radius;
  aif_method method;
} aif_recon_config;

typedef struct aif_metrics_report {
  double surface_mean;
  double background_mean;
  double contrast_ratio;
  double cnr;
  double completeness;
} aif_metrics_report;

AIF_API const char* aif_version(void);
AIF_API const char* aif_last_error(void);
AIF_API const char* aif_status_string(aif_status status);

/* alpha = 0.1, beta = 0.1, no compensation, hole radius 3, AIF method. */
AIF_API void aif_recon_config_default(aif_recon_config* cfg);

/* ---- scalar volumes ---------------------------------------------------- */

AIF_API aif_status aif_volume_create(const aif_volume_meta* meta, double fill, aif_volume** out);
AIF_API aif_status aif_volume_load(const char* path, aif_volume** out);
/* type is AIF_ELEM_U8 or AIF_ELEM_F32. */
AIF_API aif_status aif_volume_save(const aif_volume* vol, const char* path, aif_element_type type);
AIF_API aif_status aif_volume_get_meta(const aif_volume* vol, aif_volume_meta* out);
/* Element type the volume was loaded with (F32 for computed volumes). */
AIF_API aif_status aif_volume_get_element_type(const aif_volume* vol, aif_element_type* out);
/* Borrowed pointer to the x-fastest voxel values; valid until the volume is freed. */
AIF_API aif_status aif_volume_data(aif_volume* vol, double** data, size_t* count);
AIF_API void aif_volume_free(aif_volume* vol);

/* ---- vector volumes ---------------------------------------------------- */

AIF_API aif_status aif_vector_volume_load(const char* path, aif_vector_volume** out);
AIF_API aif_status aif_vector_volume_save(const aif_vector_volume* vol, const char* path);
AIF_API aif_status aif_vector_volume_get_meta(const aif_vector_volume* vol, aif_volume_meta* out);
AIF_API aif_status aif_vector_volume_get(const aif_vector_volume* vol, size_t index, double out[3]);
AIF_API void aif_vector_volume_free(aif_vector_volume* vol);

/* ---- surface maps ------------------------------------------------------ */

AIF_API aif_status aif_make_probability_map(const aif_volume* label, double sigma, aif_volume** out);
AIF_API aif_status aif_make_gradient_map(const aif_volume* prob, aif_vector_volume** out);

/* ---- phantoms (binary label volumes, element type u8) ------------------- */

AIF_API aif_status aif_make_phantom_sphere(const aif_volume_meta* meta, const double center[3],
                                           double radius, aif_volume** out);
/* Solid side: normal . p >= offset. */
AIF_API aif_status aif_make_phantom_half_space(const aif_volume_meta* meta, const double normal[3],
                                               double offset, aif_volume** out);
/* length <= 0 means unbounded along Z. */
AIF_API aif_status aif_make_phantom_twin_ridge(const aif_volume_meta* meta, const double center[3],
                                               double radius, double separation, double length,
                                               aif_volume** out);

/* ---- frame bundles ----------------------------------------------------- */

AIF_API aif_status aif_bundle_load(const char* dir, aif_bundle** out);
AIF_API aif_status aif_bundle_save(const aif_bundle* bundle, const char* dir);
AIF_API aif_status aif_bundle_frame_count(const aif_bundle* bundle, size_t* out);
AIF_API aif_status aif_bundle_get_geometry(const aif_bundle* bundle, aif_frame_geometry* out);
/* Borrowed W*H pixels and a row-major copy of the pose. */
AIF_API aif_status aif_bundle_get_frame(const aif_bundle* bundle, size_t index,
                                        const uint8_t** pixels, double pose[16]);
AIF_API void aif_bundle_free(aif_bundle* bundle);

/* ---- simulation -------------------------------------------------------- */

/* Renders one frame per pose of the JSON sweep config at config_path. */
AIF_API aif_status aif_simulate(const char* config_path, const aif_volume* phantom, uint64_t seed,
                                aif_bundle** out);

/* ---- reconstruction ---------------------------------------------------- */

/* The output grid is the grid of prob (dir must match it). out_visited may
 * be NULL; otherwise it receives a 0/1 volume of distributed voxels. */
AIF_API aif_status aif_reconstruct(const aif_bundle* bundle, const aif_volume* prob,
                                   const aif_vector_volume* dir, const aif_recon_config* cfg,
                                   aif_volume** out_volume, aif_volume** out_visited);

/* ---- metrics ----------------------------------------------------------- */

/* Surface voxels of a binary label dilated by one voxel, as a 0/1 volume. */
AIF_API aif_status aif_surface_mask_from_label(const aif_volume* label, aif_volume** out);
/* visited may be NULL (all voxels). */
AIF_API aif_status aif_otsu_threshold(const aif_volume* vol, const aif_volume* visited, double* out);
AIF_API aif_status aif_metrics(const aif_volume* vol, const aif_volume* mask, const aif_volume* visited,
                               double threshold, aif_metrics_report* out);

/* ---- slices ------------------------------------------------------------ */

AIF_API aif_status aif_export_slice(const aif_volume* vol, aif_axis axis, int32_t index,
                                    const char* pgm_path);

#ifdef __cplusplus
}
#endif

#endif /* AIFRECON_H */
