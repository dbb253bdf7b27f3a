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

#ifndef AIFRECON_IO_HPP
#define AIFRECON_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aifrecon/mapprep.hpp"
#include "aifrecon/recon.hpp"
#include "aifrecon/simulate.hpp"
#include "aifrecon/volume.hpp"

namespace aifrecon {

// Volume files: a text header terminated by "end_header\n", followed by the
// raw little-endian payload in x-fastest order. See docs/FORMATS.md.

enum class ElementType { U8, F32, Vec3F32 };

const char* element_type_name(ElementType t);
std::size_t element_size(ElementType t);

struct VolumeHeader {
  VolumeMeta meta;
  ElementType type = ElementType::F32;
};

struct LoadedVolume {
  ScalarVolume volume;
  ElementType type = ElementType::F32;
};

/// `type` must be U8 or F32. U8 rounds half away from zero and clamps to
/// [0, 255].
void save_volume(const ScalarVolume& vol, const std::filesystem::path& path, ElementType type);
void save_vector_volume(const VectorVolume& vol, const std::filesystem::path& path);

VolumeHeader read_volume_header(const std::filesystem::path& path);
/// Scalar payloads only; a vec3f32 file is a Parse error.
LoadedVolume load_volume(const std::filesystem::path& path);
VectorVolume load_vector_volume(const std::filesystem::path& path);

// Frame bundles: a directory holding manifest.txt and one raw 8-bit file per
// frame.

inline constexpr const char* kManifestName = "manifest.txt";
/// Rotation tolerance used when validating poses read from a manifest.
inline constexpr double kManifestPoseTolerance = 1e-4;

void save_bundle(const TrackedFrameSet& set, const std::filesystem::path& dir);
TrackedFrameSet load_bundle(const std::filesystem::path& dir);

// Simulation config (JSON): geometry, reflection model, and either an explicit
// pose list or an arc sweep.

struct SimulationConfig {
  SweepSpec sweep;
  ReflectionParams reflection;
};

SimulationConfig parse_simulation_config(const std::string& json_text);
SimulationConfig load_simulation_config(const std::filesystem::path& path);

// Slice export as binary PGM (P5).

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// Axis Z: image (x, y); axis Y: image (x, z); axis X: image (y, z).
/// U8 volumes are copied verbatim; F32 volumes are mapped linearly from the
/// volume's [min, max] onto [0, 255], or to all zeros when min == max.
/// Throws OutOfRange for a bad index.
GrayImage extract_slice(const LoadedVolume& vol, Axis axis, int index);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace aifrecon

#endif  // AIFRECON_IO_HPP
