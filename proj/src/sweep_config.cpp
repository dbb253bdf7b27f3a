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

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "aifrecon/error.hpp"
#include "aifrecon/io.hpp"

namespace aifrecon {
namespace {

using nlohmann::json;

Vec3 vec3_of(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw Error(ErrorCode::Parse, std::string("'") + what + "' must be an array of three numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

FrameGeometry geometry_of(const json& g) {
  FrameGeometry geom;
  geom.width = g.at("width").get<int>();
  geom.height = g.at("height").get<int>();
  const json& sp = g.at("pixel_spacing");
  if (!sp.is_array() || sp.size() != 2)
    throw Error(ErrorCode::Parse, "'pixel_spacing' must be an array [sx, sy]");
  geom.spacing_x = sp[0].get<double>();
  geom.spacing_y = sp[1].get<double>();
  const std::string kind = g.value("probe_kind", "linear");
  if (kind == "linear") geom.probe = ProbeKind::Linear;
  else if (kind == "phased") geom.probe = ProbeKind::Phased;
  else throw Error(ErrorCode::Parse, "unknown probe_kind '" + kind + "'");
  read_opt(g, "apex_offset", geom.apex_offset);
  geom.validate();
  return geom;
}

ArcSweep arc_of(const json& a) {
  ArcSweep arc;
  arc.center = vec3_of(a.at("center"), "center");
  read_opt(a, "radius", arc.radius);
  read_opt(a, "start_deg", arc.start_deg);
  read_opt(a, "end_deg", arc.end_deg);
  read_opt(a, "frames", arc.frames);
  if (a.contains("axis")) arc.axis = vec3_of(a.at("axis"), "axis");
  if (a.contains("up")) arc.up = vec3_of(a.at("up"), "up");
  read_opt(a, "elevation_passes", arc.elevation_passes);
  read_opt(a, "elevation_step", arc.elevation_step);
  return arc;
}

}  // namespace

SimulationConfig parse_simulation_config(const std::string& text) {
  SimulationConfig cfg;
  try {
    const json root = json::parse(text);
    cfg.sweep.geom = geometry_of(root.at("geometry"));

    if (root.contains("reflection")) {
      const json& r = root.at("reflection");
      read_opt(r, "z1", cfg.reflection.z1);
      read_opt(r, "z2", cfg.reflection.z2);
      read_opt(r, "noise_sigma", cfg.reflection.noise_sigma);
      read_opt(r, "shadow_attenuation", cfg.reflection.shadow_attenuation);
      read_opt(r, "base_intensity", cfg.reflection.base_intensity);
      read_opt(r, "smear_max", cfg.reflection.smear_max);
    }
    cfg.reflection.validate();

    const bool has_arc = root.contains("arc");
    const bool has_poses = root.contains("poses");
    if (has_arc == has_poses) throw Error(ErrorCode::Parse, "config needs exactly one of 'arc' or 'poses'");
    if (has_arc) {
      cfg.sweep.poses = arc_poses(arc_of(root.at("arc")), cfg.sweep.geom);
    } else {
      for (const json& p : root.at("poses")) {
        if (!p.is_array() || p.size() != 16)
          throw Error(ErrorCode::Parse, "each pose must be 16 numbers, row-major");
        Mat4 m;
        for (int k = 0; k < 16; ++k) m(k / 4, k % 4) = p[k].get<double>();
        cfg.sweep.poses.push_back(RigidPose::from_matrix(m, kManifestPoseTolerance));
      }
    }
    if (root.contains("jitter")) {
      const json& j = root.at("jitter");
      read_opt(j, "translation_mm", cfg.sweep.jitter_translation_mm);
      read_opt(j, "rotation_deg", cfg.sweep.jitter_rotation_deg);
    }
    cfg.sweep.validate();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("simulation config: ") + e.what());
  }
  return cfg;
}

SimulationConfig load_simulation_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_simulation_config(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace aifrecon
