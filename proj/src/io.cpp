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

#include "aifrecon/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "aifrecon/error.hpp"

namespace aifrecon {
namespace fs = std::filesystem;

namespace {

constexpr const char* kVolumeMagic = "AIFVOL 1";
constexpr const char* kBundleMagic = "AIFBUNDLE 1";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void parse_error(const fs::path& file, int line, const std::string& msg) {
  std::ostringstream os;
  os << file.string();
  if (line > 0) os << ":" << line;
  os << ": " << msg;
  throw Error(ErrorCode::Parse, os.str());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "read failed: " + path.string());
  return bytes;
}

void put_f32_le(std::string& out, float f) {
  const auto u = std::bit_cast<std::uint32_t>(f);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xFFu));
}

float get_f32_le(const unsigned char* p) {
  std::uint32_t u = 0;
  for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return std::bit_cast<float>(u);
}

std::string volume_header_text(const VolumeMeta& meta, ElementType type) {
  std::ostringstream os;
  os << kVolumeMagic << "\n";
  os << "dims " << meta.dims[0] << " " << meta.dims[1] << " " << meta.dims[2] << "\n";
  os << "spacing " << fmt_double(meta.spacing[0]) << " " << fmt_double(meta.spacing[1]) << " "
     << fmt_double(meta.spacing[2]) << "\n";
  os << "origin " << fmt_double(meta.origin[0]) << " " << fmt_double(meta.origin[1]) << " "
     << fmt_double(meta.origin[2]) << "\n";
  os << "element_type " << element_type_name(type) << "\n";
  os << "end_header\n";
  return os.str();
}

// Splits `bytes` into its header lines and the payload offset.
struct ParsedVolume {
  VolumeHeader header;
  std::size_t payload_offset = 0;
};

ParsedVolume parse_volume(const std::string& bytes, const fs::path& path) {
  ParsedVolume pv;
  std::size_t pos = 0;
  int line_no = 0;
  bool have_dims = false, have_spacing = false, have_origin = false, have_type = false;
  bool done = false;
  while (!done) {
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string::npos) parse_error(path, line_no + 1, "header ended before end_header");
    const std::string line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != kVolumeMagic) parse_error(path, 1, "expected '" + std::string(kVolumeMagic) + "'");
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    auto read3 = [&](auto& arr) {
      for (int k = 0; k < 3; ++k)
        if (!(ls >> arr[k])) parse_error(path, line_no, "'" + key + "' needs three numbers");
    };
    if (key == "dims") {
      read3(pv.header.meta.dims);
      have_dims = true;
    } else if (key == "spacing") {
      read3(pv.header.meta.spacing);
      have_spacing = true;
    } else if (key == "origin") {
      read3(pv.header.meta.origin);
      have_origin = true;
    } else if (key == "element_type") {
      std::string t;
      ls >> t;
      if (t == "u8") pv.header.type = ElementType::U8;
      else if (t == "f32") pv.header.type = ElementType::F32;
      else if (t == "vec3f32") pv.header.type = ElementType::Vec3F32;
      else parse_error(path, line_no, "unknown element_type '" + t + "'");
      have_type = true;
    } else if (key == "end_header") {
      done = true;
      continue;
    } else {
      parse_error(path, line_no, "unknown header key '" + key + "'");
    }
    std::string rest;
    if (ls >> rest) parse_error(path, line_no, "trailing text '" + rest + "'");
  }
  if (!have_dims || !have_spacing || !have_origin || !have_type)
    parse_error(path, 0, "header must define dims, spacing, origin and element_type");
  try {
    pv.header.meta.validate();
  } catch (const Error& e) {
    parse_error(path, 0, e.what());
  }
  pv.payload_offset = pos;
  const std::size_t expected = pv.header.meta.voxel_count() * element_size(pv.header.type);
  const std::size_t found = bytes.size() - pos;
  if (found != expected) {
    std::ostringstream os;
    os << "payload is " << found << " bytes, expected " << expected;
    parse_error(path, 0, os.str());
  }
  return pv;
}

}  // namespace

const char* element_type_name(ElementType t) {
  switch (t) {
    case ElementType::U8: return "u8";
    case ElementType::F32: return "f32";
    case ElementType::Vec3F32: return "vec3f32";
  }
  return "?";
}

std::size_t element_size(ElementType t) {
  switch (t) {
    case ElementType::U8: return 1;
    case ElementType::F32: return 4;
    case ElementType::Vec3F32: return 12;
  }
  return 0;
}

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename into " + path.string());
  }
}

void save_volume(const ScalarVolume& vol, const fs::path& path, ElementType type) {
  if (type == ElementType::Vec3F32)
    throw Error(ErrorCode::InvalidArgument, "scalar volume cannot be saved as vec3f32");
  std::string bytes = volume_header_text(vol.meta(), type);
  bytes.reserve(bytes.size() + vol.size() * element_size(type));
  for (double v : vol.data()) {
    if (type == ElementType::U8)
      bytes.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)))));
    else
      put_f32_le(bytes, static_cast<float>(v));
  }
  write_file_atomic(path, bytes);
}

void save_vector_volume(const VectorVolume& vol, const fs::path& path) {
  std::string bytes = volume_header_text(vol.meta(), ElementType::Vec3F32);
  bytes.reserve(bytes.size() + vol.size() * 12);
  for (const Vec3& v : vol.data())
    for (int k = 0; k < 3; ++k) put_f32_le(bytes, static_cast<float>(v[k]));
  write_file_atomic(path, bytes);
}

VolumeHeader read_volume_header(const fs::path& path) { return parse_volume(read_file(path), path).header; }

LoadedVolume load_volume(const fs::path& path) {
  const std::string bytes = read_file(path);
  const ParsedVolume pv = parse_volume(bytes, path);
  if (pv.header.type == ElementType::Vec3F32)
    parse_error(path, 0, "expected a scalar volume (u8 or f32), found vec3f32");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + pv.payload_offset;
  std::vector<double> data(pv.header.meta.voxel_count());
  for (std::size_t i = 0; i < data.size(); ++i)
    data[i] = pv.header.type == ElementType::U8 ? static_cast<double>(p[i]) : get_f32_le(p + 4 * i);
  return {ScalarVolume(pv.header.meta, std::move(data)), pv.header.type};
}

VectorVolume load_vector_volume(const fs::path& path) {
  const std::string bytes = read_file(path);
  const ParsedVolume pv = parse_volume(bytes, path);
  if (pv.header.type != ElementType::Vec3F32)
    parse_error(path, 0, std::string("expected a vec3f32 volume, found ") + element_type_name(pv.header.type));
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + pv.payload_offset;
  std::vector<Vec3> data(pv.header.meta.voxel_count());
  for (std::size_t i = 0; i < data.size(); ++i)
    data[i] = Vec3(get_f32_le(p + 12 * i), get_f32_le(p + 12 * i + 4), get_f32_le(p + 12 * i + 8));
  return VectorVolume(pv.header.meta, std::move(data));
}

namespace {

std::string frame_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05zu.raw", i);
  return buf;
}

}  // namespace

void save_bundle(const TrackedFrameSet& set, const fs::path& dir) {
  set.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create bundle directory " + dir.string());

  std::ostringstream manifest;
  manifest << kBundleMagic << "\n";
  manifest << "width " << set.geom.width << "\n";
  manifest << "height " << set.geom.height << "\n";
  manifest << "count " << set.frames.size() << "\n";
  manifest << "pixel_spacing " << fmt_double(set.geom.spacing_x) << " " << fmt_double(set.geom.spacing_y) << "\n";
  manifest << "probe_kind " << (set.geom.probe == ProbeKind::Linear ? "linear" : "phased") << "\n";
  manifest << "apex_offset " << fmt_double(set.geom.apex_offset) << "\n";
  for (std::size_t i = 0; i < set.frames.size(); ++i) {
    const std::string name = frame_file_name(i);
    const auto& px = set.frames[i].pixels;
    write_file_atomic(dir / name, std::string(px.begin(), px.end()));
    manifest << "frame " << i << " " << name;
    const Mat4& m = set.frames[i].pose.matrix();
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) manifest << " " << fmt_double(m(r, c));
    manifest << "\n";
  }
  // Manifest last: a bundle with a manifest is complete.
  write_file_atomic(dir / kManifestName, manifest.str());
}

TrackedFrameSet load_bundle(const fs::path& dir) {
  const fs::path mpath = dir / kManifestName;
  std::ifstream in(mpath);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + mpath.string());

  TrackedFrameSet set;
  long long count = -1;
  bool have_w = false, have_h = false, have_sp = false, have_kind = false, have_apex = false;
  std::vector<std::string> files;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != kBundleMagic) parse_error(mpath, 1, "expected '" + std::string(kBundleMagic) + "'");
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    auto need = [&](bool ok) {
      if (!ok) parse_error(mpath, line_no, "malformed '" + key + "' line");
    };
    if (key == "width") {
      need(static_cast<bool>(ls >> set.geom.width));
      have_w = true;
    } else if (key == "height") {
      need(static_cast<bool>(ls >> set.geom.height));
      have_h = true;
    } else if (key == "count") {
      need(static_cast<bool>(ls >> count) && count >= 1);
    } else if (key == "pixel_spacing") {
      need(static_cast<bool>(ls >> set.geom.spacing_x >> set.geom.spacing_y));
      have_sp = true;
    } else if (key == "probe_kind") {
      std::string kind;
      need(static_cast<bool>(ls >> kind));
      if (kind == "linear") set.geom.probe = ProbeKind::Linear;
      else if (kind == "phased") set.geom.probe = ProbeKind::Phased;
      else parse_error(mpath, line_no, "unknown probe_kind '" + kind + "'");
      have_kind = true;
    } else if (key == "apex_offset") {
      need(static_cast<bool>(ls >> set.geom.apex_offset));
      have_apex = true;
    } else if (key == "frame") {
      std::size_t index = 0;
      std::string name;
      need(static_cast<bool>(ls >> index >> name));
      if (index != files.size()) {
        std::ostringstream os;
        os << "frame index " << index << " out of order, expected " << files.size();
        parse_error(mpath, line_no, os.str());
      }
      Mat4 m;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          if (!(ls >> m(r, c))) parse_error(mpath, line_no, "frame pose needs 16 numbers");
      std::string rest;
      if (ls >> rest) parse_error(mpath, line_no, "trailing text '" + rest + "'");
      try {
        set.frames.push_back({{}, RigidPose::from_matrix(m, kManifestPoseTolerance)});
      } catch (const Error& e) {
        std::ostringstream os;
        os << "frame " << index << ": " << e.what();
        parse_error(mpath, line_no, os.str());
      }
      files.push_back(name);
      continue;
    } else {
      parse_error(mpath, line_no, "unknown key '" + key + "'");
    }
    std::string rest;
    if (ls >> rest) parse_error(mpath, line_no, "trailing text '" + rest + "'");
  }
  if (!have_w || !have_h || !have_sp || !have_kind || !have_apex || count < 0)
    parse_error(mpath, 0, "manifest must define width, height, count, pixel_spacing, probe_kind, apex_offset");
  try {
    set.geom.validate();
  } catch (const Error& e) {
    parse_error(mpath, 0, e.what());
  }
  if (static_cast<long long>(files.size()) != count) {
    std::ostringstream os;
    os << "count is " << count << " but " << files.size() << " frame lines are listed";
    parse_error(mpath, 0, os.str());
  }

  const std::size_t expected = set.geom.pixel_count();
  for (std::size_t i = 0; i < files.size(); ++i) {
    const fs::path fpath = dir / files[i];
    if (!fs::exists(fpath)) throw Error(ErrorCode::Io, "frame " + std::to_string(i) + ": missing file " + fpath.string());
    const std::string bytes = read_file(fpath);
    if (bytes.size() != expected) {
      std::ostringstream os;
      os << fpath.string() << ": frame " << i << " has " << bytes.size() << " bytes, expected "
         << expected << " (" << set.geom.width << "x" << set.geom.height << ")";
      throw Error(ErrorCode::Parse, os.str());
    }
    set.frames[i].pixels.assign(bytes.begin(), bytes.end());
  }
  return set;
}

GrayImage extract_slice(const LoadedVolume& lv, Axis axis, int index) {
  const ScalarVolume& vol = lv.volume;
  const VolumeMeta& meta = vol.meta();
  const int a = static_cast<int>(axis);
  if (index < 0 || index >= meta.dims[a]) {
    std::ostringstream os;
    os << "slice index " << index << " outside [0, " << meta.dims[a] << ")";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  const int u_axis = axis == Axis::X ? 1 : 0;
  const int v_axis = axis == Axis::Z ? 1 : 2;
  GrayImage img{meta.dims[u_axis], meta.dims[v_axis], {}};
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);

  double lo = 0.0, hi = 0.0;
  if (lv.type != ElementType::U8 && vol.size() > 0) {
    const auto [mn, mx] = std::minmax_element(vol.data().begin(), vol.data().end());
    lo = *mn;
    hi = *mx;
  }
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      std::array<int, 3> p{};
      p[a] = index;
      p[u_axis] = u;
      p[v_axis] = v;
      const double val = vol.at(p[0], p[1], p[2]);
      std::uint8_t out = 0;
      if (lv.type == ElementType::U8)
        out = static_cast<std::uint8_t>(std::lround(std::clamp(val, 0.0, 255.0)));
      else if (hi > lo)
        out = static_cast<std::uint8_t>(std::lround((val - lo) / (hi - lo) * 255.0));
      img.pixels[static_cast<std::size_t>(v) * img.width + u] = out;
    }
  }
  return img;
}

void write_pgm(const GrayImage& img, const fs::path& path) {
  std::string bytes = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  bytes.append(img.pixels.begin(), img.pixels.end());
  write_file_atomic(path, bytes);
}

GrayImage read_pgm(const fs::path& path) {
  const std::string bytes = read_file(path);
  std::istringstream is(bytes);
  std::string magic;
  int w = 0, h = 0, maxv = 0;
  if (!(is >> magic >> w >> h >> maxv) || magic != "P5" || maxv != 255 || w < 1 || h < 1)
    parse_error(path, 0, "not an 8-bit binary PGM");
  is.get();
  const auto offset = static_cast<std::size_t>(is.tellg());
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (bytes.size() - offset != n) parse_error(path, 0, "PGM payload size mismatch");
  GrayImage img{w, h, std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end())};
  return img;
}

}  // namespace aifrecon
