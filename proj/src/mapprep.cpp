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

#include "aifrecon/mapprep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "aifrecon/error.hpp"

namespace aifrecon {
namespace {

struct Tap {
  int offset;
  double weight;
};

// Correlates `in` with `taps` along one axis, clamping sample positions to the
// grid (edge replication).
ScalarVolume correlate_axis(const ScalarVolume& in, int axis, const std::vector<Tap>& taps) {
  const VolumeMeta& meta = in.meta();
  ScalarVolume out(meta);
  const int n = meta.dims[axis];
  const std::size_t stride = axis == 0 ? 1
                             : axis == 1 ? static_cast<std::size_t>(meta.dims[0])
                                         : static_cast<std::size_t>(meta.dims[0]) * meta.dims[1];
  const auto src = in.data();
  auto dst = out.data();
  for (std::size_t base = 0; base < meta.voxel_count(); ++base) {
    const int i = static_cast<int>((base / stride) % n);
    const std::size_t line0 = base - static_cast<std::size_t>(i) * stride;
    double acc = 0.0;
    for (const Tap& t : taps) {
      const int j = std::clamp(i + t.offset, 0, n - 1);
      acc += t.weight * src[line0 + static_cast<std::size_t>(j) * stride];
    }
    dst[base] = acc;
  }
  return out;
}

const std::vector<Tap>& smoothing_taps() {
  static const std::vector<Tap> taps{{-1, 1.0}, {0, 2.0}, {1, 1.0}};
  return taps;
}

const std::vector<Tap>& derivative_taps() {
  static const std::vector<Tap> taps{{-1, -1.0}, {1, 1.0}};
  return taps;
}

void require_sobel_dims(const VolumeMeta& meta) {
  if (meta.dims[0] < 3 || meta.dims[1] < 3 || meta.dims[2] < 3) {
    std::ostringstream os;
    os << "Sobel filter needs every dim >= 3, got " << meta.dims[0] << "x" << meta.dims[1] << "x"
       << meta.dims[2];
    throw Error(ErrorCode::DimsTooSmall, os.str());
  }
}

}  // namespace

ScalarVolume sobel3d_axis(const ScalarVolume& vol, Axis axis) {
  require_sobel_dims(vol.meta());
  const int a = static_cast<int>(axis);
  ScalarVolume out = vol;
  for (int k = 0; k < 3; ++k)
    out = correlate_axis(out, k, k == a ? derivative_taps() : smoothing_taps());
  return out;
}

ScalarVolume boundary_magnitude(const ScalarVolume& label) {
  const ScalarVolume gx = sobel3d_axis(label, Axis::X);
  const ScalarVolume gy = sobel3d_axis(label, Axis::Y);
  const ScalarVolume gz = sobel3d_axis(label, Axis::Z);
  ScalarVolume out(label.meta());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i] + gz[i] * gz[i]);
  return out;
}

ScalarVolume gaussian3d(const ScalarVolume& vol, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::InvalidArgument, "gaussian sigma must be finite and > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<Tap> taps;
  taps.reserve(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * (k * k) / (sigma * sigma));
    taps.push_back({k, w});
    sum += w;
  }
  for (Tap& t : taps) t.weight /= sum;

  ScalarVolume out = vol;
  for (int k = 0; k < 3; ++k) out = correlate_axis(out, k, taps);
  return out;
}

ScalarVolume max_normalize(const ScalarVolume& vol) {
  ScalarVolume out(vol.meta());
  if (vol.size() == 0) return out;
  const auto d = vol.data();
  const double mx = *std::max_element(d.begin(), d.end());
  if (!(mx > 0.0)) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(vol[i] / mx, 0.0, 1.0);
  return out;
}

ScalarVolume make_probability_map(const ScalarVolume& label, double sigma) {
  return max_normalize(gaussian3d(boundary_magnitude(label), sigma));
}

VectorVolume make_gradient_map(const ScalarVolume& prob) {
  const ScalarVolume gx = sobel3d_axis(prob, Axis::X);
  const ScalarVolume gy = sobel3d_axis(prob, Axis::Y);
  const ScalarVolume gz = sobel3d_axis(prob, Axis::Z);
  VectorVolume out(prob.meta());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec3 g(gx[i], gy[i], gz[i]);
    const double n = g.norm();
    out[i] = n < 1e-12 ? Vec3::Zero() : Vec3(g / n);
  }
  return out;
}

}  // namespace aifrecon
