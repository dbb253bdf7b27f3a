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

// Brute-force reference filters for small volumes. Deliberately naive: full
// 3D kernels, direct triple loops, clamped sampling. Shares nothing with the
// separable implementation beyond the volume container.

#ifndef AIFRECON_TESTS_CONV_ORACLE_HPP
#define AIFRECON_TESTS_CONV_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "aifrecon/volume.hpp"

namespace oracle {

using aifrecon::ScalarVolume;

inline double clamped(const ScalarVolume& v, int x, int y, int z) {
  const auto& d = v.meta().dims;
  return v.at(std::clamp(x, 0, d[0] - 1), std::clamp(y, 0, d[1] - 1), std::clamp(z, 0, d[2] - 1));
}

// 27-tap Sobel: weight(dx,dy,dz) = deriv(d_axis) * smooth(other) * smooth(other).
inline ScalarVolume sobel(const ScalarVolume& in, int axis) {
  const double deriv[3] = {-1.0, 0.0, 1.0};
  const double smooth[3] = {1.0, 2.0, 1.0};
  ScalarVolume out(in.meta());
  const auto& d = in.meta().dims;
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) {
        double acc = 0.0;
        for (int dz = -1; dz <= 1; ++dz)
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              const int off[3] = {dx, dy, dz};
              double w = 1.0;
              for (int k = 0; k < 3; ++k) w *= (k == axis ? deriv : smooth)[off[k] + 1];
              acc += w * clamped(in, x + dx, y + dy, z + dz);
            }
        out.at(x, y, z) = acc;
      }
  return out;
}

inline ScalarVolume magnitude(const ScalarVolume& in) {
  const ScalarVolume gx = sobel(in, 0), gy = sobel(in, 1), gz = sobel(in, 2);
  ScalarVolume out(in.meta());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i] + gz[i] * gz[i]);
  return out;
}

// Full (2r+1)^3 Gaussian with the 3D kernel normalized as a whole.
inline ScalarVolume gaussian(const ScalarVolume& in, double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k;
  double total = 0.0;
  for (int dz = -r; dz <= r; ++dz)
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        const double w = std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * sigma * sigma));
        k.push_back(w);
        total += w;
      }
  ScalarVolume out(in.meta());
  const auto& d = in.meta().dims;
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) {
        double acc = 0.0;
        std::size_t n = 0;
        for (int dz = -r; dz <= r; ++dz)
          for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) acc += k[n++] / total * clamped(in, x + dx, y + dy, z + dz);
        out.at(x, y, z) = acc;
      }
  return out;
}

}  // namespace oracle

#endif  // AIFRECON_TESTS_CONV_ORACLE_HPP
