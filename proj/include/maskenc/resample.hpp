// Copyright 2026 the maskenc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maskenc/mask.hpp"

namespace maskenc {

namespace detail {

// Bilinear sample of a binary field at (sy, sx), half-pixel-center
// convention with edge clamping. `at(r, c)` reads the field.
template <typename At>
inline double bilinear(At&& at, int h, int w, double sy, double sx) {
  sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
  sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
  const int r0 = static_cast<int>(std::floor(sy));
  const int c0 = static_cast<int>(std::floor(sx));
  const int r1 = std::min(r0 + 1, h - 1);
  const int c1 = std::min(c0 + 1, w - 1);
  const double fy = sy - r0, fx = sx - c0;
  return at(r0, c0) * (1 - fy) * (1 - fx) + at(r0, c1) * (1 - fy) * fx +
         at(r1, c0) * fy * (1 - fx) + at(r1, c1) * fy * fx;
}

inline void check_box(const BBox& box, int height, int width) {
  if (box.w < 1 || box.h < 1 || box.x0 < 0 || box.y0 < 0 ||
      box.x0 + box.w > width || box.y0 + box.h > height)
    throw std::invalid_argument("box outside image");
}

}  // namespace detail

/// Crop `mask` to `box` and bilinearly resample the crop to an m-by-m grid,
/// sampling at cell centers and thresholding at 0.5 (ties round up). When
/// the box is exactly m-by-m this is an exact copy.
inline GridMask crop_resize(const BinaryMask& mask, const BBox& box, int m) {
  if (m < 2) throw std::invalid_argument("crop_resize: m must be >= 2");
  detail::check_box(box, mask.height, mask.width);
  GridMask grid = GridMask::zeros(m);
  const auto at = [&](int r, int c) -> double {
    return mask.at(box.y0 + r, box.x0 + c);
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double sy = (i + 0.5) * box.h / m - 0.5;
      const double sx = (j + 0.5) * box.w / m - 0.5;
      const double v = detail::bilinear(at, box.h, box.w, sy, sx);
      grid.at(i, j) = v >= 0.5 ? 1 : 0;
    }
  return grid;
}

/// Inverse of crop_resize's geometry: bilinearly upsample the grid into
/// `box` on an otherwise empty height-by-width canvas, threshold at 0.5.
inline BinaryMask paste(const GridMask& grid, const BBox& box, int height,
                        int width) {
  detail::check_box(box, height, width);
  BinaryMask mask = BinaryMask::zeros(height, width);
  const auto at = [&](int r, int c) -> double { return grid.at(r, c); };
  for (int r = 0; r < box.h; ++r)
    for (int c = 0; c < box.w; ++c) {
      const double gy = (r + 0.5) * grid.m / box.h - 0.5;
      const double gx = (c + 0.5) * grid.m / box.w - 0.5;
      const double v = detail::bilinear(at, grid.m, grid.m, gy, gx);
      if (v >= 0.5) mask.at(box.y0 + r, box.x0 + c) = 1;
    }
  return mask;
}

}  // namespace maskenc
