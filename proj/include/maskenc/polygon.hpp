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
#include <vector>

#include "maskenc/mask.hpp"

namespace maskenc {

/// A closed polygon as interleaved image coordinates x0,y0,x1,y1,...
/// (the closing edge back to the first vertex is implicit).
using Polygon = std::vector<double>;

/// Scanline fill: pixel (r,c) is set iff its center (c+0.5, r+0.5) lies
/// inside the union of the polygons, each filled with the even-odd rule.
/// Boundary ties resolve left-inclusive, right-exclusive.
inline BinaryMask polygon_rasterize(const std::vector<Polygon>& polygons,
                                    int height, int width) {
  BinaryMask out = BinaryMask::zeros(height, width);
  for (const auto& poly : polygons) {
    if (poly.size() < 6 || poly.size() % 2 != 0)
      throw std::invalid_argument(
          "polygon_rasterize: polygon needs >= 3 (x,y) vertices");
    for (double v : poly)
      if (!std::isfinite(v))
        throw std::invalid_argument(
            "polygon_rasterize: non-finite coordinate");
  }

  std::vector<double> crossings;
  for (const auto& poly : polygons) {
    const std::size_t n = poly.size() / 2;
    double ymin = poly[1], ymax = poly[1];
    for (std::size_t i = 0; i < n; ++i) {
      ymin = std::min(ymin, poly[2 * i + 1]);
      ymax = std::max(ymax, poly[2 * i + 1]);
    }
    const int r0 = std::max(0, static_cast<int>(std::floor(ymin - 0.5)));
    const int r1 = std::min(height - 1, static_cast<int>(std::ceil(ymax)));
    for (int r = r0; r <= r1; ++r) {
      const double y = r + 0.5;
      crossings.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double x1 = poly[2 * i], y1 = poly[2 * i + 1];
        const double x2 = poly[2 * j], y2 = poly[2 * j + 1];
        if (y1 == y2) continue;  // horizontal edges contribute no crossing
        // half-open span [min(y1,y2), max(y1,y2)) avoids double counting
        // at shared vertices
        if ((y >= y1 && y < y2) || (y >= y2 && y < y1))
          crossings.push_back(x1 + (y - y1) * (x2 - x1) / (y2 - y1));
      }
      std::sort(crossings.begin(), crossings.end());
      for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
        // pixel centers in [x_k, x_{k+1})
        int c0 = static_cast<int>(std::ceil(crossings[k] - 0.5));
        int c1 = static_cast<int>(std::ceil(crossings[k + 1] - 0.5)) - 1;
        c0 = std::max(c0, 0);
        c1 = std::min(c1, width - 1);
        for (int c = c0; c <= c1; ++c) out.at(r, c) = 1;
      }
    }
  }
  return out;
}

}  // namespace maskenc
