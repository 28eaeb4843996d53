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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "maskenc/mask.hpp"
#include "maskenc/polygon.hpp"

namespace maskenc {

/// Contour-style shape descriptor: K center-to-boundary distances at
/// uniformly spaced angles. The lossy baseline the dictionary codec is
/// compared against; by construction it can describe at most one
/// star-shaped region, which is exactly its failure mode on hollow or
/// disjoint masks.
struct PolarShape {
  double center_row = 0.0;
  double center_col = 0.0;
  std::vector<double> rays;  // ray k at angle 2*pi*k/K from the +x axis
};

/// Arithmetic mean of set-cell coordinates (cell (r,c) sits at (r, c)).
inline std::pair<double, double> mass_center(const GridMask& grid) {
  double sr = 0, sc = 0;
  std::size_t n = 0;
  for (int r = 0; r < grid.m; ++r)
    for (int c = 0; c < grid.m; ++c)
      if (grid.at(r, c)) {
        sr += r;
        sc += c;
        ++n;
      }
  if (n == 0) throw std::invalid_argument("mass_center: empty grid");
  return {sr / static_cast<double>(n), sc / static_cast<double>(n)};
}

/// Ray k is the maximum distance from the mass center to any set cell
/// whose direction falls in the angular bin of ray k (bin width 2*pi/K);
/// empty bins give 0. Multi-intersection boundaries keep the farthest hit.
inline PolarShape polar_encode(const GridMask& grid, int rays) {
  if (rays < 3) throw std::invalid_argument("polar_encode: need K >= 3");
  const auto [cr, cc] = mass_center(grid);  // throws on empty grid
  PolarShape shape;
  shape.center_row = cr;
  shape.center_col = cc;
  shape.rays.assign(rays, 0.0);
  const double step = 2.0 * std::numbers::pi / rays;
  for (int r = 0; r < grid.m; ++r)
    for (int c = 0; c < grid.m; ++c) {
      if (!grid.at(r, c)) continue;
      const double dy = r - cr, dx = c - cc;
      const double dist = std::hypot(dx, dy);
      if (dist == 0.0) continue;  // the center cell has no direction
      int k = static_cast<int>(std::lround(std::atan2(dy, dx) / step));
      k = ((k % rays) + rays) % rays;
      if (dist > shape.rays[k]) shape.rays[k] = dist;
    }
  return shape;
}

/// Fill the polygon whose k-th vertex is center + rays[k] * (cos, sin) of
/// the ray angle, rasterized with the pixel-center rule and clipped to the
/// grid. All-zero rays give an empty grid. A single closed contour bounds
/// one region; where zero-length rays pinch the rasterization into
/// fragments, only the largest fragment is kept (first in scan order on
/// ties), so the output is always one connected region or empty.
inline GridMask polar_decode(const PolarShape& shape, int m) {
  const int rays = static_cast<int>(shape.rays.size());
  if (rays < 3) throw std::invalid_argument("polar_decode: need K >= 3");
  const double step = 2.0 * std::numbers::pi / rays;
  Polygon poly;
  poly.reserve(2 * rays);
  for (int k = 0; k < rays; ++k) {
    const double t = k * step;
    // cell coordinates -> image coordinates of the rasterizer (+0.5)
    poly.push_back(shape.center_col + shape.rays[k] * std::cos(t) + 0.5);
    poly.push_back(shape.center_row + shape.rays[k] * std::sin(t) + 0.5);
  }
  const BinaryMask filled = polygon_rasterize({poly}, m, m);
  GridMask grid = GridMask::zeros(m);
  grid.data = filled.data;
  if (count_components(grid) <= 1) return grid;

  // label fragments, keep the largest
  std::vector<int> label(grid.data.size(), -1);
  std::vector<std::size_t> areas;
  std::vector<int> stack;
  for (int start = 0; start < m * m; ++start) {
    if (!grid.data[start] || label[start] >= 0) continue;
    const int id = static_cast<int>(areas.size());
    areas.push_back(0);
    label[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      ++areas[id];
      const int r = idx / m, c = idx % m;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= m || cc < 0 || cc >= m) continue;
          const int nidx = rr * m + cc;
          if (grid.data[nidx] && label[nidx] < 0) {
            label[nidx] = id;
            stack.push_back(nidx);
          }
        }
    }
  }
  int keep = 0;
  for (std::size_t id = 1; id < areas.size(); ++id)
    if (areas[id] > areas[keep]) keep = static_cast<int>(id);
  for (std::size_t i = 0; i < grid.data.size(); ++i)
    if (grid.data[i] && label[i] != keep) grid.data[i] = 0;
  return grid;
}

}  // namespace maskenc
