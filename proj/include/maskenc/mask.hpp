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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "maskenc/errors.hpp"

namespace maskenc {

/// Full-resolution binary occupancy grid for one instance, row-major.
struct BinaryMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;  // height*width values in {0,1}

  static BinaryMask zeros(int h, int w) {
    if (h < 1 || w < 1) throw std::invalid_argument("mask dims must be >= 1");
    return BinaryMask{h, w, std::vector<std::uint8_t>(
                               static_cast<std::size_t>(h) * w, 0)};
  }

  std::uint8_t& at(int r, int c) {
    return data[static_cast<std::size_t>(r) * width + c];
  }
  std::uint8_t at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * width + c];
  }

  std::size_t area() const {
    std::size_t a = 0;
    for (auto v : data) a += v;
    return a;
  }
};

/// The m-by-m resampled mask target, row-major. Its flattening is the
/// vector the codebook projects.
struct GridMask {
  int m = 0;
  std::vector<std::uint8_t> data;  // m*m values in {0,1}

  static GridMask zeros(int m) {
    if (m < 1) throw std::invalid_argument("grid side must be >= 1");
    return GridMask{m, std::vector<std::uint8_t>(
                           static_cast<std::size_t>(m) * m, 0)};
  }

  std::uint8_t& at(int r, int c) {
    return data[static_cast<std::size_t>(r) * m + c];
  }
  std::uint8_t at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * m + c];
  }

  std::size_t area() const {
    std::size_t a = 0;
    for (auto v : data) a += v;
    return a;
  }
};

/// Axis-aligned pixel box, top-left corner plus extent.
struct BBox {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;

  bool operator==(const BBox&) const = default;
};

namespace detail {

inline double iou_impl(const std::vector<std::uint8_t>& a,
                       const std::vector<std::uint8_t>& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a[i] & b[i];
    uni += a[i] | b[i];
  }
  if (uni == 0) return 1.0;  // both empty
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace detail

/// Intersection over union; 1 when both masks are empty.
inline double iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.height != b.height || a.width != b.width)
    throw std::invalid_argument("iou: dimension mismatch");
  return detail::iou_impl(a.data, b.data);
}

inline double iou(const GridMask& a, const GridMask& b) {
  if (a.m != b.m) throw std::invalid_argument("iou: dimension mismatch");
  return detail::iou_impl(a.data, b.data);
}

/// Smallest axis-aligned box containing all set pixels.
inline BBox tight_bbox(const BinaryMask& mask) {
  int rmin = mask.height, rmax = -1, cmin = mask.width, cmax = -1;
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c)
      if (mask.at(r, c)) {
        if (r < rmin) rmin = r;
        if (r > rmax) rmax = r;
        if (c < cmin) cmin = c;
        if (c > cmax) cmax = c;
      }
  if (rmax < 0) throw std::invalid_argument("tight_bbox: empty mask");
  return BBox{cmin, rmin, cmax - cmin + 1, rmax - rmin + 1};
}

namespace detail {

inline int count_components_impl(const std::uint8_t* data, int h, int w,
                                 bool eight_connected) {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(h) * w, 0);
  std::vector<int> stack;
  int components = 0;
  for (int start = 0; start < h * w; ++start) {
    if (!data[start] || seen[start]) continue;
    ++components;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      int idx = stack.back();
      stack.pop_back();
      int r = idx / w, c = idx % w;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (!eight_connected && dr != 0 && dc != 0) continue;
          int rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
          int nidx = rr * w + cc;
          if (data[nidx] && !seen[nidx]) {
            seen[nidx] = 1;
            stack.push_back(nidx);
          }
        }
    }
  }
  return components;
}

}  // namespace detail

/// Number of connected foreground components (8-connectivity by default).
inline int count_components(const GridMask& g, bool eight_connected = true) {
  return detail::count_components_impl(g.data.data(), g.m, g.m,
                                       eight_connected);
}

inline int count_components(const BinaryMask& m, bool eight_connected = true) {
  return detail::count_components_impl(m.data.data(), m.height, m.width,
                                       eight_connected);
}

}  // namespace maskenc
