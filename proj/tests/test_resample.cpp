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

#include <catch2/catch_amalgamated.hpp>

#include "maskenc/polygon.hpp"
#include "maskenc/resample.hpp"
#include "support/test_support.hpp"

using namespace maskenc;

TEST_CASE("crop_resize identity when the box is exactly m by m",
          "[resample]") {
  testsupport::Rng rng(5);
  BinaryMask mask = testsupport::random_mask(rng, 20, 20, 0.5);
  const BBox box{3, 4, 8, 8};
  const GridMask grid = crop_resize(mask, box, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      CHECK(grid.at(r, c) == mask.at(box.y0 + r, box.x0 + c));
}

TEST_CASE("all-one crop of any size resamples to all ones", "[resample]") {
  BinaryMask mask = BinaryMask::zeros(33, 57);
  for (auto& v : mask.data) v = 1;
  const GridMask grid = crop_resize(mask, BBox{0, 0, 57, 33}, 28);
  CHECK(grid.area() == 28u * 28u);
}

TEST_CASE("box preconditions", "[resample]") {
  BinaryMask mask = BinaryMask::zeros(10, 10);
  CHECK_THROWS_AS(crop_resize(mask, BBox{5, 5, 6, 6}, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(crop_resize(mask, BBox{0, 0, 10, 10}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(paste(GridMask::zeros(4), BBox{-1, 0, 4, 4}, 10, 10),
                  std::invalid_argument);
}

TEST_CASE("56x56 disk resampled to 28x28 matches the analytic disk",
          "[resample]") {
  // frozen against the scalar reference script: IoU 0.9824561404
  BinaryMask src = BinaryMask::zeros(56, 56);
  for (int r = 0; r < 56; ++r)
    for (int c = 0; c < 56; ++c)
      if ((r - 27.5) * (r - 27.5) + (c - 27.5) * (c - 27.5) <= 24.0 * 24.0)
        src.at(r, c) = 1;
  const GridMask res = crop_resize(src, BBox{0, 0, 56, 56}, 28);
  const GridMask analytic = testsupport::disk_grid(28, 13.5, 13.5, 12.0);
  const double v = iou(res, analytic);
  CHECK(v >= 0.93);
  CHECK(v == Catch::Approx(0.9824561404).margin(1e-9));
}

TEST_CASE("paste places an exact copy when box matches the grid size",
          "[resample]") {
  testsupport::Rng rng(6);
  const GridMask grid = testsupport::random_grid(rng, 6, 0.5);
  const BinaryMask mask = paste(grid, BBox{4, 7, 6, 6}, 20, 20);
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 20; ++c) {
      const bool inside = r >= 7 && r < 13 && c >= 4 && c < 10;
      CHECK(mask.at(r, c) == (inside ? grid.at(r - 7, c - 4) : 0));
    }
}

TEST_CASE("all-zero grid pastes to an all-zero mask", "[resample]") {
  CHECK(paste(GridMask::zeros(8), BBox{2, 2, 30, 17}, 40, 40).area() == 0);
}

TEST_CASE("crop_resize then paste approximately restores smooth blobs",
          "[resample][property]") {
  testsupport::Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    // smooth harmonic blob on a 100x80 canvas
    Polygon poly;
    const double cx = rng.uniform(34, 46), cy = rng.uniform(42, 58);
    const double base = rng.uniform(18, 26);
    const double a1 = rng.uniform(0, 0.2), p1 = rng.uniform(0, 6.28);
    for (int i = 0; i < 64; ++i) {
      const double t = 2 * std::numbers::pi * i / 64;
      const double r = base * (1 + a1 * std::cos(3 * t + p1));
      poly.push_back(cx + r * std::cos(t));
      poly.push_back(cy + r * std::sin(t));
    }
    const BinaryMask blob = polygon_rasterize({poly}, 100, 80);
    const BBox box = tight_bbox(blob);
    const GridMask grid = crop_resize(blob, box, 28);
    const BinaryMask back = paste(grid, box, 100, 80);
    CHECK(iou(blob, back) >= 0.9);
  }
}
